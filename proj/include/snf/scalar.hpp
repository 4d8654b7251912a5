#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace snf {

// Maps a real scalar to the complex type used for coefficients and states.
// Extended-precision backends specialize this (see tests/support).
template <class Real>
struct ScalarTraits {
  using Complex = std::complex<Real>;
};

template <class Real>
using Complex = typename ScalarTraits<Real>::Complex;

template <class Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <class Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

// Tolerances are stated for double and scale with machine epsilon for
// other scalar types, so extended precision tightens them proportionally.
template <class Real>
Real eps_ratio() {
  return epsilon<Real>() / Real(std::numeric_limits<double>::epsilon());
}

/// Absolute distance below which two exponential rates are the same rate.
template <class Real>
Real rate_merge_tol() {
  return Real(1e-12) * eps_ratio<Real>();
}

/// Relative magnitude below which a merged coefficient is dropped.
template <class Real>
Real prune_rel_tol() {
  return Real(1e-14) * eps_ratio<Real>();
}

/// Margin required by closed-form improper integrals: Re(rate) < -margin.
template <class Real>
Real integrability_margin() {
  return rate_merge_tol<Real>();
}

template <class Real>
Real factorial(int k) {
  Real r(1);
  for (int i = 2; i <= k; ++i) r *= Real(i);
  return r;
}

}  // namespace snf
