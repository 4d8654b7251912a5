#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "snf/errors.hpp"
#include "snf/poly_xy.hpp"
#include "snf/time_coeff.hpp"

namespace snf {

/// Regime I: perturbation decays like e^{-a t}, 0 < a < 1.
struct DecayMode {
  double a = 0.5;
};

/// Regime II: bounded (Ly) perturbation, eigenvalues satisfying
/// |Re U(alpha, e_l, Lambda)|^{-1} <= gamma |alpha|^tau.
struct NonResonantMode {
  double gamma = 1.0;
  double tau = 1.0;
};

struct RegimeConfig {
  std::variant<DecayMode, NonResonantMode> mode = DecayMode{};
  double small_divisor_tol = 1e-10;

  bool is_decay() const { return std::holds_alternative<DecayMode>(mode); }

  /// Decay rate used in Taylor norms: a in regime I, 0 in regime II.
  double decay_rate() const { return is_decay() ? std::get<DecayMode>(mode).a : 0.0; }

  void validate(int n) const {
    if (const auto* d = std::get_if<DecayMode>(&mode)) {
      if (!(d->a > 0.0 && d->a < 1.0)) throw DomainError("decay mode requires 0 < a < 1");
    } else {
      const auto& nr = std::get<NonResonantMode>(mode);
      if (!(nr.gamma > 0.0)) throw DomainError("non-resonant mode requires gamma > 0");
      if (!(nr.tau >= n)) throw DomainError("non-resonant mode requires tau >= n");
    }
    if (!(small_divisor_tol >= 0.0)) throw DomainError("small_divisor_tol must be non-negative");
  }
};

struct NonresonanceReport {
  bool passed = true;
  std::vector<int> worst_alpha;
  int worst_l = -1;
  /// max over checked (alpha, l) of |Re U|^{-1} / (gamma |alpha|^tau); passed iff <= 1.
  double worst_ratio = 0.0;
  double min_abs_re_U = std::numeric_limits<double>::infinity();
  long checked = 0;
};

namespace detail {

// Calls visit(alpha) for every alpha in N^n with lo <= |alpha| <= hi.
template <class Visit>
void for_each_alpha(int n, int lo, int hi, Visit&& visit) {
  std::vector<int> alpha(n, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      alpha[pos] = remaining;
      visit(alpha);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      alpha[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  for (int d = lo; d <= hi; ++d) rec(rec, 0, d);
}

}  // namespace detail

/// Checks the Diophantine-type condition for every l and 2 <= |alpha| <= n_trunc.
template <class Real>
NonresonanceReport check_nonresonance(const CVector<Real>& lambda, int n_trunc, double gamma, double tau) {
  using std::abs;
  using std::real;
  const int n = static_cast<int>(lambda.size());
  if (!(tau >= n)) throw DomainError("non-resonance check requires tau >= n");
  NonresonanceReport rep;
  detail::for_each_alpha(n, 2, n_trunc, [&](const std::vector<int>& alpha) {
    for (int l = 0; l < n; ++l) {
      std::vector<int> beta(n, 0);
      beta[l] = 1;
      const double re = static_cast<double>(abs(real(compute_U<Real>(MultiIndex(alpha, beta), lambda))));
      const int deg = std::accumulate(alpha.begin(), alpha.end(), 0);
      const double ratio =
          re == 0.0 ? std::numeric_limits<double>::infinity() : (1.0 / re) / (gamma * std::pow(double(deg), tau));
      ++rep.checked;
      rep.min_abs_re_U = std::min(rep.min_abs_re_U, re);
      if (rep.worst_l < 0 || ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_alpha = alpha;
        rep.worst_l = l;
      }
    }
  });
  rep.passed = rep.worst_ratio <= 1.0;
  return rep;
}

template <class Real>
struct GeneratingFunction {
  PolyXY<Real> chi;
  std::map<MultiIndex, Complex<Real>> initial_conditions;
  RegimeConfig regime;
};

inline std::string describe_index(const MultiIndex& idx) {
  std::ostringstream os;
  os << "alpha=(";
  for (int l = 0; l < idx.dim(); ++l) os << (l ? "," : "") << idx.alpha(l);
  os << ") beta=(";
  for (int l = 0; l < idx.dim(); ++l) os << (l ? "," : "") << idx.beta(l);
  os << ")";
  return os.str();
}

/// Solves lie_h(chi) = f coefficient by coefficient:
///   c' + U c = f_ab,   c(t) = e^{-U t} [c(0) + int_0^t e^{U s} f_ab(s) ds],
/// with c(0) = 0 when Re U >= 0 and c(0) = -int_0^inf e^{U s} f_ab(s) ds
/// otherwise, which selects the bounded solution.
template <class Real>
GeneratingFunction<Real> solve_homological(const PolyXY<Real>& f, const CVector<Real>& lambda,
                                           const RegimeConfig& regime) {
  using std::abs;
  using std::real;
  if (lambda.size() != f.dim()) throw DimensionMismatch("eigenvalue count differs from perturbation dimension");
  regime.validate(f.dim());
  if (!is_qx_ly(f)) throw NotQxLy("homological equation requires a (QxLy) right-hand side");
  if (!regime.is_decay() && !is_ly(f)) throw NotLy("non-resonant regime requires a perturbation linear in y");

  const Real a(regime.decay_rate());
  GeneratingFunction<Real> gen{PolyXY<Real>(f.dim(), f.truncation()), {}, regime};
  for (const auto& [idx, fc] : f.coeffs()) {
    tc_decay_bound(fc, a);  // throws UnboundedGrowth when the decay hypothesis fails
    const Complex<Real> U = compute_U<Real>(idx, lambda);
    if (!regime.is_decay() && abs(real(U)) < Real(regime.small_divisor_tol))
      throw SmallDivisor("small divisor |Re U| below tolerance at " + describe_index(idx));

    TimeCoeff<Real> particular = tc_weighted_defint(fc, U);
    Complex<Real> c0(0);
    if (real(U) < Real(0)) {
      c0 = -tc_improper_int(fc, U);
      std::vector<ExpMonomial<Real>> raw(particular.terms());
      raw.push_back({c0, 0, -U});
      particular = TimeCoeff<Real>::from_terms(std::move(raw));
    }
    gen.initial_conditions.emplace(idx, c0);
    gen.chi.add_term(idx, particular);
  }
  return gen;
}

/// {h, chi} + f, i.e. f - lie_h(chi); empty when chi solves the homological equation.
template <class Real>
PolyXY<Real> homological_residual(const PolyXY<Real>& chi, const PolyXY<Real>& f, const CVector<Real>& lambda) {
  detail::require_same_shape(chi, f);
  PolyAccumulator<Real> acc(f.dim(), f.truncation());
  acc.add(f, Complex<Real>(1));
  for (const auto& [idx, c] : chi.coeffs()) {
    acc.add(idx, tc_derivative(c), Complex<Real>(-1));
    acc.add(idx, c, -compute_U<Real>(idx, lambda));
  }
  return std::move(acc).finish();
}

}  // namespace snf
