#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "snf/errors.hpp"
#include "snf/scalar.hpp"

namespace snf {

/// coeff * t^power * exp(rate * t)
template <class Real>
struct ExpMonomial {
  Complex<Real> coeff{};
  int power = 0;
  Complex<Real> rate{};
};

/// Exponential polynomial in t: a finite sum of ExpMonomial terms.
///
/// Terms are kept canonical: no two share a (rate, power) key (rates closer
/// than rate_merge_tol() are one rate), they are sorted by (Re rate, Im rate,
/// power), and coefficients that cancel below prune_rel_tol() relative to the
/// largest contribution that went into the merge are dropped.
template <class Real>
class TimeCoeff {
 public:
  using Scalar = Complex<Real>;
  using Term = ExpMonomial<Real>;

  TimeCoeff() = default;

  explicit TimeCoeff(const Scalar& constant) {
    if (constant != Scalar(0)) terms_.push_back(Term{constant, 0, Scalar(0)});
  }

  static TimeCoeff monomial(const Scalar& coeff, int power, const Scalar& rate) {
    return from_terms({Term{coeff, power, rate}});
  }

  static TimeCoeff exponential(const Scalar& coeff, const Scalar& rate) {
    return monomial(coeff, 0, rate);
  }

  /// Canonicalize an arbitrary list of terms (duplicates allowed).
  static TimeCoeff from_terms(std::vector<Term> raw);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar operator()(const Real& t) const {
    using std::exp;
    Scalar sum(0);
    for (const auto& term : terms_) {
      Real tk(1);
      for (int i = 0; i < term.power; ++i) tk *= t;
      sum += term.coeff * tk * exp(term.rate * t);
    }
    return sum;
  }

  friend bool operator==(const TimeCoeff& a, const TimeCoeff& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const auto& x = a.terms_[i];
      const auto& y = b.terms_[i];
      if (x.coeff != y.coeff || x.power != y.power || x.rate != y.rate) return false;
    }
    return true;
  }

 private:
  std::vector<Term> terms_;
};

namespace detail {

template <class Real>
bool key_less(const ExpMonomial<Real>& a, const ExpMonomial<Real>& b) {
  using std::imag;
  using std::real;
  if (real(a.rate) != real(b.rate)) return real(a.rate) < real(b.rate);
  if (imag(a.rate) != imag(b.rate)) return imag(a.rate) < imag(b.rate);
  return a.power < b.power;
}

// Coefficients a_j with  int_0^t s^k e^{lambda s} ds = e^{lambda t} sum_j a_j t^j - a_0.
// Requires lambda != 0.
template <class Real>
std::vector<Complex<Real>> antiderivative_coeffs(int k, const Complex<Real>& lambda) {
  std::vector<Complex<Real>> a(k + 1);
  a[k] = Complex<Real>(1) / lambda;
  for (int j = k; j >= 1; --j) a[j - 1] = -(Real(j) * a[j]) / lambda;
  return a;
}

}  // namespace detail

template <class Real>
TimeCoeff<Real> TimeCoeff<Real>::from_terms(std::vector<Term> raw) {
  using std::abs;
  Real scale(0);
  for (const auto& t : raw) scale = std::max<Real>(scale, abs(t.coeff));

  std::sort(raw.begin(), raw.end(), detail::key_less<Real>);
  const Real tol = rate_merge_tol<Real>();
  std::vector<Term> merged;
  merged.reserve(raw.size());
  for (const auto& t : raw) {
    if (t.power < 0) throw DomainError("ExpMonomial power must be non-negative");
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) {
      return m.power == t.power && abs(m.rate - t.rate) <= tol;
    });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coeff += t.coeff;
    }
  }

  const Real cutoff = prune_rel_tol<Real>() * scale;
  TimeCoeff out;
  for (auto& m : merged) {
    const Real mag = abs(m.coeff);
    if (mag == Real(0) || mag < cutoff) continue;
    out.terms_.push_back(m);
  }
  std::sort(out.terms_.begin(), out.terms_.end(), detail::key_less<Real>);
  return out;
}

template <class Real>
TimeCoeff<Real> tc_add(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  std::vector<ExpMonomial<Real>> raw(a.terms());
  raw.insert(raw.end(), b.terms().begin(), b.terms().end());
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

template <class Real>
TimeCoeff<Real> tc_scale(const TimeCoeff<Real>& a, const Complex<Real>& s) {
  std::vector<ExpMonomial<Real>> raw(a.terms());
  for (auto& t : raw) t.coeff *= s;
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

template <class Real>
TimeCoeff<Real> tc_sub(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  std::vector<ExpMonomial<Real>> raw(a.terms());
  for (auto t : b.terms()) {
    t.coeff = -t.coeff;
    raw.push_back(t);
  }
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

/// Raw (uncanonicalized) product terms, for callers that accumulate
/// many contributions before a single canonicalization.
template <class Real>
void tc_mul_into(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b, const Complex<Real>& factor,
                 std::vector<ExpMonomial<Real>>& out) {
  for (const auto& x : a.terms())
    for (const auto& y : b.terms())
      out.push_back({factor * x.coeff * y.coeff, x.power + y.power, x.rate + y.rate});
}

template <class Real>
TimeCoeff<Real> tc_mul(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  std::vector<ExpMonomial<Real>> raw;
  raw.reserve(a.size() * b.size());
  tc_mul_into(a, b, Complex<Real>(1), raw);
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

template <class Real>
TimeCoeff<Real> tc_derivative(const TimeCoeff<Real>& a) {
  std::vector<ExpMonomial<Real>> raw;
  for (const auto& t : a.terms()) {
    raw.push_back({t.coeff * t.rate, t.power, t.rate});
    if (t.power > 0) raw.push_back({t.coeff * Real(t.power), t.power - 1, t.rate});
  }
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

/// g(t) = e^{-U t} int_0^t e^{U s} f(s) ds, so that g' + U g = f and g(0) = 0.
template <class Real>
TimeCoeff<Real> tc_weighted_defint(const TimeCoeff<Real>& f, const Complex<Real>& U) {
  using std::abs;
  std::vector<ExpMonomial<Real>> raw;
  for (const auto& term : f.terms()) {
    const Complex<Real> lambda = term.rate + U;
    if (abs(lambda) <= rate_merge_tol<Real>()) {
      raw.push_back({term.coeff / Real(term.power + 1), term.power + 1, term.rate});
      continue;
    }
    const auto a = detail::antiderivative_coeffs<Real>(term.power, lambda);
    for (int j = 0; j <= term.power; ++j) raw.push_back({term.coeff * a[j], j, term.rate});
    raw.push_back({-(term.coeff * a[0]), 0, -U});
  }
  return TimeCoeff<Real>::from_terms(std::move(raw));
}

/// int_0^inf e^{U s} f(s) ds, exact for integrable inputs.
template <class Real>
Complex<Real> tc_improper_int(const TimeCoeff<Real>& f, const Complex<Real>& U) {
  using std::real;
  Complex<Real> sum(0);
  for (const auto& term : f.terms()) {
    const Complex<Real> lambda = term.rate + U;
    if (!(real(lambda) < -integrability_margin<Real>()))
      throw DivergentIntegral("improper integral diverges: Re(rate + U) is not negative");
    sum -= term.coeff * detail::antiderivative_coeffs<Real>(term.power, lambda)[0];
  }
  return sum;
}

/// An M with |f(t)| <= M e^{-a t} for all t >= 0 (sum of per-term maxima).
template <class Real>
Real tc_decay_bound(const TimeCoeff<Real>& f, const Real& a) {
  using std::abs;
  using std::exp;
  using std::pow;
  using std::real;
  const Real tol = rate_merge_tol<Real>();
  Real bound(0);
  for (const auto& term : f.terms()) {
    const Real b = -(real(term.rate) + a);  // term * e^{at} ~ t^k e^{-b t}
    if (b < -tol) throw UnboundedGrowth("coefficient grows faster than the requested decay");
    if (term.power == 0) {
      bound += abs(term.coeff);
      continue;
    }
    if (b <= tol) throw UnboundedGrowth("polynomial factor is not damped by an exponential");
    const Real k(term.power);
    bound += abs(term.coeff) * pow(k / b, k) * exp(-k);
  }
  return bound;
}

template <class Real>
TimeCoeff<Real> operator+(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  return tc_add(a, b);
}

template <class Real>
TimeCoeff<Real> operator-(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  return tc_sub(a, b);
}

template <class Real>
TimeCoeff<Real> operator*(const TimeCoeff<Real>& a, const TimeCoeff<Real>& b) {
  return tc_mul(a, b);
}

template <class Real>
TimeCoeff<Real> operator*(const Complex<Real>& s, const TimeCoeff<Real>& a) {
  return tc_scale(a, s);
}

using TimeCoeffd = TimeCoeff<double>;

}  // namespace snf
