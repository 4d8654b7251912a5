#pragma once

#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "snf/errors.hpp"
#include "snf/scalar.hpp"
#include "snf/time_coeff.hpp"

namespace snf {

/// Exponent pair (alpha, beta) of the monomial x^alpha y^beta in C^{2n}.
/// Ordered graded-lexicographically: total degree first, then lex on
/// the concatenation (alpha, beta).
class MultiIndex {
 public:
  MultiIndex() = default;

  MultiIndex(std::vector<int> alpha, const std::vector<int>& beta) : n_(static_cast<int>(alpha.size())) {
    if (alpha.size() != beta.size()) throw DimensionMismatch("alpha and beta must have equal length");
    exps_ = std::move(alpha);
    exps_.insert(exps_.end(), beta.begin(), beta.end());
    for (int e : exps_)
      if (e < 0) throw DomainError("multi-index exponents must be non-negative");
    degree_ = std::accumulate(exps_.begin(), exps_.end(), 0);
  }

  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0), std::vector<int>(n, 0)); }

  static MultiIndex x_power(const std::vector<int>& alpha) {
    return MultiIndex(alpha, std::vector<int>(alpha.size(), 0));
  }

  int dim() const { return n_; }
  int alpha(int l) const { return exps_[l]; }
  int beta(int l) const { return exps_[n_ + l]; }
  std::span<const int> alpha() const { return {exps_.data(), static_cast<std::size_t>(n_)}; }
  std::span<const int> beta() const { return {exps_.data() + n_, static_cast<std::size_t>(n_)}; }
  int degree() const { return degree_; }
  int alpha_degree() const { return std::accumulate(exps_.begin(), exps_.begin() + n_, 0); }
  int beta_degree() const { return degree_ - alpha_degree(); }

  /// Exponent of variable v in the concatenated order (x_1..x_n, y_1..y_n).
  int operator[](int v) const { return exps_[v]; }

  MultiIndex shifted(int v, int delta) const {
    MultiIndex r = *this;
    r.exps_[v] += delta;
    r.degree_ += delta;
    return r;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (std::size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] += b.exps_[i];
    r.degree_ += b.degree_;
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }

  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.exps_ < b.exps_;
  }

 private:
  int n_ = 0;
  std::vector<int> exps_;
  int degree_ = 0;
};

/// Truncated polynomial in (x, y) in C^{2n} with TimeCoeff coefficients.
/// Every stored index has total degree <= truncation(); zero coefficients
/// are never stored.
template <class Real>
class PolyXY {
 public:
  using Coeff = TimeCoeff<Real>;
  using Scalar = Complex<Real>;
  using Map = std::map<MultiIndex, Coeff>;

  PolyXY() = default;
  PolyXY(int n, int n_trunc) : n_(n), n_trunc_(n_trunc) {
    if (n < 1) throw DomainError("dimension must be >= 1");
    if (n_trunc < 0) throw DomainError("truncation degree must be >= 0");
  }

  int dim() const { return n_; }
  int truncation() const { return n_trunc_; }
  const Map& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  Coeff coeff(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? Coeff{} : it->second;
  }

  /// Adds c to the coefficient of idx; terms above the truncation degree are dropped.
  void add_term(const MultiIndex& idx, const Coeff& c) {
    check_index(idx);
    if (idx.degree() > n_trunc_ || c.is_zero()) return;
    auto it = coeffs_.find(idx);
    if (it == coeffs_.end()) {
      coeffs_.emplace(idx, c);
      return;
    }
    it->second = tc_add(it->second, c);
    if (it->second.is_zero()) coeffs_.erase(it);
  }

  static PolyXY coordinate(int n, int n_trunc, int v) {
    PolyXY p(n, n_trunc);
    std::vector<int> e(2 * n, 0);
    e[v] = 1;
    p.add_term(MultiIndex({e.begin(), e.begin() + n}, {e.begin() + n, e.end()}), Coeff(Scalar(1)));
    return p;
  }

  static PolyXY coordinate_x(int n, int n_trunc, int l) { return coordinate(n, n_trunc, l); }
  static PolyXY coordinate_y(int n, int n_trunc, int l) { return coordinate(n, n_trunc, n + l); }

  /// Value at (x, y, t); y may be empty for x-only polynomials.
  Scalar operator()(const CVector<Real>& x, const CVector<Real>& y, const Real& t) const {
    Scalar sum(0);
    for (const auto& [idx, c] : coeffs_) {
      Scalar mono(1);
      for (int l = 0; l < n_; ++l) {
        for (int k = 0; k < idx.alpha(l); ++k) mono *= x(l);
        for (int k = 0; k < idx.beta(l); ++k) mono *= y(l);
      }
      sum += c(t) * mono;
    }
    return sum;
  }

  friend bool operator==(const PolyXY& a, const PolyXY& b) {
    return a.n_ == b.n_ && a.n_trunc_ == b.n_trunc_ && a.coeffs_ == b.coeffs_;
  }

  void check_index(const MultiIndex& idx) const {
    if (idx.dim() != n_) throw DimensionMismatch("multi-index dimension does not match polynomial");
  }

 private:
  int n_ = 1;
  int n_trunc_ = 0;
  Map coeffs_;
};

/// Collects raw coefficient terms per index and canonicalizes each index
/// once, so cancellations are judged against every contribution.
template <class Real>
class PolyAccumulator {
 public:
  PolyAccumulator(int n, int n_trunc) : n_(n), n_trunc_(n_trunc) {}

  void add(const MultiIndex& idx, const TimeCoeff<Real>& c, const Complex<Real>& factor) {
    if (idx.degree() > n_trunc_) return;
    auto& raw = raw_[idx];
    for (auto t : c.terms()) {
      t.coeff *= factor;
      raw.push_back(t);
    }
  }

  void add_product(const MultiIndex& idx, const TimeCoeff<Real>& a, const TimeCoeff<Real>& b,
                   const Complex<Real>& factor) {
    if (idx.degree() > n_trunc_) return;
    tc_mul_into(a, b, factor, raw_[idx]);
  }

  void add(const PolyXY<Real>& p, const Complex<Real>& factor) {
    for (const auto& [idx, c] : p.coeffs()) add(idx, c, factor);
  }

  PolyXY<Real> finish() && {
    PolyXY<Real> out(n_, n_trunc_);
    for (auto& [idx, raw] : raw_) out.add_term(idx, TimeCoeff<Real>::from_terms(std::move(raw)));
    return out;
  }

 private:
  int n_;
  int n_trunc_;
  std::map<MultiIndex, std::vector<ExpMonomial<Real>>> raw_;
};

namespace detail {

template <class Real>
void require_same_shape(const PolyXY<Real>& a, const PolyXY<Real>& b) {
  if (a.dim() != b.dim() || a.truncation() != b.truncation())
    throw DimensionMismatch("polynomials differ in dimension or truncation degree");
}

}  // namespace detail

template <class Real>
PolyXY<Real> poly_add(const PolyXY<Real>& a, const PolyXY<Real>& b, const Complex<Real>& b_factor = Complex<Real>(1)) {
  detail::require_same_shape(a, b);
  PolyAccumulator<Real> acc(a.dim(), a.truncation());
  acc.add(a, Complex<Real>(1));
  acc.add(b, b_factor);
  return std::move(acc).finish();
}

template <class Real>
PolyXY<Real> poly_sub(const PolyXY<Real>& a, const PolyXY<Real>& b) {
  return poly_add(a, b, Complex<Real>(-1));
}

template <class Real>
PolyXY<Real> poly_scale(const PolyXY<Real>& a, const Complex<Real>& s) {
  PolyAccumulator<Real> acc(a.dim(), a.truncation());
  acc.add(a, s);
  return std::move(acc).finish();
}

/// Truncated product F * G.
template <class Real>
PolyXY<Real> poly_mul(const PolyXY<Real>& F, const PolyXY<Real>& G) {
  detail::require_same_shape(F, G);
  PolyAccumulator<Real> acc(F.dim(), F.truncation());
  for (const auto& [i, cf] : F.coeffs())
    for (const auto& [k, cg] : G.coeffs())
      if (i.degree() + k.degree() <= F.truncation()) acc.add_product(i + k, cf, cg, Complex<Real>(1));
  return std::move(acc).finish();
}

/// Canonical Poisson bracket with x as coordinates and y as momenta:
///   {F, G} = sum_l (dF/dx_l dG/dy_l - dF/dy_l dG/dx_l),
/// truncated at the common truncation degree.
template <class Real>
PolyXY<Real> poly_poisson(const PolyXY<Real>& F, const PolyXY<Real>& G) {
  detail::require_same_shape(F, G);
  const int n = F.dim();
  const int N = F.truncation();
  PolyAccumulator<Real> acc(n, N);
  for (const auto& [i, cf] : F.coeffs()) {
    for (const auto& [k, cg] : G.coeffs()) {
      if (i.degree() + k.degree() - 2 > N) continue;
      for (int l = 0; l < n; ++l) {
        // Both products land on x^{a_F+a_G-e_l} y^{b_F+b_G-e_l}.
        const int weight = i.alpha(l) * k.beta(l) - i.beta(l) * k.alpha(l);
        if (weight == 0) continue;
        const MultiIndex idx = (i + k).shifted(l, -1).shifted(n + l, -1);
        acc.add_product(idx, cf, cg, Complex<Real>(Real(weight)));
      }
    }
  }
  return std::move(acc).finish();
}

/// U(alpha, beta, Lambda) = (alpha - beta) . Lambda
template <class Real>
Complex<Real> compute_U(const MultiIndex& idx, const CVector<Real>& lambda) {
  if (idx.dim() != lambda.size()) throw DimensionMismatch("eigenvalue vector does not match index dimension");
  Complex<Real> u(0);
  for (int l = 0; l < idx.dim(); ++l) u += Real(idx.alpha(l) - idx.beta(l)) * lambda(l);
  return u;
}

/// Coefficientwise  c_{ab} -> dc_{ab}/dt + U(a, b, Lambda) c_{ab}.
///
/// With the bracket convention of poly_poisson and t conjugate to eta, the
/// Lie derivative of h = eta + sum_l lambda_l x_l y_l along chi is
///   {h, chi} = -lie_h(chi, lambda),
/// so the homological equation {h, chi} + f = 0 reads lie_h(chi) = f.
template <class Real>
PolyXY<Real> lie_h(const PolyXY<Real>& chi, const CVector<Real>& lambda) {
  PolyAccumulator<Real> acc(chi.dim(), chi.truncation());
  for (const auto& [idx, c] : chi.coeffs()) {
    const Complex<Real> U = compute_U<Real>(idx, lambda);
    const TimeCoeff<Real> dc = tc_derivative(c);
    acc.add(idx, dc, Complex<Real>(1));
    acc.add(idx, c, U);
  }
  return std::move(acc).finish();
}

/// Partial time derivative, coefficientwise.
template <class Real>
PolyXY<Real> poly_time_derivative(const PolyXY<Real>& F) {
  PolyXY<Real> out(F.dim(), F.truncation());
  for (const auto& [idx, c] : F.coeffs()) out.add_term(idx, tc_derivative(c));
  return out;
}

template <class Real>
int min_degree(const PolyXY<Real>& F) {
  if (F.is_zero()) throw EmptyPolynomial("min_degree of the zero polynomial");
  return F.coeffs().begin()->first.degree();  // graded order
}

template <class Real>
int max_degree(const PolyXY<Real>& F) {
  if (F.is_zero()) throw EmptyPolynomial("max_degree of the zero polynomial");
  return F.coeffs().rbegin()->first.degree();
}

/// Supported on Gamma = {|alpha| >= 2, |beta| >= 1}.
template <class Real>
bool is_qx_ly(const PolyXY<Real>& F) {
  for (const auto& [idx, c] : F.coeffs())
    if (idx.alpha_degree() < 2 || idx.beta_degree() < 1) return false;
  return true;
}

/// Every stored index has beta = e_l for some l.
template <class Real>
bool is_ly(const PolyXY<Real>& F) {
  for (const auto& [idx, c] : F.coeffs())
    if (idx.beta_degree() != 1) return false;
  return true;
}

template <class Real>
bool is_x_only(const PolyXY<Real>& F) {
  for (const auto& [idx, c] : F.coeffs())
    if (idx.beta_degree() != 0) return false;
  return true;
}

namespace detail {

// sum_{s >= s0} weight(s) L^s F with L = {., chi}; terminates because each
// bracket with chi raises the minimum degree by at least min_deg(chi) - 2.
template <class Real, class Weight>
PolyXY<Real> lie_series(const PolyXY<Real>& F, const PolyXY<Real>& chi, int s0, Weight weight) {
  require_same_shape(F, chi);
  PolyAccumulator<Real> acc(F.dim(), F.truncation());
  if (chi.is_zero()) {
    if (s0 == 0) acc.add(F, Complex<Real>(1));
    return std::move(acc).finish();
  }
  if (min_degree(chi) < 3)
    throw NonterminatingSeries("generating function has terms of degree < 3; the Lie series does not terminate");
  PolyXY<Real> term = F;
  for (int s = 0; !term.is_zero(); ++s) {
    if (s >= s0) acc.add(term, Complex<Real>(weight(s)));
    term = poly_poisson(term, chi);
  }
  return std::move(acc).finish();
}

}  // namespace detail

/// exp(L_chi) F = sum_s (1/s!) {...{F, chi}..., chi}, exact up to truncation.
template <class Real>
PolyXY<Real> lie_transform(const PolyXY<Real>& F, const PolyXY<Real>& chi) {
  return detail::lie_series(F, chi, 0, [](int s) { return Real(1) / factorial<Real>(s); });
}

/// sum_{s >= 1} s/(s+1)! L_chi^s F: the remainder left after removing F with chi.
template <class Real>
PolyXY<Real> lie_remainder(const PolyXY<Real>& F, const PolyXY<Real>& chi) {
  return detail::lie_series(F, chi, 1, [](int s) { return Real(s) / factorial<Real>(s + 1); });
}

/// M with ||F(., ., t)||_R <= M e^{-a t} for all t >= 0, where ||.||_R is the
/// weighted l1 Taylor norm sum |f_ab(t)| R^{|a+b|}.
template <class Real>
Real taylor_norm(const PolyXY<Real>& F, const Real& R, const Real& a) {
  if (!(R > Real(0))) throw DomainError("Taylor norm radius must be positive");
  Real sum(0);
  for (const auto& [idx, c] : F.coeffs()) {
    Real rd(1);
    for (int k = 0; k < idx.degree(); ++k) rd *= R;
    sum += tc_decay_bound(c, a) * rd;
  }
  return sum;
}

/// Weighted l1 norm of the coefficients frozen at time t.
template <class Real>
Real taylor_norm_at(const PolyXY<Real>& F, const Real& R, const Real& t) {
  using std::abs;
  Real sum(0);
  for (const auto& [idx, c] : F.coeffs()) {
    Real rd(1);
    for (int k = 0; k < idx.degree(); ++k) rd *= R;
    sum += abs(c(t)) * rd;
  }
  return sum;
}

template <class Real>
PolyXY<Real> operator+(const PolyXY<Real>& a, const PolyXY<Real>& b) {
  return poly_add(a, b);
}

template <class Real>
PolyXY<Real> operator-(const PolyXY<Real>& a, const PolyXY<Real>& b) {
  return poly_sub(a, b);
}

template <class Real>
PolyXY<Real> operator*(const PolyXY<Real>& a, const PolyXY<Real>& b) {
  return poly_mul(a, b);
}

/// Extended Hamiltonian H = eta + sum_l lambda_l x_l y_l + f. Only the
/// eigenvalues and the perturbation f are stored; f must be (QxLy).
template <class Real>
struct ExtendedHamiltonian {
  CVector<Real> lambda;
  PolyXY<Real> perturbation;

  ExtendedHamiltonian(CVector<Real> lambda_, PolyXY<Real> f) : lambda(std::move(lambda_)), perturbation(std::move(f)) {
    if (lambda.size() != perturbation.dim()) throw DimensionMismatch("eigenvalue count differs from perturbation dimension");
    if (!is_qx_ly(perturbation)) throw NotQxLy("perturbation is not at least quadratic in x and linear in y");
  }

  int dim() const { return perturbation.dim(); }
};

using PolyXYd = PolyXY<double>;

}  // namespace snf
