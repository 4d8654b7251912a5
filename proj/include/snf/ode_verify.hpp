#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "snf/errors.hpp"
#include "snf/normalizer.hpp"
#include "snf/poly_xy.hpp"

namespace snf {

/// Diagonal system x_l' = lambda_l x_l + g_l(x, t), each g_l an x-only
/// polynomial that is at least quadratic in x.
template <class Real>
struct OdeSystem {
  CVector<Real> lambda;
  std::vector<PolyXY<Real>> g_tilde;

  int dim() const { return static_cast<int>(lambda.size()); }

  void validate() const {
    using std::real;
    if (static_cast<int>(g_tilde.size()) != dim()) throw DimensionMismatch("need one nonlinearity per component");
    for (int l = 0; l < dim(); ++l) {
      if (real(lambda(l)) == Real(0)) throw InvalidSystem("eigenvalues with zero real part are not allowed");
      const auto& g = g_tilde[l];
      if (g.dim() != dim()) throw DimensionMismatch("nonlinearity dimension differs from system dimension");
      if (g.truncation() != g_tilde[0].truncation())
        throw DimensionMismatch("nonlinearities must share one truncation degree");
      if (!is_x_only(g)) throw InvalidSystem("nonlinearity depends on y");
      for (const auto& [idx, c] : g.coeffs())
        if (idx.degree() < 2) throw InvalidSystem("nonlinearity has terms of degree < 2 (constant or linear part)");
    }
  }

  CVector<Real> rhs(const CVector<Real>& x, const Real& t) const {
    CVector<Real> dx(dim());
    const CVector<Real> none;
    for (int l = 0; l < dim(); ++l) dx(l) = lambda(l) * x(l) + g_tilde[l](x, none, t);
    return dx;
  }
};

/// Embeds the system as K = eta + sum_l y_l (lambda_l x_l + g_l(x, t)), i.e.
/// perturbation f = sum_l y_l g_l. The truncation of f is that of the g_l;
/// a g_l term that would exceed it is rejected.
template <class Real>
ExtendedHamiltonian<Real> build_hamiltonian_from_ode(const OdeSystem<Real>& sys) {
  sys.validate();
  const int n = sys.dim();
  const int N = sys.g_tilde[0].truncation();
  PolyXY<Real> f(n, N);
  for (int l = 0; l < n; ++l) {
    for (const auto& [idx, c] : sys.g_tilde[l].coeffs()) {
      if (idx.degree() + 1 > N) throw InvalidSystem("nonlinearity degree exceeds truncation - 1; raise n_trunc");
      f.add_term(idx.shifted(n + l, 1), c);
    }
  }
  return ExtendedHamiltonian<Real>(sys.lambda, std::move(f));
}

/// Recovers the ODE nonlinearities from a perturbation that is linear in y.
template <class Real>
OdeSystem<Real> ode_from_hamiltonian(const ExtendedHamiltonian<Real>& H) {
  const auto& f = H.perturbation;
  if (!is_ly(f)) throw NotLy("perturbation is not linear in y; no ODE embedding");
  const int n = f.dim();
  OdeSystem<Real> sys{H.lambda, std::vector<PolyXY<Real>>(n, PolyXY<Real>(n, f.truncation()))};
  for (const auto& [idx, c] : f.coeffs())
    for (int l = 0; l < n; ++l)
      if (idx.beta(l) == 1) sys.g_tilde[l].add_term(idx.shifted(n + l, -1), c);
  return sys;
}

/// d/d(variable v) of a polynomial.
template <class Real>
PolyXY<Real> poly_diff(const PolyXY<Real>& F, int v) {
  PolyXY<Real> out(F.dim(), F.truncation());
  for (const auto& [idx, c] : F.coeffs()) {
    const int e = idx[v];
    if (e == 0) continue;
    out.add_term(idx.shifted(v, -1), tc_scale(c, Complex<Real>(Real(e))));
  }
  return out;
}

/// x = M_x(x_inf, t): one x-only polynomial per component.
template <class Real>
struct XMap {
  std::vector<PolyXY<Real>> components;

  int dim() const { return static_cast<int>(components.size()); }

  static XMap identity(int n, int n_trunc) {
    XMap m;
    for (int l = 0; l < n; ++l) m.components.push_back(PolyXY<Real>::coordinate_x(n, n_trunc, l));
    return m;
  }

  CVector<Real> operator()(const CVector<Real>& xi, const Real& t) const {
    CVector<Real> x(dim());
    const CVector<Real> none;
    for (int l = 0; l < dim(); ++l) x(l) = components[l](xi, none, t);
    return x;
  }

  CMatrix<Real> jacobian(const CVector<Real>& xi, const Real& t) const {
    ensure_derivatives();
    CMatrix<Real> J(dim(), dim());
    const CVector<Real> none;
    for (int l = 0; l < dim(); ++l)
      for (int k = 0; k < dim(); ++k) J(l, k) = derivatives_[l * dim() + k](xi, none, t);
    return J;
  }

  bool y_independent() const {
    return std::all_of(components.begin(), components.end(), [](const auto& c) { return is_x_only(c); });
  }

 private:
  void ensure_derivatives() const {
    if (!derivatives_.empty()) return;
    for (int l = 0; l < dim(); ++l)
      for (int k = 0; k < dim(); ++k) derivatives_.push_back(poly_diff(components[l], k));
  }
  mutable std::vector<PolyXY<Real>> derivatives_;
};

/// Composes the chain on the coordinate functions:
///   X <- exp(L_{chi_j}) X  for j = 0, 1, ..., starting from X = x.
template <class Real>
XMap<Real> extract_x_map(const TransformChain<Real>& chain) {
  const int n = static_cast<int>(chain.lambda.size());
  XMap<Real> map = XMap<Real>::identity(n, chain.n_trunc);
  for (const auto& gen : chain.generators)
    if (!is_ly(gen.chi)) throw NotLy("generating function is not linear in y; the x-map would depend on y");
  for (const auto& gen : chain.generators)
    for (auto& comp : map.components) comp = lie_transform(comp, gen.chi);
  if (!map.y_independent()) throw NumericalFailure("x-map picked up y-dependence from a (Ly) chain");
  return map;
}

struct TrajectoryMeta {
  std::string method;
  int steps = 0;
  double error_estimate = 0.0;  // Richardson estimate of the sup error of the stored states
};

template <class Real>
struct Trajectory {
  std::vector<Real> times;
  std::vector<CVector<Real>> states;
  TrajectoryMeta meta;
};

template <class Real>
std::vector<Real> uniform_grid(const Real& T, int steps) {
  std::vector<Real> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = T * Real(i) / Real(steps);
  return times;
}

namespace detail {

template <class Real>
std::vector<CVector<Real>> rk4_pass(const OdeSystem<Real>& sys, const CVector<Real>& x0, const Real& T, int steps) {
  const Real h = T / Real(steps);
  const Real half = h / Real(2);
  std::vector<CVector<Real>> out;
  out.reserve(steps + 1);
  CVector<Real> x = x0;
  out.push_back(x);
  for (int i = 0; i < steps; ++i) {
    const Real t = T * Real(i) / Real(steps);
    const CVector<Real> k1 = sys.rhs(x, t);
    const CVector<Real> k2 = sys.rhs(x + k1 * Complex<Real>(half), t + half);
    const CVector<Real> k3 = sys.rhs(x + k2 * Complex<Real>(half), t + half);
    const CVector<Real> k4 = sys.rhs(x + k3 * Complex<Real>(h), t + h);
    x = x + (k1 + k2 * Complex<Real>(Real(2)) + k3 * Complex<Real>(Real(2)) + k4) * Complex<Real>(h / Real(6));
    out.push_back(x);
  }
  return out;
}

template <class Real>
Real sup_norm(const CVector<Real>& v) {
  using std::abs;
  Real m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max<Real>(m, abs(v(i)));
  return m;
}

}  // namespace detail

/// Classical RK4 on a uniform grid of `steps` intervals. A second pass at
/// twice the resolution gives the Richardson estimate stored in meta;
/// a two-resolution discrepancy above 1e-6 relative throws StepTooLarge.
template <class Real>
Trajectory<Real> integrate_ode(const OdeSystem<Real>& sys, const CVector<Real>& x0, const Real& T, int steps) {
  sys.validate();
  if (steps < 16) throw DomainError("integrate_ode requires steps >= 16");
  if (!(T > Real(0))) throw DomainError("integration horizon must be positive");
  if (x0.size() != sys.dim()) throw DimensionMismatch("initial condition has the wrong dimension");

  Trajectory<Real> traj;
  traj.times = uniform_grid(T, steps);
  traj.states = detail::rk4_pass(sys, x0, T, steps);
  const auto fine = detail::rk4_pass(sys, x0, T, 2 * steps);

  Real discrepancy(0), scale(0);
  for (int i = 0; i <= steps; ++i) {
    discrepancy = std::max(discrepancy, detail::sup_norm<Real>(traj.states[i] - fine[2 * i]));
    scale = std::max(scale, detail::sup_norm<Real>(fine[2 * i]));
  }
  using std::isfinite;
  if (!isfinite(static_cast<double>(discrepancy)) || discrepancy > Real(1e-6) * scale)
    throw StepTooLarge("RK4 two-resolution discrepancy exceeds 1e-6 relative; increase steps");
  traj.meta = {"rk4", steps, static_cast<double>(discrepancy * Real(16) / Real(15))};
  return traj;
}

/// Solves M_x(xi, t) = x by Newton iteration from xi = x.
template <class Real>
CVector<Real> invert_x_map(const XMap<Real>& map, const CVector<Real>& x, const Real& t) {
  if (x.size() != map.dim()) throw DimensionMismatch("point has the wrong dimension");
  const Real tol = Real(1e-13) * eps_ratio<Real>();
  CVector<Real> xi = x;
  for (int it = 0; it < 50; ++it) {
    const CVector<Real> r = map(xi, t) - x;
    if (detail::sup_norm<Real>(r) == Real(0)) break;
    const CVector<Real> step = map.jacobian(xi, t).partialPivLu().solve(r);
    xi -= step;
    if (detail::sup_norm<Real>(step) <= Real(4) * epsilon<Real>() * detail::sup_norm<Real>(xi)) break;
  }
  const Real res = detail::sup_norm<Real>(map(xi, t) - x);
  using std::isfinite;
  if (!isfinite(static_cast<double>(res)) || res > tol) throw NewtonDiverged("Newton inversion of the x-map failed");
  return xi;
}

/// x(t) = M_x(xi_0 e^{Lambda t}, t) with xi_0 = M_x^{-1}(x0, 0).
template <class Real>
Trajectory<Real> closed_form_solution(const TransformChain<Real>& chain, const XMap<Real>& map,
                                      const CVector<Real>& x0, const std::vector<Real>& times) {
  using std::exp;
  const CVector<Real> xi0 = invert_x_map(map, x0, Real(0));
  Trajectory<Real> traj;
  traj.times = times;
  traj.meta = {"normal-form", static_cast<int>(times.size()) - 1, 0.0};
  for (const Real& t : times) {
    CVector<Real> xi(xi0.size());
    for (Eigen::Index l = 0; l < xi0.size(); ++l) xi(l) = xi0(l) * exp(chain.lambda(l) * t);
    traj.states.push_back(map(xi, t));
  }
  return traj;
}

struct ErrorReport {
  double sup_abs = 0.0;
  double sup_rel = 0.0;
  std::vector<double> abs_err;
  std::vector<double> rel_err;
};

template <class Real>
ErrorReport compare(const Trajectory<Real>& a, const Trajectory<Real>& b) {
  using std::abs;
  if (a.times.size() != b.times.size() || a.states.size() != b.states.size() || a.times.size() != a.states.size())
    throw GridMismatch("trajectories are sampled on different grids");
  ErrorReport rep;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    const Real span = std::max<Real>(Real(1), abs(a.times[i]));
    if (abs(a.times[i] - b.times[i]) > Real(1e-12) * span) throw GridMismatch("trajectory time grids differ");
    const double e = static_cast<double>(detail::sup_norm<Real>(a.states[i] - b.states[i]));
    const double ref = static_cast<double>(detail::sup_norm<Real>(b.states[i]));
    const double rel = ref > 0.0 ? e / ref : (e == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rep.abs_err.push_back(e);
    rep.rel_err.push_back(rel);
    rep.sup_abs = std::max(rep.sup_abs, e);
    rep.sup_rel = std::max(rep.sup_rel, rel);
  }
  return rep;
}

/// Real system v' = A v + g(v, t) given in modal coordinates x = P^{-1} v,
/// with A = P diag(lambda) P^{-1} supplied already diagonalized.
template <class Real>
struct ModalEmbedding {
  CMatrix<Real> eigenvectors;  // P
  OdeSystem<Real> modal;

  CVector<Real> to_modal(const CVector<Real>& v) const { return eigenvectors.partialPivLu().solve(v); }
  CVector<Real> to_physical(const CVector<Real>& x) const { return eigenvectors * x; }

  Trajectory<Real> to_physical(Trajectory<Real> traj) const {
    for (auto& s : traj.states) s = to_physical(s);
    return traj;
  }
};

}  // namespace snf
