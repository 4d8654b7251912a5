#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "snf/homological.hpp"
#include "snf/poly_xy.hpp"
#include "snf/theory.hpp"

namespace snf {

enum class DeltaSchedule {
  Measured,     // theory track seeded with the measured ||f||_{R0}
  Theoretical,  // theory track seeded with the analytic overestimate of ||f||_{R0}
};

struct NormalizationConfig {
  int n = 1;
  int n_trunc = 8;
  double R0 = 0.5;
  RegimeConfig regime;
  int max_iterations = 32;
  DeltaSchedule delta_schedule_source = DeltaSchedule::Measured;

  void validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (n_trunc < 3) throw DomainError("n_trunc must be >= 3");
    if (!(R0 > 0.0 && R0 <= 0.5)) throw DomainError("R0 must lie in (0, 1/2]");
    if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
    regime.validate(n);
  }
};

struct IterationRecord {
  int j = 0;
  double measured_norm = 0.0;  // taylor_norm(f_j, R_j, a)
  double epsilon_theory = 0.0;
  double R_j = 0.0;
  double d_j = 0.0;
  int min_deg = 0;
  double chi_norm = 0.0;  // taylor_norm(chi_j, R_j, 0)
};

/// Generating sequence chi_0, chi_1, ...; the normalizing map is
/// exp(L_{chi_J}) o ... o exp(L_{chi_0}).
template <class Real>
struct TransformChain {
  std::vector<GeneratingFunction<Real>> generators;
  CVector<Real> lambda;
  int n_trunc = 0;

  bool empty() const { return generators.empty(); }
  std::size_t size() const { return generators.size(); }
};

template <class Real>
struct NormalizationResult {
  TransformChain<Real> chain;
  std::vector<IterationRecord> records;
  PolyXY<Real> final_remainder;
  /// f^(0), f^(1), ..., f^(J) with f^(J) the final remainder.
  std::vector<PolyXY<Real>> remainders;
  bool success = false;
  double eps0_measured = 0.0;
  double eps0_analytic = 0.0;
  SchemeConstants constants;
  std::optional<TheorySchedule> theory;  // empty when the seed violates eps0 <= eps_a
  std::optional<NonresonanceReport> nonresonance;
};

/// ceil(log2(n_trunc - 2)) + 1
inline int iteration_budget(int n_trunc) {
  int k = 0;
  while ((1 << k) < n_trunc - 2) ++k;
  return k + 1;
}

/// Quadratic-method iteration: chi_j solves the homological equation for f_j,
/// then f_{j+1} = sum_{s>=1} s/(s+1)! L_j^s f_j, until f_j vanishes modulo
/// the truncation degree. The theory sequences are tracked alongside as a
/// certificate and never steer the algebra.
template <class Real>
NormalizationResult<Real> normalize(const ExtendedHamiltonian<Real>& H, const NormalizationConfig& config) {
  config.validate();
  const PolyXY<Real>& f0 = H.perturbation;
  if (f0.dim() != config.n || f0.truncation() != config.n_trunc)
    throw DimensionMismatch("Hamiltonian shape differs from the normalization config");

  NormalizationResult<Real> out;
  out.chain.lambda = H.lambda;
  out.chain.n_trunc = config.n_trunc;

  const RegimeConfig& regime = config.regime;
  if (!regime.is_decay()) {
    if (!is_ly(f0)) throw NotLy("non-resonant regime requires a perturbation linear in y");
    const auto& nr = std::get<NonResonantMode>(regime.mode);
    out.nonresonance = check_nonresonance<Real>(H.lambda, config.n_trunc, nr.gamma, nr.tau);
    if (!out.nonresonance->passed)
      throw NonresonanceViolated("eigenvalues fail the non-resonance condition (|Re U|^{-1} > gamma |alpha|^tau)");
  }

  const Real a(regime.decay_rate());
  const Real R0(config.R0);
  out.eps0_measured = static_cast<double>(taylor_norm(f0, R0, a));
  out.eps0_analytic = eps0_analytic(std::max(1.0, out.eps0_measured), config.n, config.R0, is_ly(f0));
  out.constants = scheme_constants(config.n, lambda_sup_norm<Real>(H.lambda), regime, config.R0 / 2.0);

  const double seed =
      config.delta_schedule_source == DeltaSchedule::Measured ? out.eps0_measured : out.eps0_analytic;
  if (seed > 0.0) {
    try {
      out.theory = theoretical_sequences(seed, out.constants.a_eff, out.constants.K, out.constants.sigma,
                                         config.R0, config.max_iterations);
    } catch (const ConvergenceConditionViolated&) {
      out.theory.reset();
    }
  }

  PolyXY<Real> f = f0;
  out.remainders.push_back(f);
  for (int j = 0; j < config.max_iterations && !f.is_zero(); ++j) {
    GeneratingFunction<Real> gen = solve_homological(f, H.lambda, regime);

    IterationRecord rec;
    rec.j = j;
    if (out.theory) {
      const auto& st = out.theory->steps[j];
      rec.epsilon_theory = st.eps;
      rec.d_j = st.d;
      rec.R_j = st.R;
    } else {
      rec.epsilon_theory = std::numeric_limits<double>::quiet_NaN();
      rec.d_j = 0.0;
      rec.R_j = config.R0;
    }
    const bool radius_ok = rec.R_j > 0.0;
    rec.measured_norm =
        radius_ok ? static_cast<double>(taylor_norm(f, Real(rec.R_j), a)) : std::numeric_limits<double>::quiet_NaN();
    rec.chi_norm = radius_ok ? static_cast<double>(taylor_norm(gen.chi, Real(rec.R_j), Real(0)))
                             : std::numeric_limits<double>::quiet_NaN();
    rec.min_deg = min_degree(f);
    out.records.push_back(rec);

    f = lie_remainder(f, gen.chi);
    out.chain.generators.push_back(std::move(gen));
    out.remainders.push_back(f);
  }

  out.final_remainder = f;
  out.success = f.is_zero();
  if (!out.success) throw MaxIterationsExceeded("remainder did not vanish within max_iterations");
  return out;
}

/// {h, chi} computed from the bracket itself: {sum_l lambda_l x_l y_l, chi} - d chi/dt.
/// (The eta part is -d/dt because t is the coordinate conjugate to eta.)
template <class Real>
PolyXY<Real> bracket_with_h(const PolyXY<Real>& chi, const CVector<Real>& lambda) {
  const int n = chi.dim();
  PolyXY<Real> quad(n, chi.truncation());
  for (int l = 0; l < n; ++l) {
    std::vector<int> e(n, 0);
    e[l] = 1;
    quad.add_term(MultiIndex(e, e), TimeCoeff<Real>(lambda(l)));
  }
  return poly_sub(poly_poisson(quad, chi), poly_time_derivative(chi));
}

/// Pushes H through every generator by full Lie-series expansion,
///   H' = exp(L_chi) (h + P) = h + exp(L_chi) P + sum_{s>=1} L^{s-1}({h, chi}) / s!,
/// and returns the final P. Does not use the homological equation, so an
/// empty result independently certifies the strong normal form mod degree > N.
template <class Real>
PolyXY<Real> transform_hamiltonian(const ExtendedHamiltonian<Real>& H, const TransformChain<Real>& chain) {
  PolyXY<Real> P = H.perturbation;
  for (const auto& gen : chain.generators) {
    const PolyXY<Real> lh = bracket_with_h(gen.chi, H.lambda);
    PolyAccumulator<Real> acc(P.dim(), P.truncation());
    acc.add(lie_transform(P, gen.chi), Complex<Real>(1));
    acc.add(detail::lie_series(lh, gen.chi, 0, [](int s) { return Real(1) / factorial<Real>(s + 1); }),
            Complex<Real>(1));
    P = std::move(acc).finish();
  }
  return P;
}

}  // namespace snf
