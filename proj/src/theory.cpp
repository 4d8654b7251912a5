#include "snf/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace snf {

double counting_constant(int m, double mu) {
  if (m < 1) throw DomainError("counting_constant requires m >= 1");
  if (mu < 0.0) throw DomainError("counting_constant requires mu >= 0");
  const double mm = m + mu;
  return std::exp(4.0 * m + mu - 1.0) * std::pow(mm, mm) / std::tgamma(double(m));
}

SchemeConstants scheme_constants(int n, double lambda_sup, const RegimeConfig& regime, double R_star) {
  if (!(R_star > 0.0)) throw DomainError("R_star must be positive");
  regime.validate(n);
  const double e2 = std::exp(2.0);
  SchemeConstants c;
  if (const auto* d = std::get_if<DecayMode>(&regime.mode)) {
    c.decay = true;
    c.C_hat = counting_constant(2 * n, 0.0);
    c.C = (1.0 + lambda_sup) * counting_constant(2 * n, 1.0);
    c.sigma = 2.0 * n + 5.0;
    c.a_eff = d->a;
  } else {
    const auto& nr = std::get<NonResonantMode>(regime.mode);
    c.decay = false;
    c.C_hat = n * nr.gamma * counting_constant(n, nr.tau);
    c.C = std::max(n * (1.0 + nr.gamma * lambda_sup) * counting_constant(n, nr.tau + 1.0), c.C_hat);
    c.sigma = n + nr.tau + 5.0;
    c.a_eff = 1.0;
  }
  c.K = 2.0 * n * e2 * c.C / (R_star * R_star);
  return c;
}

double convergence_threshold(double a, double K, double sigma) {
  return a * std::pow(2.0 * std::numbers::pi, -sigma) / K;
}

TheorySchedule theoretical_sequences(double eps0, double a, double K, double sigma, double R0, int j_max) {
  if (!(eps0 > 0.0 && a > 0.0 && K > 0.0 && sigma > 0.0 && R0 > 0.0))
    throw DomainError("theoretical_sequences requires positive eps0, a, K, sigma, R0");
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  TheorySchedule out;
  out.eps_a = convergence_threshold(a, K, sigma);
  if (eps0 > out.eps_a) throw ConvergenceConditionViolated("eps0 exceeds the convergence threshold eps_a");

  const double scale = std::pow(eps0 * K / a, 1.0 / sigma);
  auto eps_at = [&](int j) { return eps0 * std::pow(j + 1.0, -sigma); };
  double R = R0;
  for (int j = 0; j <= j_max; ++j) {
    TheoryStep st;
    st.j = j;
    st.eps = eps_at(j);
    st.d = scale * (j + 2.0) * (j + 2.0) / std::pow(j + 1.0, 4);
    st.R = R;
    const double next = eps_at(j + 1);
    const double predicted = (K / a) * std::pow(st.d, -sigma) * st.eps * st.eps;
    st.recursion_residual = std::abs(predicted - next) / next;
    out.max_recursion_residual = std::max(out.max_recursion_residual, st.recursion_residual);
    out.recursion_holds = out.recursion_holds && st.recursion_residual <= 1e-12;
    out.radii_ok = out.radii_ok && R >= R0 / 2.0;
    out.shrink_ok = out.shrink_ok && st.d <= 0.25;
    out.sum_d += st.d;
    out.steps.push_back(st);
    R = (1.0 - 2.0 * st.d) * R;
  }
  return out;
}

double R0_admissible(double M_f, double a, int n, const SchemeConstants& c, double R) {
  if (!(M_f >= 1.0)) throw DomainError("R0_admissible requires M_f >= 1");
  const double two_pi_sigma = std::pow(2.0 * std::numbers::pi, c.sigma);
  double formula;
  if (c.decay) {
    if (!(a > 0.0)) throw DomainError("decay regime requires a > 0");
    formula = std::pow(a / (16.0 * two_pi_sigma * std::exp(2.0 * n + 1.0) * n * n * c.C * M_f), 64.0 / 7.0);
  } else {
    formula = std::pow(8.0 * two_pi_sigma * std::exp(n + 1.0) * n * n * n * c.C * M_f, -32.0 / 11.0);
  }
  return std::min({formula, std::pow(R, 16), 0.5});
}

double eps0_analytic(double M_f, int n, double R0, bool linear_in_y) {
  if (linear_in_y) return double(n) * n * std::exp(n - 1.0) * M_f * std::pow(R0, 75.0 / 32.0);
  return 2.0 * n * std::exp(2.0 * n - 1.0) * M_f * std::pow(R0, 135.0 / 64.0);
}

}  // namespace snf
