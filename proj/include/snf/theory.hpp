#pragma once

#include <vector>

#include "snf/homological.hpp"

namespace snf {

/// C(m, mu) = e^{4m+mu-1} (m+mu)^{m+mu} / (m-1)!
double counting_constant(int m, double mu);

/// Constants of the iterative scheme. `C` is C1 (decay regime) or C2
/// (non-resonant regime); `a_eff` is a, or 1 in the non-resonant regime.
struct SchemeConstants {
  double C = 0.0;
  double C_hat = 0.0;
  double K = 0.0;
  double sigma = 0.0;
  double a_eff = 1.0;
  bool decay = true;
};

/// lambda_sup is max_l |lambda_l|.
SchemeConstants scheme_constants(int n, double lambda_sup, const RegimeConfig& regime, double R_star);

template <class Real>
double lambda_sup_norm(const CVector<Real>& lambda) {
  using std::abs;
  double m = 0.0;
  for (Eigen::Index l = 0; l < lambda.size(); ++l) m = std::max(m, static_cast<double>(abs(lambda(l))));
  return m;
}

/// eps_a = a (2 pi)^{-sigma} / K, the largest admissible eps0.
double convergence_threshold(double a, double K, double sigma);

struct TheoryStep {
  int j = 0;
  double eps = 0.0;
  double d = 0.0;
  double R = 0.0;
  /// |eps_{j+1} - K a^{-1} d_j^{-sigma} eps_j^2| / eps_{j+1}
  double recursion_residual = 0.0;
};

struct TheorySchedule {
  std::vector<TheoryStep> steps;
  double eps_a = 0.0;
  double sum_d = 0.0;
  double max_recursion_residual = 0.0;
  bool recursion_holds = true;  // residual <= 1e-12 for every j
  bool radii_ok = true;         // R_j >= R0/2 for every j
  bool shrink_ok = true;        // d_j <= 1/4 for every j
};

/// Closed-form schedule eps_j = eps0 (j+1)^{-sigma},
/// d_j = (eps0 K / a)^{1/sigma} (j+2)^2 / (j+1)^4, R_{j+1} = (1 - 2 d_j) R_j,
/// for j = 0..j_max, with the recursion eps_{j+1} = K a^{-1} d_j^{-sigma} eps_j^2
/// checked at every step. Throws ConvergenceConditionViolated if eps0 > eps_a.
TheorySchedule theoretical_sequences(double eps0, double a, double K, double sigma, double R0, int j_max);

/// Largest R0 allowed by the analytic admissibility formula, capped by
/// R^16 and 1/2. Requires M_f >= 1.
double R0_admissible(double M_f, double a, int n, const SchemeConstants& c, double R = 0.5);

/// Analytic overestimate of ||f||_{R0} from the Cauchy bound on f's Taylor
/// coefficients (2n e^{2n-1} M_f R0^{135/64}, or n^2 e^{n-1} M_f R0^{75/32}
/// for a perturbation linear in y).
double eps0_analytic(double M_f, int n, double R0, bool linear_in_y);

}  // namespace snf
