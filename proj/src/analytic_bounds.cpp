#include "snf/analytic_bounds.hpp"

#include <cmath>

#include "snf/errors.hpp"
#include "snf/theory.hpp"

namespace snf {

namespace {

// binom(l+m-1, m-1) l^mu r^l, i.e. the sum over |nu| = l of |nu|^mu r^{|nu|}.
double shell_term(int m, double mu, double r, int l) {
  double binom = 1.0;
  for (int j = 1; j <= m - 1; ++j) binom = binom * (l + j) / j;
  const double lmu = (l == 0 && mu == 0.0) ? 1.0 : std::pow(double(l), mu);
  return binom * lmu * std::pow(r, l);
}

double certified_shell_sum(int m, double mu, double r, int from, int cutoff) {
  if (from > cutoff) throw CutoffInsufficient("summation start exceeds the cutoff");
  double partial = 0.0;
  for (int l = from; l <= cutoff; ++l) partial += shell_term(m, mu, r, l);

  const int next = cutoff + 1;
  const double first_dropped = shell_term(m, mu, r, next);
  double majorant = 0.0;
  if (first_dropped > 0.0) {
    // term ratio t_{l+1}/t_l is non-increasing in l >= 1
    const double q = (double(next + m) / (next + 1)) * std::pow(double(next + 1) / next, mu) * r;
    if (!(q < 1.0)) throw CutoffInsufficient("tail is not geometrically dominated at this cutoff");
    majorant = first_dropped / (1.0 - q);
  }
  if (majorant > 0.0 && !(majorant < 1e-12 * partial))
    throw CutoffInsufficient("tail majorant is not below 1e-12 of the partial sum");
  return partial + majorant;
}

void require_m(int m) {
  if (m < 2) throw DomainError("dimension m must be >= 2");
}

}  // namespace

double bound_tail_sum(int m, int N, double R) {
  require_m(m);
  if (N < 0) throw DomainError("N must be non-negative");
  if (!(R >= 0.0 && R <= std::exp(-4.0))) throw DomainError("tail bound requires 0 <= R <= e^-4");
  return 2.0 * m * std::exp(3.0 * m - 3.0) * std::pow(R, 0.75 * N);
}

double bound_weighted_sum(int m, double mu, double delta) {
  require_m(m);
  if (mu < 0.0) throw DomainError("mu must be non-negative");
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("weighted bound requires 0 < delta <= 1/2");
  return counting_constant(m, mu) * std::pow(delta, -m - mu - 1.0);
}

double lie_bound(int s, double normG, double normF, double R_tilde, double d_tilde) {
  if (s < 0) throw DomainError("s must be non-negative");
  if (!(d_tilde > 0.0 && d_tilde <= 0.25)) throw DomainError("lie_bound requires 0 < d <= 1/4");
  if (!(R_tilde > 0.0)) throw DomainError("lie_bound requires R > 0");
  const double e2 = std::exp(2.0);
  const double rd = R_tilde * d_tilde;
  return std::tgamma(s + 1.0) * std::pow(e2 * normG / (rd * rd), s) * normF / e2;
}

double oracle_tail_sum(int m, int N, double R, int cutoff) {
  if (m < 1) throw DomainError("dimension m must be >= 1");
  if (!(R >= 0.0 && R < 1.0)) throw DomainError("oracle_tail_sum requires 0 <= R < 1");
  return certified_shell_sum(m, 0.0, R, N, cutoff);
}

double oracle_weighted_sum(int m, double mu, double delta, int cutoff) {
  if (m < 1) throw DomainError("dimension m must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("oracle_weighted_sum requires 0 < delta <= 1");
  return certified_shell_sum(m, mu, 1.0 - delta, 0, cutoff);
}

BoundCheckResult check_tail_sum(int m, int N, double R, int cutoff) {
  BoundCheckResult r;
  r.name = "tail_sum";
  r.parameters = {{"m", double(m)}, {"N", double(N)}, {"R", R}};
  r.bound_value = bound_tail_sum(m, N, R);
  r.oracle_value = oracle_tail_sum(m, N, R, cutoff);
  r.satisfied = r.oracle_value <= r.bound_value;
  return r;
}

BoundCheckResult check_weighted_sum(int m, double mu, double delta, int cutoff) {
  BoundCheckResult r;
  r.name = "weighted_sum";
  r.parameters = {{"m", double(m)}, {"mu", mu}, {"delta", delta}};
  r.bound_value = bound_weighted_sum(m, mu, delta);
  r.oracle_value = oracle_weighted_sum(m, mu, delta, cutoff);
  r.satisfied = r.oracle_value <= r.bound_value;
  return r;
}

}  // namespace snf
