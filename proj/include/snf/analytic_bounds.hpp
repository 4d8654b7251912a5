#pragma once

#include <map>
#include <string>

namespace snf {

/// One row of a bound-vs-oracle comparison.
struct BoundCheckResult {
  std::string name;
  double bound_value = 0.0;
  double oracle_value = 0.0;
  bool satisfied = false;  // oracle_value <= bound_value
  std::map<std::string, double> parameters;
};

/// Right-hand side of  sum_{nu in N^m, |nu| >= N} R^{|nu|} <= 2m e^{3m-3} R^{3N/4},  R <= e^{-4}.
double bound_tail_sum(int m, int N, double R);

/// Right-hand side of  sum_{nu in N^m} |nu|^mu (1-delta)^{|nu|} <= C(m,mu) delta^{-m-mu-1},  0 < delta <= 1/2.
double bound_weighted_sum(int m, double mu, double delta);

/// Right-hand side of the Lie-operator estimate
///   ||L_G^s F||_{(1-2d)R} <= e^{-2} s! [e^2 (R d)^{-2} ||G||_{(1-d)R}]^s ||F||_{(1-d)R},  0 < d <= 1/4.
/// For s = 0 this returns e^{-2} ||F|| exactly as written, although ||F|| itself is the sharp value.
double lie_bound(int s, double normG, double normF, double R_tilde, double d_tilde);

/// sum_{l=N}^{cutoff} binom(l+m-1, m-1) R^l plus a geometric majorant of the
/// dropped tail. Throws CutoffInsufficient unless the majorant is below
/// 1e-12 of the partial sum (or N > cutoff).
double oracle_tail_sum(int m, int N, double R, int cutoff);

/// sum_{l=0}^{cutoff} binom(l+m-1, m-1) l^mu (1-delta)^l plus a certified tail majorant.
double oracle_weighted_sum(int m, double mu, double delta, int cutoff);

BoundCheckResult check_tail_sum(int m, int N, double R, int cutoff = 20000);
BoundCheckResult check_weighted_sum(int m, double mu, double delta, int cutoff = 20000);

}  // namespace snf
