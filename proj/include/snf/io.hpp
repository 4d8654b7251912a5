#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snf/analytic_bounds.hpp"
#include "snf/normalizer.hpp"
#include "snf/ode_verify.hpp"
#include "snf/poly_xy.hpp"
#include "snf/theory.hpp"

namespace snf::io {

using json = nlohmann::ordered_json;

class ParseError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double v);

/// Accepts a decimal string (locale independent) or a JSON number.
double parse_number(const json& j, const std::string& what);

json to_json(const TimeCoeffd& c);
TimeCoeffd time_coeff_from_json(const json& j);

json to_json(const PolyXYd& p);
PolyXYd poly_from_json(const json& j, int n, int n_trunc);

/// Problem definition for the CLI. Either `perturbation` is given directly
/// or it is derived from the ODE nonlinearities in `system`.
struct ProblemConfig {
  int n = 1;
  std::vector<std::complex<double>> lambda;
  int n_trunc = 8;
  double R0 = 0.5;
  RegimeConfig regime;
  int max_iterations = 32;
  DeltaSchedule delta_schedule_source = DeltaSchedule::Measured;
  PolyXYd perturbation;
  std::optional<std::vector<PolyXYd>> system;  // g_l(x, t), x-only
  std::string out_dir;

  CVector<double> lambda_vector() const;
  ExtendedHamiltonian<double> hamiltonian() const;
  NormalizationConfig normalization_config() const;
  OdeSystem<double> ode_system() const;
};

ProblemConfig parse_problem_config(const json& j);
ProblemConfig load_problem_config(const std::string& path);
json to_json(const ProblemConfig& cfg);
/// Canonical text form: serialize(parse(text)) is a fixed point.
std::string serialize(const ProblemConfig& cfg);

json to_json(const NonresonanceReport& rep);
json to_json(const TransformChain<double>& chain);
json summary_json(const NormalizationResult<double>& res);

void write_iterations_csv(std::ostream& os, const std::vector<IterationRecord>& records);
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj);
void write_error_csv(std::ostream& os, const Trajectory<double>& ref, const ErrorReport& rep);
void write_bounds_csv(std::ostream& os, const std::vector<BoundCheckResult>& rows,
                      const std::vector<std::string>& row_errors);
void write_sequences_csv(std::ostream& os, const TheorySchedule& sched);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace snf::io
