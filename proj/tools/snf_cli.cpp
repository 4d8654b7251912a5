// Command-line front end: normalize, verify, bounds-check, sequences.
//
// Exit codes: 0 success, 1 usage / I/O / numerical failure,
// 2 hypothesis violation, 3 bound violation or verify tolerance exceeded.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snf/analytic_bounds.hpp"
#include "snf/io.hpp"
#include "snf/normalizer.hpp"
#include "snf/ode_verify.hpp"
#include "snf/theory.hpp"

namespace fs = std::filesystem;
using snf::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kHypothesis = 2;
constexpr int kViolation = 3;

std::string resolve_out_dir(const std::string& flag, const std::string& from_config) {
  std::string dir = !flag.empty() ? flag : (!from_config.empty() ? from_config : ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw snf::io::ParseError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

template <class Fn>
void write_csv(const std::string& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  snf::io::write_file(path, os.str());
}

template <class Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const snf::HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << '\n';
    return kHypothesis;
  } catch (const snf::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const snf::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kUsage;
  }
}

snf::NormalizationResult<double> run_normalize(const snf::io::ProblemConfig& cfg, const std::string& dir) {
  auto res = snf::normalize(cfg.hamiltonian(), cfg.normalization_config());
  write_csv(dir + "/iterations.csv", [&](std::ostream& os) { snf::io::write_iterations_csv(os, res.records); });
  snf::io::write_file(dir + "/chain.json", snf::io::to_json(res.chain).dump(2) + "\n");
  snf::io::write_file(dir + "/summary.json", snf::io::summary_json(res).dump(2) + "\n");
  return res;
}

int cmd_normalize(const std::string& config_path, const std::string& out_flag) {
  return guarded([&] {
    const auto cfg = snf::io::load_problem_config(config_path);
    const std::string dir = resolve_out_dir(out_flag, cfg.out_dir);
    const auto res = run_normalize(cfg, dir);
    std::cout << "normalized in " << res.records.size() << " iterations; remainder terms "
              << res.final_remainder.size() << '\n';
    return kOk;
  });
}

int cmd_verify(const std::string& config_path, const std::string& out_flag, const std::vector<double>& x0_flag,
               double T, int steps, double tolerance) {
  return guarded([&] {
    const auto cfg = snf::io::load_problem_config(config_path);
    if (static_cast<int>(x0_flag.size()) != cfg.n)
      throw snf::DimensionMismatch("--x0 needs " + std::to_string(cfg.n) + " values");
    if (!(T > 0.0)) throw snf::DomainError("--T must be positive");
    snf::CVector<double> x0(cfg.n);
    for (int l = 0; l < cfg.n; ++l) {
      if (!(std::abs(x0_flag[l]) < cfg.R0 / 2.0))
        throw snf::DomainError("initial condition lies outside the polydisk of radius R0/2 = " +
                               snf::io::format_number(cfg.R0 / 2.0));
      x0(l) = x0_flag[l];
    }
    const auto sys = cfg.ode_system();
    const std::string dir = resolve_out_dir(out_flag, cfg.out_dir);
    const auto res = run_normalize(cfg, dir);

    const auto map = snf::extract_x_map(res.chain);
    const auto numeric = snf::integrate_ode(sys, x0, T, steps);
    const auto closed = snf::closed_form_solution(res.chain, map, x0, numeric.times);
    const auto rep = snf::compare(closed, numeric);

    write_csv(dir + "/trajectory_numeric.csv", [&](std::ostream& os) { snf::io::write_trajectory_csv(os, numeric); });
    write_csv(dir + "/trajectory_normal_form.csv",
              [&](std::ostream& os) { snf::io::write_trajectory_csv(os, closed); });
    write_csv(dir + "/errors.csv", [&](std::ostream& os) { snf::io::write_error_csv(os, numeric, rep); });
    json report;
    report["sup_abs"] = snf::io::format_number(rep.sup_abs);
    report["sup_rel"] = snf::io::format_number(rep.sup_rel);
    report["integrator_error_estimate"] = snf::io::format_number(numeric.meta.error_estimate);
    report["tolerance"] = snf::io::format_number(tolerance);
    report["passed"] = rep.sup_abs <= tolerance;
    snf::io::write_file(dir + "/error_report.json", report.dump(2) + "\n");

    std::cout << "sup |x_numeric - x_normal_form| = " << snf::io::format_number(rep.sup_abs) << " (tolerance "
              << snf::io::format_number(tolerance) << ")\n";
    if (!(rep.sup_abs <= tolerance)) {
      std::cerr << "verification failed: error exceeds tolerance\n";
      return kViolation;
    }
    return kOk;
  });
}

json default_bounds_grid() {
  json g;
  g["tail_sum"] = json::array();
  for (int m : {2, 3, 4})
    for (int N : {0, 1, 2, 5, 8})
      for (const char* R : {"exp(-4)", "exp(-5)", "0.01"}) g["tail_sum"].push_back({{"m", m}, {"N", N}, {"R", R}});
  g["weighted_sum"] = json::array();
  for (int m : {2, 3, 4})
    for (const char* mu : {"0", "1", "3"})
      for (const char* d : {"0.5", "0.25", "0.1"}) g["weighted_sum"].push_back({{"m", m}, {"mu", mu}, {"delta", d}});
  return g;
}

// Grid values are decimal strings; "exp(x)" is accepted so that e^{-4} can be written exactly.
double grid_number(const json& j, const std::string& what) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.rfind("exp(", 0) == 0 && s.back() == ')')
      return std::exp(snf::io::parse_number(json(s.substr(4, s.size() - 5)), what));
  }
  return snf::io::parse_number(j, what);
}

int cmd_bounds_check(const std::string& grid_path, const std::string& out_flag) {
  return guarded([&] {
    json grid = default_bounds_grid();
    if (!grid_path.empty()) {
      try {
        grid = json::parse(snf::io::read_file(grid_path));
      } catch (const json::exception& e) {
        throw snf::io::ParseError("'" + grid_path + "' is not valid JSON: " + e.what());
      }
    }
    std::vector<snf::BoundCheckResult> rows;
    std::vector<std::string> errors;
    auto run_row = [&](snf::BoundCheckResult skeleton, auto&& check) {
      try {
        rows.push_back(check());
        errors.emplace_back();
      } catch (const snf::DomainError& e) {
        skeleton.bound_value = skeleton.oracle_value = std::nan("");
        rows.push_back(skeleton);
        errors.push_back(std::string("DomainError: ") + e.what());
      } catch (const snf::CutoffInsufficient& e) {
        skeleton.bound_value = skeleton.oracle_value = std::nan("");
        rows.push_back(skeleton);
        errors.push_back(std::string("CutoffInsufficient: ") + e.what());
      }
    };
    if (grid.contains("tail_sum"))
      for (const auto& r : grid["tail_sum"]) {
        const int m = r.at("m").get<int>();
        const int N = r.at("N").get<int>();
        const double R = grid_number(r.at("R"), "R");
        run_row({"tail_sum", 0, 0, false, {{"m", double(m)}, {"N", double(N)}, {"R", R}}},
                [&] { return snf::check_tail_sum(m, N, R); });
      }
    if (grid.contains("weighted_sum"))
      for (const auto& r : grid["weighted_sum"]) {
        const int m = r.at("m").get<int>();
        const double mu = grid_number(r.at("mu"), "mu");
        const double delta = grid_number(r.at("delta"), "delta");
        run_row({"weighted_sum", 0, 0, false, {{"m", double(m)}, {"mu", mu}, {"delta", delta}}},
                [&] { return snf::check_weighted_sum(m, mu, delta); });
      }

    const std::string dir = resolve_out_dir(out_flag, "");
    write_csv(dir + "/bounds.csv", [&](std::ostream& os) { snf::io::write_bounds_csv(os, rows, errors); });

    int domain_errors = 0, violations = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!errors[i].empty()) {
        ++domain_errors;
        std::cerr << rows[i].name << " row " << i << ": " << errors[i] << '\n';
      } else if (!rows[i].satisfied) {
        ++violations;
        std::cerr << rows[i].name << " row " << i << ": oracle exceeds bound\n";
      }
    }
    std::cout << rows.size() << " rows, " << violations << " violations, " << domain_errors << " row errors\n";
    if (violations > 0) return kViolation;
    return domain_errors > 0 ? kUsage : kOk;
  });
}

// Parameters: {"n", "lambda_sup", "mode", "R0", optional "eps0" (default eps_a), optional "j_max" (default 100)}.
int cmd_sequences(const std::string& params_path, const std::string& out_flag) {
  return guarded([&] {
    json p;
    try {
      p = json::parse(snf::io::read_file(params_path));
    } catch (const json::exception& e) {
      throw snf::io::ParseError("'" + params_path + "' is not valid JSON: " + e.what());
    }
    const int n = p.at("n").get<int>();
    if (n < 1) throw snf::io::ParseError("n must be >= 1");
    const double lambda_sup = snf::io::parse_number(p.at("lambda_sup"), "lambda_sup");
    const double R0 = snf::io::parse_number(p.at("R0"), "R0");
    if (!(R0 > 0.0 && R0 <= 0.5)) throw snf::io::ParseError("R0 must lie in (0, 1/2]");
    const int j_max = p.contains("j_max") ? p["j_max"].get<int>() : 100;
    if (j_max < 0) throw snf::io::ParseError("j_max must be non-negative");

    snf::RegimeConfig regime;
    const json& mode = p.at("mode");
    const std::string type = mode.at("type").get<std::string>();
    if (type == "decay") regime.mode = snf::DecayMode{snf::io::parse_number(mode.at("a"), "a")};
    else if (type == "nonresonant")
      regime.mode = snf::NonResonantMode{snf::io::parse_number(mode.at("gamma"), "gamma"),
                                         snf::io::parse_number(mode.at("tau"), "tau")};
    else throw snf::io::ParseError("mode.type must be 'decay' or 'nonresonant'");
    regime.validate(n);

    const auto c = snf::scheme_constants(n, lambda_sup, regime, R0 / 2.0);
    const double eps_a = snf::convergence_threshold(c.a_eff, c.K, c.sigma);
    const double eps0 = p.contains("eps0") ? snf::io::parse_number(p["eps0"], "eps0") : eps_a;

    json summary;
    summary["K"] = snf::io::format_number(c.K);
    summary["sigma"] = snf::io::format_number(c.sigma);
    summary["a"] = snf::io::format_number(c.a_eff);
    summary["eps_a"] = snf::io::format_number(eps_a);
    summary["eps0"] = snf::io::format_number(eps0);
    const std::string dir = resolve_out_dir(out_flag, "");
    try {
      const auto sched = snf::theoretical_sequences(eps0, c.a_eff, c.K, c.sigma, R0, j_max);
      write_csv(dir + "/sequences.csv", [&](std::ostream& os) { snf::io::write_sequences_csv(os, sched); });
      summary["status"] = "computed";
      summary["sum_d"] = snf::io::format_number(sched.sum_d);
      summary["max_recursion_residual"] = snf::io::format_number(sched.max_recursion_residual);
      summary["recursion_holds"] = sched.recursion_holds;
      summary["radii_ok"] = sched.radii_ok;
      summary["shrink_ok"] = sched.shrink_ok;
      snf::io::write_file(dir + "/sequences_summary.json", summary.dump(2) + "\n");
      std::cout << "sum d_j = " << snf::io::format_number(sched.sum_d) << ", max recursion residual "
                << snf::io::format_number(sched.max_recursion_residual) << '\n';
      if (!sched.recursion_holds || !sched.radii_ok || !sched.shrink_ok) {
        std::cerr << "sequence conditions violated:" << (sched.recursion_holds ? "" : " recursion")
                  << (sched.radii_ok ? "" : " radii") << (sched.shrink_ok ? "" : " shrink") << '\n';
        return kViolation;
      }
      return kOk;
    } catch (const snf::ConvergenceConditionViolated& e) {
      summary["status"] = "ConvergenceConditionViolated";
      snf::io::write_file(dir + "/sequences_summary.json", summary.dump(2) + "\n");
      throw;
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong normal form engine for time-dependent near-equilibrium Hamiltonians"};
  app.require_subcommand(1);

  std::string config, out_dir, grid, params;
  std::vector<double> x0;
  double T = 10.0, tolerance = 1e-9;
  int steps = 4096;

  auto* norm = app.add_subcommand("normalize", "Compute the generating sequence for a problem config");
  norm->add_option("--config", config, "problem config (JSON)")->required();
  norm->add_option("--out-dir", out_dir, "output directory");

  auto* ver = app.add_subcommand("verify", "Compare the normal-form solution against direct integration");
  ver->add_option("--config", config, "problem config (JSON)")->required();
  ver->add_option("--out-dir", out_dir, "output directory");
  ver->add_option("--x0", x0, "real initial condition, one value per component")->required();
  ver->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
  ver->add_option("--steps", steps, "RK4 steps")->check(CLI::Range(16, 1 << 24));
  ver->add_option("--tolerance", tolerance, "maximum sup error")->check(CLI::NonNegativeNumber);

  auto* bc = app.add_subcommand("bounds-check", "Compare the counting inequalities with certified oracles");
  bc->add_option("--config", grid, "parameter grid (JSON); built-in grid if omitted");
  bc->add_option("--out-dir", out_dir, "output directory");

  auto* seq = app.add_subcommand("sequences", "Tabulate the theoretical epsilon/d/R sequences");
  seq->add_option("--config", params, "sequence parameters (JSON)")->required();
  seq->add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (*norm) return cmd_normalize(config, out_dir);
  if (*ver) return cmd_verify(config, out_dir, x0, T, steps, tolerance);
  if (*bc) return cmd_bounds_check(grid, out_dir);
  return cmd_sequences(params, out_dir);
}
