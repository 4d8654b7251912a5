#include "snf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace snf::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ParseError(what + ": expected a number or decimal string");
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(what + ": invalid number '" + s + "'");
  return v;
}

namespace {

int parse_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<int>();
}

std::vector<int> parse_exponents(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError(what + ": expected an array of " + std::to_string(n) + " integers");
  std::vector<int> e;
  for (const auto& v : j) {
    const int k = parse_int(v, what);
    if (k < 0) throw ParseError(what + ": exponents must be non-negative");
    e.push_back(k);
  }
  return e;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

json exps_json(std::span<const int> e) { return json(std::vector<int>(e.begin(), e.end())); }

json complex_json(const std::complex<double>& z) {
  return json::array({format_number(z.real()), format_number(z.imag())});
}

}  // namespace

json to_json(const TimeCoeffd& c) {
  json arr = json::array();
  for (const auto& t : c.terms()) {
    json rec;
    rec["re_c"] = format_number(t.coeff.real());
    rec["im_c"] = format_number(t.coeff.imag());
    rec["k"] = t.power;
    rec["re_mu"] = format_number(t.rate.real());
    rec["im_mu"] = format_number(t.rate.imag());
    arr.push_back(rec);
  }
  return arr;
}

TimeCoeffd time_coeff_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("time_coeff: expected an array of terms");
  std::vector<ExpMonomial<double>> raw;
  for (const auto& rec : j) {
    ExpMonomial<double> t;
    t.coeff = {parse_number(require(rec, "re_c"), "re_c"), rec.contains("im_c") ? parse_number(rec["im_c"], "im_c") : 0.0};
    t.power = rec.contains("k") ? parse_int(rec["k"], "k") : 0;
    if (t.power < 0) throw ParseError("k: must be non-negative");
    t.rate = {rec.contains("re_mu") ? parse_number(rec["re_mu"], "re_mu") : 0.0,
              rec.contains("im_mu") ? parse_number(rec["im_mu"], "im_mu") : 0.0};
    raw.push_back(t);
  }
  return TimeCoeffd::from_terms(std::move(raw));
}

json to_json(const PolyXYd& p) {
  json arr = json::array();
  for (const auto& [idx, c] : p.coeffs()) {
    json rec;
    rec["alpha"] = exps_json(idx.alpha());
    rec["beta"] = exps_json(idx.beta());
    rec["time_coeff"] = to_json(c);
    arr.push_back(rec);
  }
  return arr;
}

PolyXYd poly_from_json(const json& j, int n, int n_trunc) {
  if (!j.is_array()) throw ParseError("perturbation: expected an array of records");
  PolyXYd p(n, n_trunc);
  for (const auto& rec : j) {
    MultiIndex idx(parse_exponents(require(rec, "alpha"), n, "alpha"), parse_exponents(require(rec, "beta"), n, "beta"));
    if (idx.degree() > n_trunc) throw ParseError("perturbation term exceeds the truncation degree");
    p.add_term(idx, time_coeff_from_json(require(rec, "time_coeff")));
  }
  return p;
}

CVector<double> ProblemConfig::lambda_vector() const {
  CVector<double> v(n);
  for (int l = 0; l < n; ++l) v(l) = lambda[l];
  return v;
}

ExtendedHamiltonian<double> ProblemConfig::hamiltonian() const {
  if (system) return build_hamiltonian_from_ode(ode_system());
  return ExtendedHamiltonian<double>(lambda_vector(), perturbation);
}

NormalizationConfig ProblemConfig::normalization_config() const {
  NormalizationConfig c;
  c.n = n;
  c.n_trunc = n_trunc;
  c.R0 = R0;
  c.regime = regime;
  c.max_iterations = max_iterations;
  c.delta_schedule_source = delta_schedule_source;
  return c;
}

OdeSystem<double> ProblemConfig::ode_system() const {
  if (system) {
    OdeSystem<double> sys{lambda_vector(), *system};
    sys.validate();
    return sys;
  }
  return ode_from_hamiltonian(ExtendedHamiltonian<double>(lambda_vector(), perturbation));
}

ProblemConfig parse_problem_config(const json& j) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  ProblemConfig cfg;
  cfg.n = parse_int(require(j, "n"), "n");
  if (cfg.n < 1) throw ParseError("n must be >= 1");
  const json& lam = require(j, "lambda");
  if (!lam.is_array() || static_cast<int>(lam.size()) != cfg.n) throw ParseError("lambda: expected n [re, im] pairs");
  for (const auto& z : lam) {
    if (!z.is_array() || z.size() != 2) throw ParseError("lambda: each entry must be [re, im]");
    cfg.lambda.emplace_back(parse_number(z[0], "lambda.re"), parse_number(z[1], "lambda.im"));
  }
  cfg.n_trunc = parse_int(require(j, "n_trunc"), "n_trunc");
  if (cfg.n_trunc < 3) throw ParseError("n_trunc must be >= 3");
  if (j.contains("R0")) cfg.R0 = parse_number(j["R0"], "R0");
  if (!(cfg.R0 > 0.0 && cfg.R0 <= 0.5)) throw ParseError("R0 must lie in (0, 1/2]");
  if (j.contains("max_iterations")) cfg.max_iterations = parse_int(j["max_iterations"], "max_iterations");
  if (cfg.max_iterations < 1) throw ParseError("max_iterations must be >= 1");
  if (j.contains("delta_schedule")) {
    const std::string s = j["delta_schedule"].get<std::string>();
    if (s == "measured") cfg.delta_schedule_source = DeltaSchedule::Measured;
    else if (s == "theoretical") cfg.delta_schedule_source = DeltaSchedule::Theoretical;
    else throw ParseError("delta_schedule must be 'measured' or 'theoretical'");
  }

  const json& mode = require(j, "mode");
  const std::string type = require(mode, "type").get<std::string>();
  if (type == "decay") {
    cfg.regime.mode = DecayMode{parse_number(require(mode, "a"), "a")};
  } else if (type == "nonresonant") {
    cfg.regime.mode = NonResonantMode{parse_number(require(mode, "gamma"), "gamma"), parse_number(require(mode, "tau"), "tau")};
  } else {
    throw ParseError("mode.type must be 'decay' or 'nonresonant'");
  }
  if (mode.contains("small_divisor_tol")) cfg.regime.small_divisor_tol = parse_number(mode["small_divisor_tol"], "small_divisor_tol");
  try {
    cfg.regime.validate(cfg.n);
  } catch (const DomainError& e) {
    throw ParseError(std::string("mode: ") + e.what());
  }

  const bool has_f = j.contains("perturbation");
  const bool has_sys = j.contains("system");
  if (has_f == has_sys) throw ParseError("give exactly one of 'perturbation' or 'system'");
  if (has_f) {
    cfg.perturbation = poly_from_json(j["perturbation"], cfg.n, cfg.n_trunc);
  } else {
    const json& sys = j["system"];
    if (!sys.is_array()) throw ParseError("system: expected an array of records");
    std::vector<PolyXYd> g(cfg.n, PolyXYd(cfg.n, cfg.n_trunc));
    for (const auto& rec : sys) {
      const int l = parse_int(require(rec, "component"), "component");
      if (l < 0 || l >= cfg.n) throw ParseError("system: component out of range");
      const auto alpha = parse_exponents(require(rec, "alpha"), cfg.n, "alpha");
      const MultiIndex idx = MultiIndex::x_power(alpha);
      if (idx.degree() > cfg.n_trunc) throw ParseError("system term exceeds the truncation degree");
      g[l].add_term(idx, time_coeff_from_json(require(rec, "time_coeff")));
    }
    cfg.system = std::move(g);
  }
  if (j.contains("output")) {
    const json& out = j["output"];
    if (out.contains("dir")) cfg.out_dir = out["dir"].get<std::string>();
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw ParseError("write failed for '" + path + "'");
}

ProblemConfig load_problem_config(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_problem_config(j);
}

json to_json(const ProblemConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  json lam = json::array();
  for (const auto& z : cfg.lambda) lam.push_back(complex_json(z));
  j["lambda"] = lam;
  j["n_trunc"] = cfg.n_trunc;
  j["R0"] = format_number(cfg.R0);
  j["max_iterations"] = cfg.max_iterations;
  j["delta_schedule"] = cfg.delta_schedule_source == DeltaSchedule::Measured ? "measured" : "theoretical";
  json mode;
  if (const auto* d = std::get_if<DecayMode>(&cfg.regime.mode)) {
    mode["type"] = "decay";
    mode["a"] = format_number(d->a);
  } else {
    const auto& nr = std::get<NonResonantMode>(cfg.regime.mode);
    mode["type"] = "nonresonant";
    mode["gamma"] = format_number(nr.gamma);
    mode["tau"] = format_number(nr.tau);
  }
  mode["small_divisor_tol"] = format_number(cfg.regime.small_divisor_tol);
  j["mode"] = mode;
  if (cfg.system) {
    json sys = json::array();
    for (int l = 0; l < cfg.n; ++l) {
      for (const auto& [idx, c] : (*cfg.system)[l].coeffs()) {
        json rec;
        rec["component"] = l;
        rec["alpha"] = exps_json(idx.alpha());
        rec["time_coeff"] = to_json(c);
        sys.push_back(rec);
      }
    }
    j["system"] = sys;
  } else {
    j["perturbation"] = to_json(cfg.perturbation);
  }
  if (!cfg.out_dir.empty()) j["output"] = json{{"dir", cfg.out_dir}};
  return j;
}

std::string serialize(const ProblemConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

json to_json(const NonresonanceReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["worst_alpha"] = rep.worst_alpha;
  j["worst_l"] = rep.worst_l;
  j["worst_ratio"] = format_number(rep.worst_ratio);
  j["min_abs_re_U"] = format_number(rep.min_abs_re_U);
  j["checked"] = rep.checked;
  return j;
}

json to_json(const TransformChain<double>& chain) {
  json j;
  json lam = json::array();
  for (Eigen::Index l = 0; l < chain.lambda.size(); ++l) lam.push_back(complex_json(chain.lambda(l)));
  j["lambda"] = lam;
  j["n_trunc"] = chain.n_trunc;
  json gens = json::array();
  for (std::size_t k = 0; k < chain.generators.size(); ++k) {
    const auto& g = chain.generators[k];
    json rec;
    rec["j"] = k;
    rec["chi"] = to_json(g.chi);
    json ics = json::array();
    for (const auto& [idx, c0] : g.initial_conditions) {
      ics.push_back(json{{"alpha", exps_json(idx.alpha())},
                         {"beta", exps_json(idx.beta())},
                         {"re", format_number(c0.real())},
                         {"im", format_number(c0.imag())}});
    }
    rec["initial_conditions"] = ics;
    gens.push_back(rec);
  }
  j["generators"] = gens;
  return j;
}

json summary_json(const NormalizationResult<double>& res) {
  json j;
  j["success"] = res.success;
  j["iterations"] = res.records.size();
  j["final_remainder_terms"] = res.final_remainder.size();
  j["eps0_measured"] = format_number(res.eps0_measured);
  j["eps0_analytic"] = format_number(res.eps0_analytic);
  j["constants"] = json{{"C", format_number(res.constants.C)},
                        {"K", format_number(res.constants.K)},
                        {"sigma", format_number(res.constants.sigma)}};
  j["theory_admissible"] = res.theory.has_value();
  if (res.theory) {
    j["eps_a"] = format_number(res.theory->eps_a);
    j["sum_d"] = format_number(res.theory->sum_d);
  }
  if (res.nonresonance) j["nonresonance"] = to_json(*res.nonresonance);
  return j;
}

void write_iterations_csv(std::ostream& os, const std::vector<IterationRecord>& records) {
  os << "j,measured_norm,epsilon_theory,R_j,d_j,min_deg,chi_norm\n";
  for (const auto& r : records) {
    os << r.j << ',' << format_number(r.measured_norm) << ',' << format_number(r.epsilon_theory) << ','
       << format_number(r.R_j) << ',' << format_number(r.d_j) << ',' << r.min_deg << ','
       << format_number(r.chi_norm) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Eigen::Index l = 0; l < n; ++l) os << ",re_x" << l + 1 << ",im_x" << l + 1;
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_number(traj.times[i]);
    for (Eigen::Index l = 0; l < n; ++l)
      os << ',' << format_number(traj.states[i](l).real()) << ',' << format_number(traj.states[i](l).imag());
    os << '\n';
  }
}

void write_error_csv(std::ostream& os, const Trajectory<double>& ref, const ErrorReport& rep) {
  os << "t,abs_err,rel_err\n";
  for (std::size_t i = 0; i < rep.abs_err.size(); ++i)
    os << format_number(ref.times[i]) << ',' << format_number(rep.abs_err[i]) << ',' << format_number(rep.rel_err[i])
       << '\n';
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundCheckResult>& rows,
                      const std::vector<std::string>& row_errors) {
  os << "name,parameters,bound,oracle,status\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::string params;
    for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + format_number(v);
    std::string status = r.satisfied ? "satisfied" : "violated";
    if (i < row_errors.size() && !row_errors[i].empty()) status = row_errors[i];
    os << r.name << ',' << params << ',' << format_number(r.bound_value) << ',' << format_number(r.oracle_value) << ','
       << status << '\n';
  }
}

void write_sequences_csv(std::ostream& os, const TheorySchedule& sched) {
  os << "j,eps_j,d_j,R_j,recursion_residual\n";
  for (const auto& s : sched.steps)
    os << s.j << ',' << format_number(s.eps) << ',' << format_number(s.d) << ',' << format_number(s.R) << ','
       << format_number(s.recursion_residual) << '\n';
}

}  // namespace snf::io
