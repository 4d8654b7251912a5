#include <doctest.h>

#include <sstream>

#include "snf/io.hpp"
#include "support/random.hpp"

using namespace snf;
using snf::io::json;
using snf::test::cd;

#ifndef SNF_CONFIG_DIR
#error "SNF_CONFIG_DIR must point at the shipped configs"
#endif

namespace {

std::string config_path(const std::string& name) { return std::string(SNF_CONFIG_DIR) + "/" + name; }

const char* kMinimal = R"({
  "n": 1,
  "lambda": [["-1", "0"]],
  "n_trunc": 6,
  "mode": {"type": "decay", "a": "0.5"},
  "perturbation": [{"alpha": [2], "beta": [1], "time_coeff": [{"re_c": "1", "re_mu": "-0.5"}]}]
})";

json minimal() { return json::parse(kMinimal); }

}  // namespace

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1e-300) == "1e-300");
  CHECK(io::format_number(-2.5) == "-2.5");
  CHECK(io::format_number(std::nan("")) == "nan");
  snf::test::Rng rng(71);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.uniform(-1, 1) * std::pow(10.0, rng.integer(-30, 30));
    CHECK(io::parse_number(json(io::format_number(v)), "v") == v);
  }
}

TEST_CASE("number parsing") {
  CHECK(io::parse_number(json("0.25"), "x") == 0.25);
  CHECK(io::parse_number(json("+3"), "x") == 3.0);
  CHECK(io::parse_number(json(1.5), "x") == 1.5);
  CHECK_THROWS_AS(io::parse_number(json("1,5"), "x"), io::ParseError);
  CHECK_THROWS_AS(io::parse_number(json("abc"), "x"), io::ParseError);
  CHECK_THROWS_AS(io::parse_number(json::array(), "x"), io::ParseError);
}

TEST_CASE("time coefficient and polynomial records round trip") {
  snf::test::Rng rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = rng.time_coeff(4, 3, -2, 1);
    CHECK(io::time_coeff_from_json(io::to_json(c)) == c);
    auto p = rng.poly(2, 6, 4, 2, 1, 6);
    CHECK(io::poly_from_json(io::to_json(p), 2, 6) == p);
  }
  auto rec = io::to_json(TimeCoeffd::monomial(cd(1, -2), 3, cd(-0.5, 1)))[0];
  CHECK(rec["re_c"] == "1");
  CHECK(rec["im_c"] == "-2");
  CHECK(rec["k"] == 3);
  CHECK(rec["re_mu"] == "-0.5");
  CHECK(rec["im_mu"] == "1");
}

TEST_CASE("config parse and serialize are a fixed point") {
  for (const char* name : {"decay_1d.json", "nonresonant_1d.json", "decay_2d.json", "imaginary_spectrum.json"}) {
    const auto cfg = io::load_problem_config(config_path(name));
    const std::string once = io::serialize(cfg);
    const std::string twice = io::serialize(io::parse_problem_config(json::parse(once)));
    CHECK_MESSAGE(once == twice, name);
  }
}

TEST_CASE("config validation errors") {
  auto bad = [](auto&& edit) {
    json j = minimal();
    edit(j);
    return j;
  };
  CHECK_NOTHROW(io::parse_problem_config(minimal()));
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["n"] = 2; })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["n_trunc"] = 2; })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["R0"] = "0.7"; })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["mode"]["a"] = "1.5"; })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["mode"]["type"] = "other"; })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["perturbation"][0]["alpha"] = {2, 0}; })),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["perturbation"][0]["alpha"] = {9}; })),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j.erase("perturbation"); })), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem_config(bad([](json& j) { j["mode"] = {{"type", "nonresonant"}, {"gamma", "1"}, {"tau", "0.5"}}; })),
                  io::ParseError);
  CHECK_THROWS_AS(io::load_problem_config(config_path("does_not_exist.json")), io::ParseError);
}

TEST_CASE("system configs embed as y-linear perturbations") {
  const auto cfg = io::load_problem_config(config_path("decay_1d.json"));
  REQUIRE(cfg.system.has_value());
  const auto H = cfg.hamiltonian();
  PolyXYd expected(1, 8);
  expected.add_term(MultiIndex({2}, {1}), TimeCoeffd::exponential(1.0, -0.5));
  CHECK(H.perturbation == expected);
  CHECK_THROWS_AS(io::load_problem_config(config_path("linear_term.json")).hamiltonian(), InvalidSystem);
}

TEST_CASE("reports are deterministic") {
  const auto cfg = io::load_problem_config(config_path("nonresonant_1d.json"));
  auto run = [&] {
    const auto res = normalize(cfg.hamiltonian(), cfg.normalization_config());
    std::ostringstream os;
    io::write_iterations_csv(os, res.records);
    return os.str() + io::to_json(res.chain).dump() + io::summary_json(res).dump();
  };
  const std::string a = run();
  CHECK(a == run());
  CHECK(a.rfind("j,measured_norm,epsilon_theory,R_j,d_j,min_deg,chi_norm\n", 0) == 0);
}

TEST_CASE("csv layouts") {
  Trajectory<double> tr{{0.0, 0.5}, {CVector<double>::Constant(2, cd(1, 2)), CVector<double>::Constant(2, 0.5)}, {}};
  std::ostringstream os;
  io::write_trajectory_csv(os, tr);
  CHECK(os.str() == "t,re_x1,im_x1,re_x2,im_x2\n0,1,2,1,2\n0.5,0.5,0,0.5,0\n");

  std::ostringstream bs;
  BoundCheckResult r{"tail_sum", 2.0, 1.0, true, {{"m", 2.0}}};
  io::write_bounds_csv(bs, {r, r}, {"", "DomainError: x"});
  CHECK(bs.str() == "name,parameters,bound,oracle,status\ntail_sum,m=2,2,1,satisfied\ntail_sum,m=2,2,1,DomainError: x\n");
}
