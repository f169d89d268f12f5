#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shorres/cli.hpp"

using namespace shorres;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"shorres"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate reports the example values") {
  const Result r = invoke({"simulate", "--n", "15", "--x", "7", "--t", "11"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(std::abs(j["stages"]["psi1"]["C_g"]["numeric"].get<double>() - 0.9995) < 5e-5);
  CHECK(std::abs(j["stages"]["psi2"]["E_g"]["closed_form"].get<double>() - 0.8445) < 1e-3);
  CHECK(std::abs(j["stages"]["psi3"]["C_g"]["numeric"].get<double>() - 0.9375) < 1e-12);
  CHECK(std::abs(j["stages"]["psi3"]["E_g"]["closed_form"].get<double>() - 0.9876) < 1e-3);
  CHECK(j["instance"]["within_square_window"] == false);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(j["variations"]["additivity_residual"].get<double>() < 1e-9);
  CHECK(j["support"]["register_b_psi2"] == json::array({1, 4, 7, 13}));
}

TEST_CASE("simulate is byte-identical under a fixed seed") {
  const Result a = invoke({"simulate", "--n", "15", "--x", "7", "--t", "11", "--seed", "1"});
  const Result b = invoke({"simulate", "--n", "15", "--x", "7", "--t", "11", "--seed", "1"});
  CHECK(a.out == b.out);
  const Result c = invoke({"simulate", "--n", "21", "--seed", "5"});
  const Result d = invoke({"simulate", "--n", "21", "--seed", "5"});
  CHECK(c.out == d.out);
}

TEST_CASE("simulate with order 2 gives a factor hint") {
  const Result r = invoke({"simulate", "--n", "15", "--x", "4"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["instance"]["r"] == 2);
  CHECK(j["factor_hint"] == json::array({3, 5}));
}

TEST_CASE("simulate when r does not divide Q") {
  const Result r = invoke({"simulate", "--n", "21", "--x", "2"});
  CHECK(r.code == 0);
  CHECK(r.err.find("does not divide") != std::string::npos);
  const json j = json::parse(r.out);
  CHECK(j["stages"]["psi3"]["C_g"]["closed_form"].is_null());
  CHECK(j["gamma"].contains("psi2"));
  CHECK_FALSE(j["gamma"].contains("psi3"));
}

TEST_CASE("simulate csv") {
  const Result r = invoke({"simulate", "--n", "15", "--x", "7", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 3 * 13);
  CHECK(rows[0][0] == "stage");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 9);
}

TEST_CASE("sweep l1p") {
  const Result r = invoke({"sweep", "--n", "15", "--x", "7", "--measure", "l1p", "--grid", "1:2:0.25"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"param", "C_psi1", "C_psi2", "C_psi3", "delta", "note"});
  CHECK(std::abs(std::stod(rows[1][3]) - 15.0) < 1e-9);
  CHECK(std::abs(std::stod(rows[5][3]) - std::sqrt(15.0)) < 1e-9);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::stod(rows[i][4]) == std::stod(rows[i][3]) - std::stod(rows[i][1]));
}

TEST_CASE("sweep csv round-trips losslessly") {
  const ShorInstance in = make_instance(15, 7, 11);
  const auto expected = cli::sweep_rows(in, "tsallis", cli::parse_grid("0.5:1.5:0.1"));
  const Result r = invoke({"sweep", "--n", "15", "--x", "7", "--measure", "tsallis", "--grid", "0.5:1.5:0.1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == expected.size() + 1);
  bool saw_limit = false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& cells = rows[i + 1];
    CHECK(std::stod(cells[0]) == expected[i].param);
    CHECK(std::stod(cells[1]) == expected[i].psi1);
    CHECK(std::stod(cells[2]) == expected[i].psi2);
    CHECK(std::stod(cells[3]) == expected[i].psi3);
    CHECK(std::stod(cells[4]) == expected[i].delta);
    if (cells[5] == "alpha_limit") saw_limit = true;
  }
  CHECK(saw_limit);
}

TEST_CASE("format_real") {
  for (double v : {0.1, 1.0 / 3.0, 2047.0, -0.06201171875, 6.02214076e23, 5e-324})
    CHECK(std::strtod(cli::format_real(v).c_str(), nullptr) == v);
  CHECK(cli::format_real(0.5) == "0.5");
}

TEST_CASE("parse_grid") {
  const cli::Grid g = cli::parse_grid("1:2:0.01");
  CHECK(g.points().size() == 101);
  CHECK(g.points().back() == doctest::Approx(2.0));
  CHECK_THROWS_AS(cli::parse_grid("1:2"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("1:2:0"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("2:1:0.1"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("a:b:c"), cli::ConfigError);
}

TEST_CASE("factor") {
  const Result r = invoke({"factor", "--n", "15", "--x", "7"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["status"] == "success");
  CHECK(j["factors"] == json::array({3, 5}));
  CHECK(j["attempts"].size() <= 10);
  CHECK(invoke({"factor", "--n", "15", "--x", "7"}).out == r.out);

  const Result fast = invoke({"factor", "--n", "15", "--x", "7", "--fast"});
  CHECK(fast.code == 0);
  CHECK(json::parse(fast.out)["factors"] == json::array({3, 5}));

  const Result bad = invoke({"factor", "--n", "15", "--x", "14"});
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["status"] == "method_inapplicable");

  const Result capped = invoke({"factor", "--n", "15", "--x", "7", "--max-attempts", "1", "--seed", "1"});
  const json cj = json::parse(capped.out);
  CHECK(cj["attempts"].size() == 1);
  if (cj["status"] != "success") CHECK(capped.code == 1);
}

TEST_CASE("run_factoring shares post-processing across both paths") {
  const ShorInstance in = make_instance(15, 7, 11);
  const cli::FactorOutcome a = cli::run_factoring(in, 42, 10, false);
  const cli::FactorOutcome b = cli::run_factoring(in, 42, 10, true);
  REQUIRE(a.attempts.size() == b.attempts.size());
  for (std::size_t i = 0; i < a.attempts.size(); ++i) CHECK(a.attempts[i].k == b.attempts[i].k);
}

TEST_CASE("verify") {
  const Result ok = invoke({"verify", "--n", "15", "--x", "7", "--t", "11"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["pass"] == true);

  const Result bad = invoke({"verify", "--n", "15", "--x", "7", "--inject-perturbation", "0.01"});
  CHECK(bad.code == 1);
  const json bj = json::parse(bad.out);
  CHECK(bj["pass"] == false);
  bool gap_reported = false;
  for (const auto& c : bj["checks"])
    if (c["gated"] == true && c["pass"] == false && c["value"].get<double>() > 1e-9) gap_reported = true;
  CHECK(gap_reported);

  const Result odd = invoke({"verify", "--n", "21", "--x", "2", "--format", "csv"});
  CHECK(odd.code == 0);
  CHECK(odd.out.find("not applicable") != std::string::npos);
  CHECK(odd.out.find("FAIL") == std::string::npos);
}

TEST_CASE("out writes the artifact to a file") {
  const std::string path = "cli_out_test.json";
  const Result r = invoke({"simulate", "--n", "15", "--x", "7", "--out", path.c_str()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["pass"] == true);
  std::remove(path.c_str());
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(invoke({"simulate", "--n", "16"}).code == 2);
  CHECK(invoke({"simulate", "--n", "13"}).code == 2);
  CHECK(invoke({"simulate", "--n", "15", "--x", "5"}).code == 2);
  CHECK(invoke({"simulate", "--n", "15", "--x", "1"}).code == 2);
  CHECK(invoke({"simulate", "--n", "15", "--epsilon", "1.5"}).code == 2);
  CHECK(invoke({"simulate", "--n", "15", "--format", "xml"}).code == 2);
  CHECK(invoke({"simulate", "--n", "15", "--t", "30"}).code == 2);
  CHECK(invoke({"sweep", "--n", "15", "--measure", "entropy"}).code == 2);
  CHECK(invoke({"sweep", "--n", "15", "--measure", "l1p", "--grid", "0.5:2:0.5"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"simulate", "--bogus"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("resolve picks a coprime x from the seed") {
  cli::RunConfig cfg;
  cfg.N = 35;
  cfg.seed = 3;
  const cli::ResolvedConfig a = cli::resolve(cfg);
  const cli::ResolvedConfig b = cli::resolve(cfg);
  REQUIRE(a.config.x.has_value());
  CHECK(a.config.x == b.config.x);
  CHECK(gcd(*a.config.x, 35) == 1);
  CHECK(a.instance.t == 15);
  CHECK(a.instance.L == 6);
}
