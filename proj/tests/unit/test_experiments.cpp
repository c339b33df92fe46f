#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aoi/experiments.hpp"

namespace ex = aoi::experiments;
using nlohmann::json;

namespace {

std::string csv_of(const std::vector<ex::SweepRow>& rows, ex::Format fmt = ex::Format::Csv) {
  std::ostringstream os;
  ex::write_rows(os, rows, fmt);
  return os.str();
}

std::string spec_error_path(const json& j) {
  try {
    ex::parse_sweep_spec(j);
  } catch (const aoi::SpecError& e) {
    return e.path();
  }
  return "<no error>";
}

json small_spec() {
  return json::parse(R"({
    "model": "mg1_sequential",
    "lambda_grid": {"start": 0.1, "stop": 0.5, "step": 0.1},
    "alpha_values": [0.0, 0.9],
    "n_nodes": 2,
    "engines": ["analytic", "simulation"],
    "simulation": {"horizon": 5000, "replications": 3},
    "seed": 3
  })");
}

// Closed-form M/M/1 AAoI (1/mu)(1 + 1/rho + rho^2 / (1 - rho)) with mu = 1.
double mm1_aaoi(double rho) { return 1.0 + 1.0 / rho + rho * rho / (1.0 - rho); }

}  // namespace

TEST_CASE("lambda grid") {
  const auto v = ex::LambdaGrid{}.values();
  REQUIRE(v.size() == 25);
  CHECK(v.front() == 0.02);
  CHECK(v.back() == 0.5);
  CHECK(v[14] == 0.3);
  CHECK(ex::LambdaGrid{0.1, 0.1, 0.05}.values() == std::vector<double>{0.1});
  CHECK(ex::LambdaGrid{0.3, 0.1, 0.05}.values().empty());
}

TEST_CASE("number formatting") {
  CHECK(ex::format_number(0.1) == "0.1");
  CHECK(ex::format_number(1.0 / 3.0) == "0.333333333");
  CHECK(ex::format_number(123456789012.0) == "1.23456789e+11");
  CHECK(ex::format_number(std::nullopt).empty());
  CHECK(ex::format_number(NAN).empty());
  CHECK(ex::format_number(INFINITY).empty());
}

TEST_CASE("sweep spec parsing") {
  const auto s = ex::parse_sweep_spec(small_spec());
  CHECK(s.family == ex::Family::Mg1Sequential);
  CHECK(s.alpha_values == std::vector<double>{0.0, 0.9});
  CHECK(s.engines.size() == 2);
  CHECK(s.simulation.horizon == 5000.0);
  CHECK(s.simulation.replications == 3);
  CHECK(s.simulation.warmup_fraction == 0.1);
  CHECK(s.seed == 3);
  // Round trip through the manifest representation.
  const auto again = ex::parse_sweep_spec(ex::to_json(s));
  CHECK(ex::to_json(again) == ex::to_json(s));

  const auto alias = ex::parse_sweep_spec(json::parse(
      R"({"model":"analytic_mm1","lambda_grid":{"start":0.1,"stop":0.2,"step":0.1},"gamma":2})"));
  CHECK(alias.family == ex::Family::MarkovTandem);
  CHECK(alias.engines == std::vector<ex::Engine>{ex::Engine::Analytic});
  CHECK(alias.repair == aoi::Distribution::exponential(2.0));
}

TEST_CASE("sweep spec diagnostics carry a JSON pointer") {
  auto j = small_spec();
  j["alpha_values"] = json::array({0.1, -1.0});
  CHECK(spec_error_path(j) == "/alpha_values/1");

  j = small_spec();
  j["lambda_grid"].erase("step");
  CHECK(spec_error_path(j) == "/lambda_grid/step");

  j = small_spec();
  j["engines"] = json::array({"analytic", "ctmc"});
  CHECK(spec_error_path(j) == "/engines/1");

  j = small_spec();
  j["model"] = "mg1_overlap";
  CHECK(spec_error_path(j) == "/engines/0");

  j = small_spec();
  j["model"] = "markov_tandem";
  j["stage"] = json::parse(R"({"kind":"erlang","k":2,"rate":2})");
  CHECK(spec_error_path(j) == "/stage");

  j = small_spec();
  j["model"] = "markov_tandem";
  j["engines"] = json::array({"analytic"});
  j["n_nodes"] = 3;
  CHECK(spec_error_path(j) == "/engines/0");

  j = small_spec();
  j["simulation"]["replications"] = 0;
  CHECK(spec_error_path(j) == "/simulation/replications");

  j = small_spec();
  j["lamda_grid"] = j["lambda_grid"];
  CHECK(spec_error_path(j) == "/lamda_grid");

  j = small_spec();
  j["model"] = "mm1";
  CHECK(spec_error_path(j) == "/model");
}

TEST_CASE("CSV schema") {
  const auto result = ex::run_sweep(ex::parse_sweep_spec(small_spec()), 2);
  // 5 lambdas x 2 alphas x 2 engines.
  REQUIRE(result.rows.size() == 20);
  const std::string text = csv_of(result.rows);
  CHECK(text.rfind(std::string(ex::kCsvHeader) + "\r\n", 0) == 0);
  CHECK(std::string(ex::kCsvHeader) ==
        "model,N,lambda,alpha,gamma,dist_kind,engine,aaoi,aaoi_ci_half,sojourn_mean,stable,"
        "runtime_sec");
  CHECK(text.find("nan") == std::string::npos);
  CHECK(text.find("inf") == std::string::npos);

  std::istringstream is(text);
  const auto parsed = ex::read_csv(is);
  REQUIRE(parsed.size() == result.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].stable == result.rows[i].stable);
    CHECK(parsed[i].engine == result.rows[i].engine);
    CHECK(parsed[i].lambda == result.rows[i].lambda);
    if (!parsed[i].stable) CHECK_FALSE(parsed[i].aaoi.has_value());
    if (parsed[i].engine == ex::Engine::Analytic) CHECK_FALSE(parsed[i].aaoi_ci_half.has_value());
    CHECK_FALSE(parsed[i].runtime_sec.has_value());
  }
}

TEST_CASE("read_csv names the offending line and column") {
  std::istringstream bad_header("model,N\r\n");
  CHECK_THROWS_WITH_AS(ex::read_csv(bad_header), doctest::Contains("header"), std::runtime_error);
  std::istringstream bad_value(std::string(ex::kCsvHeader) +
                               "\r\nmg1_sequential,2,abc,0,1,exp,analytic,1,,1,true,\r\n");
  CHECK_THROWS_WITH_AS(ex::read_csv(bad_value), doctest::Contains("lambda"), std::runtime_error);
  std::istringstream unstable_with_value(
      std::string(ex::kCsvHeader) + "\r\nmg1_sequential,2,0.1,0,1,exp,analytic,1,,1,false,\r\n");
  CHECK_THROWS_AS(ex::read_csv(unstable_with_value), std::runtime_error);
}

TEST_CASE("rows are sorted by alpha, lambda, engine") {
  const auto rows = ex::run_sweep(ex::parse_sweep_spec(small_spec()), 3).rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    const auto key = [](const ex::SweepRow& r) {
      return std::make_tuple(r.alpha, r.lambda, std::string(ex::engine_name(r.engine)));
    };
    CHECK(key(a) < key(b));
  }
}

TEST_CASE("points past the stability boundary become flagged rows") {
  auto j = small_spec();
  j["lambda_grid"] = json::parse(R"({"start": 0.1, "stop": 0.9, "step": 0.2})");
  const auto rows = ex::run_sweep(ex::parse_sweep_spec(j), 1).rows;
  int unstable = 0;
  for (const auto& r : rows) {
    if (!r.stable) {
      ++unstable;
      CHECK_FALSE(r.aaoi.has_value());
      CHECK_FALSE(r.sojourn_mean.has_value());
    }
  }
  CHECK(unstable > 0);
}

TEST_CASE("sweeps are deterministic across runs and worker counts") {
  const auto spec = ex::parse_sweep_spec(small_spec());
  const auto a = csv_of(ex::run_sweep(spec, 1).rows);
  const auto b = csv_of(ex::run_sweep(spec, 4).rows);
  CHECK(a == b);
  CHECK(csv_of(ex::run_sweep(spec, 1).rows, ex::Format::Jsonl) ==
        csv_of(ex::run_sweep(spec, 2).rows, ex::Format::Jsonl));
}

TEST_CASE("runtime is recorded only on request") {
  auto j = small_spec();
  j["record_runtime"] = true;
  for (const auto& r : ex::run_sweep(ex::parse_sweep_spec(j), 1).rows) {
    CHECK(r.runtime_sec.has_value());
  }
}

TEST_CASE("JSONL rows") {
  const auto rows = ex::run_sweep(ex::parse_sweep_spec(small_spec()), 1).rows;
  std::istringstream is(csv_of(rows, ex::Format::Jsonl));
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    const auto j = json::parse(line);
    CHECK(j.contains("aaoi"));
    CHECK(j.at("stable").is_boolean());
    if (!j.at("stable").get<bool>()) CHECK(j.at("aaoi").is_null());
    ++n;
  }
  CHECK(n == rows.size());
}

TEST_CASE("sweep_to_file writes data and manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "aoi_sweep_test";
  std::filesystem::remove_all(dir);
  const auto spec = ex::parse_sweep_spec(small_spec());
  ex::sweep_to_file(spec, dir / "out.csv", 2, ex::Format::Csv);
  REQUIRE(std::filesystem::exists(dir / "out.csv"));
  std::ifstream ms(dir / "out.csv.manifest.json");
  const auto manifest = json::parse(ms);
  CHECK(manifest.at("spec") == ex::to_json(spec));
  CHECK(manifest.at("seed") == 3);
  CHECK(manifest.at("tool_version") == ex::tool_version());
  CHECK(manifest.contains("wall_time_sec"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("Markov sweep engines") {
  const auto spec = ex::parse_sweep_spec(json::parse(R"({
    "model": "markov_tandem",
    "lambda_grid": {"start": 0.1, "stop": 0.4, "step": 0.1},
    "alpha_values": [0.5],
    "engines": ["ctmc", "simulation"],
    "simulation": {"horizon": 20000, "replications": 4}
  })"));
  const auto rows = ex::run_sweep(spec, 2).rows;
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    if (r.engine == ex::Engine::Ctmc) {
      CHECK_FALSE(r.aaoi.has_value());
      if (r.stable) CHECK(r.sojourn_mean.has_value());
    }
  }
  // lambda = 0.4 violates the analytic condition but not the per-node one.
  CHECK(rows[4].stable);
  CHECK_FALSE(rows[6].stable);
  CHECK(rows[7].stable);
}

TEST_CASE("per-node rows and waits") {
  const auto spec = ex::parse_sweep_spec(json::parse(R"({
    "model": "markov_tandem", "n_nodes": 3, "per_node_rows": true,
    "lambda_grid": {"start": 0.2, "stop": 0.2, "step": 0.1},
    "alpha_values": [0.5],
    "simulation": {"horizon": 20000, "replications": 4}
  })"));
  const auto rows = ex::run_sweep(spec, 1).rows;
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i].n == i + 1);
  CHECK(*rows[0].aaoi < *rows[1].aaoi);
  CHECK(*rows[1].aaoi < *rows[2].aaoi);
  std::ostringstream os;
  ex::write_wait_csv(os, rows);
  CHECK(os.str().rfind("model,N,lambda,alpha,gamma,dist_kind,engine,node,wait_mean,wait_ci_half,"
                       "stable",
                       0) == 0);
}

TEST_CASE("lambda* of a single M/M/1 node") {
  // Oracle: golden-section search on the closed form.
  double a = 0.05, b = 0.95;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-9) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (mm1_aaoi(c) < mm1_aaoi(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  const double oracle = 0.5 * (a + b);
  CHECK(oracle == doctest::Approx(0.531).epsilon(1e-3));

  ex::LambdaStarSpec s;
  s.n_nodes = 1;
  s.lo = 0.02;
  s.hi = 0.98;
  const auto r = ex::find_lambda_star(s);
  CHECK(std::abs(r.lambda_star - oracle) < 1e-3);
  CHECK(r.aaoi_min == doctest::Approx(mm1_aaoi(oracle)).epsilon(1e-6));
}

TEST_CASE("lambda* with the simulation engine uses a CI-limited stop") {
  ex::LambdaStarSpec s;
  s.engine = ex::Engine::Simulation;
  s.n_nodes = 1;
  s.lo = 0.1;
  s.hi = 0.9;
  s.coarse_step = 0.1;
  s.simulation = {50000, 0.1, 4};
  const auto r = ex::find_lambda_star(s);
  CHECK(r.aaoi_ci_half.has_value());
  CHECK(std::abs(r.lambda_star - 0.531) < 0.1);
}

TEST_CASE("lambda* rejects monotone brackets") {
  ex::LambdaStarSpec s;
  s.n_nodes = 1;
  s.lo = 0.7;
  s.hi = 0.95;
  CHECK_THROWS_WITH_AS(ex::find_lambda_star(s), doctest::Contains("no interior minimum"),
                       std::runtime_error);
}

TEST_CASE("lambda* spec parsing") {
  const auto s = ex::parse_lambda_star_spec(json::parse(
      R"({"model":"mg1_sequential","engine":"analytic","alpha":0.5,"stage":{"kind":"erlang","k":2,"rate":2}})"));
  CHECK(s.alpha == 0.5);
  CHECK(s.stage == aoi::Distribution::erlang(2, 2.0));
  CHECK_THROWS_AS(ex::parse_lambda_star_spec(json::parse(R"({"model":"mg1_sequential","lo":0.5,"hi":0.2})")),
                  aoi::SpecError);
  CHECK_THROWS_AS(ex::parse_lambda_star_spec(json::parse(R"({"model":"markov_tandem","engine":"ctmc"})")),
                  aoi::SpecError);
}

TEST_CASE("figure specs") {
  for (const auto& id : ex::kFigureIds) {
    CAPTURE(id);
    const auto specs = ex::figure_specs(id, {}, 1);
    CHECK_FALSE(specs.empty());
    for (const auto& s : specs) CHECK(s.label == id);
  }
  const auto fig3b = ex::figure_specs("fig3b", {}, 1).front();
  CHECK(fig3b.n_nodes == 4);
  CHECK(fig3b.alpha_values == std::vector<double>{0.5});
  CHECK(fig3b.engines == std::vector<ex::Engine>{ex::Engine::Simulation});
  const auto fig4c = ex::figure_specs("fig4c", {}, 1);
  REQUIRE(fig4c.size() == 2);
  CHECK(fig4c[1].stage.kind() == aoi::DistKind::Hyper2);
  CHECK_THROWS_AS(ex::figure_specs("fig5", {}, 1), std::invalid_argument);
}

TEST_CASE("reproduce writes the figure files") {
  const auto dir = std::filesystem::temp_directory_path() / "aoi_reproduce_test";
  std::filesystem::remove_all(dir);
  const auto rows = ex::reproduce("fig3c", dir, {5000, 0.1, 2}, 1, 2, ex::Format::Csv);
  CHECK_FALSE(rows.empty());
  CHECK(std::filesystem::exists(dir / "fig3c.csv"));
  CHECK(std::filesystem::exists(dir / "fig3c_waits.csv"));
  CHECK(std::filesystem::exists(dir / "fig3c.manifest.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("validation report schema") {
  CHECK_THROWS_AS(ex::validate("nightly", 1), std::invalid_argument);
  const auto report = ex::validate("quick", 1);
  const auto j = report.to_json();
  CHECK(j.at("suite") == "quick");
  for (const auto& row : j.at("rows")) {
    CHECK(row.contains("measured_gap"));
    CHECK(row.contains("pass"));
    CHECK(row.contains("tolerance"));
  }
  CHECK(report.to_text().find("checks passed") != std::string::npos);
}
