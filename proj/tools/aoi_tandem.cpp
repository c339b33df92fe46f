// aoi-tandem: sweeps, lambda* search, validation and figure reproduction.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "aoi/experiments.hpp"

namespace ex = aoi::experiments;
using nlohmann::json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "csv";

  ex::Format fmt() const { return format == "jsonl" ? ex::Format::Jsonl : ex::Format::Csv; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed (replication i uses seed + i)");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

int run_sweep(const std::string& config, std::optional<std::string> out, const Common& c) {
  const json j = load_json(config);
  auto spec = ex::parse_sweep_spec(j);
  if (c.seed) spec.seed = *c.seed;
  if (!out) {
    out = j.contains("output") && j.at("output").is_string()
              ? j.at("output").get<std::string>()
              : std::string(c.fmt() == ex::Format::Csv ? "sweep.csv" : "sweep.jsonl");
  }
  const auto result = ex::sweep_to_file(spec, *out, c.jobs, c.fmt());
  std::size_t unstable = 0;
  for (const auto& r : result.rows) unstable += r.stable ? 0 : 1;
  std::cout << "wrote " << result.rows.size() << " rows (" << unstable << " unstable) to " << *out
            << '\n';
  for (const auto& d : result.manifest.at("diagnostics")) {
    std::cerr << "note: " << d.get<std::string>() << '\n';
  }
  return 0;
}

int run_lambda_star(const std::string& config, const Common& c) {
  auto spec = ex::parse_lambda_star_spec(load_json(config));
  if (c.seed) spec.seed = *c.seed;
  const auto r = ex::find_lambda_star(spec);
  json out = {{"lambda_star", r.lambda_star},
              {"aaoi_min", r.aaoi_min},
              {"aaoi_ci_half", r.aaoi_ci_half ? json(*r.aaoi_ci_half) : json(nullptr)},
              {"evaluations", r.evaluations}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_validate(const std::string& suite, const std::string& out, const Common& c) {
  const auto report = ex::validate(suite, c.jobs);
  std::filesystem::create_directories(out);
  std::ofstream(std::filesystem::path(out) / "validation.json") << report.to_json().dump(2) << '\n';
  std::ofstream(std::filesystem::path(out) / "validation.txt") << report.to_text();
  std::cout << report.to_text();
  return 0;
}

int run_reproduce(const std::string& figure, const std::string& out, const ex::SimSettings& sim,
                  const Common& c) {
  std::vector<std::string> figures;
  if (figure == "all") {
    figures = ex::kFigureIds;
  } else {
    figures = {figure};
  }
  for (const auto& f : figures) {
    const auto rows = ex::reproduce(f, out, sim, c.seed.value_or(1), c.jobs, c.fmt());
    std::cout << f << ": " << rows.size() << " rows written to " << out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average age of information in unreliable tandem queues"};
  app.set_version_flag("--version", ex::tool_version());
  app.require_subcommand(1);

  Common common;

  std::string sweep_config;
  std::optional<std::string> sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid and write CSV + manifest");
  sweep->add_option("--config", sweep_config, "Sweep spec (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "Output file (default: spec 'output' or sweep.csv)");
  add_common(sweep, common);

  std::string figure;
  std::string reproduce_out;
  ex::SimSettings sim;
  auto* reproduce = app.add_subcommand("reproduce", "Run the canned sweeps behind a figure");
  reproduce->add_option("fig-id", figure, "Figure id or 'all'")
      ->required()
      ->check(CLI::IsMember([] {
        auto ids = ex::kFigureIds;
        ids.push_back("all");
        return ids;
      }()));
  reproduce->add_option("--out", reproduce_out, "Output directory")->required();
  reproduce->add_option("--horizon", sim.horizon, "Simulated time per replication")
      ->check(CLI::PositiveNumber);
  reproduce->add_option("--replications", sim.replications, "Replications per point")
      ->check(CLI::PositiveNumber);
  add_common(reproduce, common);

  std::string suite = "default";
  std::string validate_out;
  auto* validate = app.add_subcommand("validate", "Cross-check closed forms against oracles");
  validate->add_option("--suite", suite, "Suite id")->check(CLI::IsMember({"default", "quick"}));
  validate->add_option("--out", validate_out, "Report directory")->required();
  add_common(validate, common);

  std::string ls_config;
  auto* lambda_star = app.add_subcommand("lambda-star", "Locate the AAoI-minimising arrival rate");
  lambda_star->add_option("--config", ls_config, "Search spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(lambda_star, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep(sweep_config, sweep_out, common);
    if (*reproduce) return run_reproduce(figure, reproduce_out, sim, common);
    if (*validate) return run_validate(suite, validate_out, common);
    if (*lambda_star) return run_lambda_star(ls_config, common);
  } catch (const aoi::SpecError& e) {
    std::cerr << "error: invalid spec " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
