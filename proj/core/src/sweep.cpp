#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aoi/ctmc_oracle.hpp"
#include "aoi/experiments.hpp"
#include "aoi/mg1_tandem.hpp"
#include "aoi/mm1_tandem.hpp"
#include "aoi/simulation.hpp"
#include "parallel.hpp"
#include "spec_util.hpp"

namespace aoi::experiments {
namespace {

using nlohmann::json;
using namespace aoi::experiments::detail;

double repair_rate(const Distribution& repair) { return 1.0 / repair.mean(); }

template <class F>
std::optional<double> try_eval(F&& f, std::string& diagnostic) {
  try {
    return f();
  } catch (const std::exception& e) {
    if (!diagnostic.empty()) diagnostic += "; ";
    diagnostic += e.what();
    return std::nullopt;
  }
}

}  // namespace

std::vector<double> LambdaGrid::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(start > 0.0) || stop < start) return out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    // Round away accumulated binary noise (0.1 + 2*0.1 -> 0.3).
    const double v = start + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

SweepSpec parse_sweep_spec(const json& j) {
  if (!j.is_object()) throw SpecError("", "sweep spec must be a JSON object");
  reject_unknown(j,
                 {"model", "lambda_grid", "alpha_values", "n_nodes", "stage", "repair",
                  "gamma", "engines", "simulation", "per_node_rows", "seed",
                  "record_runtime", "label", "output"},
                 "");
  SweepSpec s;
  if (!j.contains("model") || !j.at("model").is_string()) {
    throw SpecError("/model", "missing or not a string");
  }
  bool analytic_alias = false;
  s.family = parse_family(j.at("model").get<std::string>(), analytic_alias);

  if (!j.contains("lambda_grid")) throw SpecError("/lambda_grid", "missing field");
  const auto& g = j.at("lambda_grid");
  if (!g.is_object()) throw SpecError("/lambda_grid", "must be an object");
  reject_unknown(g, {"start", "stop", "step"}, "/lambda_grid");
  for (const char* key : {"start", "stop", "step"}) {
    if (!g.contains(key)) throw SpecError(std::string("/lambda_grid/") + key, "missing field");
  }
  s.lambda_grid = {number_at(g, "start", "/lambda_grid"), number_at(g, "stop", "/lambda_grid"),
                   number_at(g, "step", "/lambda_grid")};
  if (!(s.lambda_grid.start > 0.0)) throw SpecError("/lambda_grid/start", "must be positive");
  if (!(s.lambda_grid.step > 0.0)) throw SpecError("/lambda_grid/step", "must be positive");
  if (s.lambda_grid.stop < s.lambda_grid.start) {
    throw SpecError("/lambda_grid/stop", "must be >= start");
  }

  if (j.contains("alpha_values")) {
    const auto& a = j.at("alpha_values");
    if (!a.is_array() || a.empty()) throw SpecError("/alpha_values", "must be a non-empty array");
    s.alpha_values.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string path = "/alpha_values/" + std::to_string(i);
      if (!a[i].is_number() || a[i].get<double>() < 0.0) {
        throw SpecError(path, "must be a number >= 0");
      }
      s.alpha_values.push_back(a[i].get<double>());
    }
  }
  if (j.contains("n_nodes")) {
    if (!j.at("n_nodes").is_number_integer() || j.at("n_nodes").get<long>() < 1) {
      throw SpecError("/n_nodes", "must be an integer >= 1");
    }
    s.n_nodes = j.at("n_nodes").get<std::size_t>();
  }
  if (j.contains("stage")) s.stage = distribution_from_json(j.at("stage"), "/stage");
  if (j.contains("repair") && j.contains("gamma")) {
    throw SpecError("/gamma", "give either gamma or repair, not both");
  }
  if (j.contains("repair")) s.repair = distribution_from_json(j.at("repair"), "/repair");
  if (j.contains("gamma")) {
    const double gamma = number_at(j, "gamma", "");
    if (!(gamma > 0.0)) throw SpecError("/gamma", "must be positive");
    s.repair = Distribution::exponential(gamma);
  }
  check_markov_laws(s.family, s.stage, s.repair);

  if (j.contains("engines")) {
    const auto& e = j.at("engines");
    if (!e.is_array() || e.empty()) throw SpecError("/engines", "must be a non-empty array");
    s.engines.clear();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string path = "/engines/" + std::to_string(i);
      const Engine engine = parse_engine(e[i], path);
      if (std::find(s.engines.begin(), s.engines.end(), engine) != s.engines.end()) {
        throw SpecError(path, "duplicate engine");
      }
      s.engines.push_back(engine);
    }
  } else if (analytic_alias) {
    s.engines = {Engine::Analytic};
  } else {
    s.engines = {Engine::Simulation};
  }
  for (std::size_t i = 0; i < s.engines.size(); ++i) {
    check_engine_support(s.family, s.engines[i], s.n_nodes, "/engines/" + std::to_string(i));
  }

  if (j.contains("simulation")) s.simulation = parse_simulation(j.at("simulation"), "/simulation");
  if (j.contains("per_node_rows")) {
    if (!j.at("per_node_rows").is_boolean()) throw SpecError("/per_node_rows", "must be a boolean");
    s.per_node_rows = j.at("per_node_rows").get<bool>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SpecError("/seed", "must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("record_runtime")) {
    if (!j.at("record_runtime").is_boolean()) throw SpecError("/record_runtime", "must be a boolean");
    s.record_runtime = j.at("record_runtime").get<bool>();
  }
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw SpecError("/label", "must be a string");
    s.label = j.at("label").get<std::string>();
  }
  return s;
}

json to_json(const SweepSpec& s) {
  json engines = json::array();
  for (Engine e : s.engines) engines.push_back(std::string(engine_name(e)));
  return {{"model", std::string(family_name(s.family))},
          {"lambda_grid",
           {{"start", s.lambda_grid.start}, {"stop", s.lambda_grid.stop}, {"step", s.lambda_grid.step}}},
          {"alpha_values", s.alpha_values},
          {"n_nodes", s.n_nodes},
          {"stage", aoi::to_json(s.stage)},
          {"repair", aoi::to_json(s.repair)},
          {"engines", engines},
          {"simulation", simulation_to_json(s.simulation)},
          {"per_node_rows", s.per_node_rows},
          {"seed", s.seed},
          {"record_runtime", s.record_runtime},
          {"label", s.label}};
}

PointEstimate evaluate_point(const PointSpec& p) {
  PointEstimate out{};
  const double gamma = repair_rate(p.repair);

  if (p.family == Family::MarkovTandem) {
    const double mu = 1.0 / p.stage.mean();
    if (p.engine == Engine::Simulation) {
      sim::MarkovParams params{p.lambda, std::vector<double>(p.n_nodes, mu), p.alpha, gamma};
      out.stable = params.is_stable();
      if (!out.stable) return out;
      sim::SimConfig cfg;
      cfg.model = sim::Model::MarkovTandemGlobalFailure;
      cfg.params = params;
      cfg.n_nodes = p.n_nodes;
      cfg.horizon = p.simulation.horizon;
      cfg.warmup_fraction = p.simulation.warmup_fraction;
      cfg.replications = p.simulation.replications;
      cfg.base_seed = p.seed;
      const auto r = sim::run(cfg);
      out.aaoi = r.aaoi_mean;
      out.aaoi_ci_half = r.aaoi_ci_half;
      out.sojourn_mean = r.sojourn_mean;
      out.node_aaoi = r.per_node_aaoi;
      out.node_aaoi_ci = r.per_node_aaoi_ci;
      out.node_wait = r.per_node_wait;
      out.node_wait_ci = r.per_node_wait_ci;
      return out;
    }
    const mm1::Params params{p.lambda, mu, mu, p.alpha, gamma};
    out.stable = params.is_stable();
    if (!out.stable) return out;
    if (p.engine == Engine::Ctmc) {
      out.sojourn_mean = try_eval(
          [&] { return ctmc::choose_cap(params).distribution.mean_total() / p.lambda; },
          out.diagnostic);
      return out;
    }
    out.aaoi = try_eval([&] { return mm1::aaoi(params); }, out.diagnostic);
    out.sojourn_mean = try_eval(
        [&] { return neg_derivative_at_zero(mm1::sojourn_lst(params)); }, out.diagnostic);
    return out;
  }

  const mg1::Params params{p.lambda, std::vector<Distribution>(p.n_nodes, p.stage), p.alpha,
                           p.repair};
  out.stable = params.is_stable();
  if (!out.stable) return out;
  if (p.engine == Engine::Simulation) {
    sim::SimConfig cfg;
    cfg.model = p.family == Family::Mg1Overlap ? sim::Model::Mg1Overlap
                                               : sim::Model::Mg1SequentialStage;
    cfg.params = params;
    cfg.n_nodes = p.n_nodes;
    cfg.horizon = p.simulation.horizon;
    cfg.warmup_fraction = p.simulation.warmup_fraction;
    cfg.replications = p.simulation.replications;
    cfg.base_seed = p.seed;
    const auto r = sim::run(cfg);
    out.aaoi = r.aaoi_mean;
    out.aaoi_ci_half = r.aaoi_ci_half;
    out.sojourn_mean = r.sojourn_mean;
    out.node_aaoi = r.per_node_aaoi;
    out.node_aaoi_ci = r.per_node_aaoi_ci;
    out.node_wait = r.per_node_wait;
    out.node_wait_ci = r.per_node_wait_ci;
    return out;
  }
  if (p.engine != Engine::Analytic || p.family != Family::Mg1Sequential) {
    throw std::invalid_argument("engine not available for this model");
  }
  out.aaoi = try_eval([&] { return mg1::aaoi(params); }, out.diagnostic);
  out.sojourn_mean =
      try_eval([&] { return neg_derivative_at_zero(mg1::sojourn_lst(params)); }, out.diagnostic);
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
  for (std::size_t i = 0; i < spec.engines.size(); ++i) {
    check_engine_support(spec.family, spec.engines[i], spec.n_nodes,
                         "/engines/" + std::to_string(i));
  }
  check_markov_laws(spec.family, spec.stage, spec.repair);
  const auto lambdas = spec.lambda_grid.values();
  if (lambdas.empty()) throw SpecError("/lambda_grid", "grid is empty");

  struct Task {
    double alpha;
    double lambda;
    Engine engine;
  };
  std::vector<Task> tasks;
  for (double a : spec.alpha_values)
    for (double l : lambdas)
      for (Engine e : spec.engines) tasks.push_back({a, l, e});

  const auto wall_start = std::chrono::steady_clock::now();
  std::vector<std::vector<SweepRow>> produced(tasks.size());
  aoi::detail::parallel_for(tasks.size(), jobs, [&](std::size_t k) {
    const Task& t = tasks[k];
    const auto t0 = std::chrono::steady_clock::now();
    const PointEstimate est = evaluate_point({spec.family, t.engine, spec.n_nodes, spec.stage,
                                              spec.repair, t.lambda, t.alpha, spec.simulation,
                                              spec.seed});
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    SweepRow base;
    base.model = std::string(family_name(spec.family));
    base.n = spec.n_nodes;
    base.lambda = t.lambda;
    base.alpha = t.alpha;
    base.gamma = repair_rate(spec.repair);
    base.dist_kind = std::string(spec.stage.kind_name());
    base.engine = t.engine;
    base.stable = est.stable;
    if (est.stable) {
      base.aaoi = est.aaoi;
      base.aaoi_ci_half = est.aaoi_ci_half;
      base.sojourn_mean = est.sojourn_mean;
    }
    if (spec.record_runtime) base.runtime_sec = elapsed;
    base.node_wait = est.node_wait;
    base.node_wait_ci = est.node_wait_ci;
    base.diagnostic = est.diagnostic;

    if (spec.per_node_rows && t.engine == Engine::Simulation) {
      for (std::size_t i = 0; i < spec.n_nodes; ++i) {
        SweepRow r = base;
        r.n = i + 1;
        if (est.stable && i < est.node_aaoi.size()) {
          r.aaoi = est.node_aaoi[i];
          r.aaoi_ci_half = est.node_aaoi_ci[i];
          if (i + 1 != spec.n_nodes) r.sojourn_mean.reset();
        }
        produced[k].push_back(std::move(r));
      }
    } else {
      produced[k].push_back(std::move(base));
    }
  });

  SweepResult result;
  for (auto& group : produced)
    for (auto& r : group) result.rows.push_back(std::move(r));
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.engine != b.engine) return engine_name(a.engine) < engine_name(b.engine);
    if (a.dist_kind != b.dist_kind) return a.dist_kind < b.dist_kind;
    return a.n < b.n;
  });

  json diagnostics = json::array();
  for (const auto& r : result.rows) {
    if (r.diagnostic.empty()) continue;
    std::ostringstream os;
    os << "alpha=" << format_number(r.alpha) << " lambda=" << format_number(r.lambda)
       << " engine=" << engine_name(r.engine) << " N=" << r.n << ": " << r.diagnostic;
    diagnostics.push_back(os.str());
  }
  result.manifest = {
      {"tool", "aoi-tandem"},
      {"tool_version", tool_version()},
      {"spec", to_json(spec)},
      {"seed", spec.seed},
      {"seed_policy",
       "common random numbers: every grid point uses the base seed; replication i uses seed + i"},
      {"rows", result.rows.size()},
      {"wall_time_sec",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count()},
      {"diagnostics", diagnostics},
      {"notes",
       "alpha curve family defaults to {0, 0.1, 0.5, 0.9}; only alpha = 0.5 and the 0 -> 0.9 "
       "span are reference settings"}};
  return result;
}

SweepResult sweep_to_file(const SweepSpec& spec, const std::filesystem::path& output,
                          unsigned jobs, Format fmt) {
  if (output.has_parent_path()) std::filesystem::create_directories(output.parent_path());
  std::ofstream os(output, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + output.string());
  SweepResult result = run_sweep(spec, jobs);
  write_rows(os, result.rows, fmt);
  if (!os) throw std::runtime_error("write failed for " + output.string());
  result.manifest["output"] = output.string();
  std::ofstream ms(output.string() + ".manifest.json", std::ios::binary);
  if (!ms) throw std::runtime_error("cannot write manifest next to " + output.string());
  ms << result.manifest.dump(2) << '\n';
  return result;
}

}  // namespace aoi::experiments
