#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoi/experiments.hpp"
#include "spec_util.hpp"

namespace aoi::experiments {
namespace {

using nlohmann::json;
using namespace aoi::experiments::detail;

struct Sample {
  double lambda;
  double aaoi;
  double ci;
};

}  // namespace

LambdaStarSpec parse_lambda_star_spec(const json& j) {
  if (!j.is_object()) throw SpecError("", "lambda-star spec must be a JSON object");
  reject_unknown(j,
                 {"model", "engine", "n_nodes", "stage", "repair", "gamma", "alpha", "lo",
                  "hi", "coarse_step", "tolerance", "simulation", "seed", "label"},
                 "");
  LambdaStarSpec s;
  if (!j.contains("model") || !j.at("model").is_string()) {
    throw SpecError("/model", "missing or not a string");
  }
  bool analytic_alias = false;
  s.family = parse_family(j.at("model").get<std::string>(), analytic_alias);
  if (j.contains("engine")) {
    s.engine = parse_engine(j.at("engine"), "/engine");
  } else {
    s.engine = analytic_alias ? Engine::Analytic : Engine::Simulation;
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
  check_engine_support(s.family, s.engine, s.n_nodes, "/engine");
  if (s.engine == Engine::Ctmc) throw SpecError("/engine", "ctmc engine yields no AAoI");

  if (j.contains("alpha")) s.alpha = number_at(j, "alpha", "");
  if (!(s.alpha >= 0.0)) throw SpecError("/alpha", "must be >= 0");
  if (j.contains("lo")) s.lo = number_at(j, "lo", "");
  if (j.contains("hi")) s.hi = number_at(j, "hi", "");
  if (!(s.lo > 0.0)) throw SpecError("/lo", "must be positive");
  if (!(s.hi > s.lo)) throw SpecError("/hi", "must exceed lo");
  if (j.contains("coarse_step")) s.coarse_step = number_at(j, "coarse_step", "");
  if (!(s.coarse_step > 0.0)) throw SpecError("/coarse_step", "must be positive");
  if (j.contains("tolerance")) s.tolerance = number_at(j, "tolerance", "");
  if (!(s.tolerance > 0.0)) throw SpecError("/tolerance", "must be positive");
  if (j.contains("simulation")) s.simulation = parse_simulation(j.at("simulation"), "/simulation");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SpecError("/seed", "must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  return s;
}

LambdaStar find_lambda_star(const LambdaStarSpec& spec) {
  if (spec.engine == Engine::Ctmc) throw std::invalid_argument("ctmc engine yields no AAoI");
  int evaluations = 0;
  auto eval = [&](double lambda) -> std::optional<Sample> {
    ++evaluations;
    const PointEstimate e = evaluate_point({spec.family, spec.engine, spec.n_nodes, spec.stage,
                                            spec.repair, lambda, spec.alpha, spec.simulation,
                                            spec.seed});
    if (!e.stable || !e.aaoi || !std::isfinite(*e.aaoi)) return std::nullopt;
    return Sample{lambda, *e.aaoi, e.aaoi_ci_half.value_or(0.0)};
  };

  std::vector<Sample> scan;
  const auto steps = static_cast<int>(std::floor((spec.hi - spec.lo) / spec.coarse_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double lambda = spec.lo + i * spec.coarse_step;
    auto s = eval(lambda);
    if (!s) {
      // Past the stability boundary every larger rate is unstable too.
      if (!scan.empty()) break;
      continue;
    }
    scan.push_back(*s);
  }
  if (scan.size() < 3) {
    throw std::runtime_error("no interior minimum: fewer than three stable scan points");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    if (scan[i].aaoi < scan[best].aaoi) best = i;
  }
  if (best == 0 || best + 1 == scan.size()) {
    throw std::runtime_error("no interior minimum: scan minimum at lambda = " +
                             format_number(scan[best].lambda) + " lies on the scan boundary");
  }

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = scan[best - 1].lambda;
  double b = scan[best + 1].lambda;
  Sample best_sample = scan[best];
  auto probe = [&](double lambda) {
    auto s = eval(lambda);
    if (!s) throw std::runtime_error("point inside the bracket evaluated as unstable");
    if (s->aaoi < best_sample.aaoi) best_sample = *s;
    return *s;
  };
  Sample c = probe(b - ratio * (b - a));
  Sample d = probe(a + ratio * (b - a));
  while (b - a > spec.tolerance) {
    if (spec.engine == Engine::Simulation &&
        std::abs(c.aaoi - d.aaoi) <= std::max(c.ci, d.ci)) {
      break;
    }
    if (c.aaoi < d.aaoi) {
      b = d.lambda;
      d = c;
      c = probe(b - ratio * (b - a));
    } else {
      a = c.lambda;
      c = d;
      d = probe(a + ratio * (b - a));
    }
  }
  LambdaStar out{best_sample.lambda, best_sample.aaoi, std::nullopt, evaluations};
  if (spec.engine == Engine::Simulation) out.aaoi_ci_half = best_sample.ci;
  return out;
}

}  // namespace aoi::experiments
