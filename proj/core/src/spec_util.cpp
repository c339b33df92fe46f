#include "spec_util.hpp"

#include <algorithm>

namespace aoi::experiments::detail {

using nlohmann::json;

double number_at(const json& j, const std::string& key, const std::string& path) {
  if (!j.at(key).is_number()) throw SpecError(path + "/" + key, "must be a number");
  return j.at(key).get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw SpecError(path + "/" + key, "unknown field");
  }
}

Family parse_family(const std::string& name, bool& analytic_alias) {
  analytic_alias = false;
  if (name == "markov_tandem") return Family::MarkovTandem;
  if (name == "mg1_sequential") return Family::Mg1Sequential;
  if (name == "mg1_overlap") return Family::Mg1Overlap;
  analytic_alias = true;
  if (name == "analytic_mm1") return Family::MarkovTandem;
  if (name == "analytic_mg1") return Family::Mg1Sequential;
  throw SpecError("/model", "unknown model '" + name + "'");
}

Engine parse_engine(const json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "must be a string");
  const auto s = j.get<std::string>();
  if (s == "analytic") return Engine::Analytic;
  if (s == "ctmc") return Engine::Ctmc;
  if (s == "simulation") return Engine::Simulation;
  throw SpecError(path, "unknown engine '" + s + "'");
}

SimSettings parse_simulation(const json& j, const std::string& path) {
  SimSettings s;
  if (!j.is_object()) throw SpecError(path, "must be an object");
  reject_unknown(j, {"horizon", "warmup_fraction", "replications"}, path);
  if (j.contains("horizon")) s.horizon = number_at(j, "horizon", path);
  if (j.contains("warmup_fraction")) s.warmup_fraction = number_at(j, "warmup_fraction", path);
  if (j.contains("replications")) {
    if (!j.at("replications").is_number_integer()) {
      throw SpecError(path + "/replications", "must be an integer");
    }
    s.replications = j.at("replications").get<int>();
  }
  if (!(s.horizon > 0.0)) throw SpecError(path + "/horizon", "must be positive");
  if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction < 1.0)) {
    throw SpecError(path + "/warmup_fraction", "must lie in [0, 1)");
  }
  if (s.replications < 1) throw SpecError(path + "/replications", "must be >= 1");
  return s;
}

json simulation_to_json(const SimSettings& s) {
  return {{"horizon", s.horizon},
          {"warmup_fraction", s.warmup_fraction},
          {"replications", s.replications}};
}

void check_engine_support(Family family, Engine engine, std::size_t n_nodes,
                          const std::string& path) {
  if (family == Family::Mg1Overlap && engine != Engine::Simulation) {
    throw SpecError(path, "mg1_overlap has no analytic or ctmc engine");
  }
  if (family == Family::Mg1Sequential && engine == Engine::Ctmc) {
    throw SpecError(path, "ctmc engine only applies to markov_tandem");
  }
  if (family == Family::MarkovTandem && engine != Engine::Simulation && n_nodes != 2) {
    throw SpecError(path, "markov_tandem analytic/ctmc engines require n_nodes = 2");
  }
}

void check_markov_laws(Family family, const Distribution& stage,
                       const Distribution& repair) {
  if (family != Family::MarkovTandem) return;
  if (stage.kind() != DistKind::Exponential) {
    throw SpecError("/stage", "markov_tandem requires exponential service");
  }
  if (repair.kind() != DistKind::Exponential) {
    throw SpecError("/repair", "markov_tandem requires exponential repair");
  }
}

}  // namespace aoi::experiments::detail
