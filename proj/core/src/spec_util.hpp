#pragma once

#include <set>
#include <string>

#include "aoi/experiments.hpp"

namespace aoi::experiments::detail {

double number_at(const nlohmann::json& j, const std::string& key, const std::string& path);
void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& path);
// `analytic_alias` is set for the analytic_mm1 / analytic_mg1 spellings.
Family parse_family(const std::string& name, bool& analytic_alias);
Engine parse_engine(const nlohmann::json& j, const std::string& path);
SimSettings parse_simulation(const nlohmann::json& j, const std::string& path);
nlohmann::json simulation_to_json(const SimSettings& s);
void check_engine_support(Family family, Engine engine, std::size_t n_nodes,
                          const std::string& path);
void check_markov_laws(Family family, const Distribution& stage, const Distribution& repair);

}  // namespace aoi::experiments::detail
