#include "aoi/json_io.hpp"

#include <variant>

namespace aoi {
namespace {

double number_field(const nlohmann::json& j, const std::string& key,
                    const std::string& path) {
  if (!j.contains(key)) throw SpecError(path + "/" + key, "missing field");
  if (!j.at(key).is_number()) throw SpecError(path + "/" + key, "must be a number");
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json to_json(const Distribution& d) {
  nlohmann::json j;
  j["kind"] = std::string(d.kind_name());
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          j["rate"] = law.rate;
        } else if constexpr (std::is_same_v<T, Erlang>) {
          j["k"] = law.k;
          j["rate"] = law.rate;
        } else if constexpr (std::is_same_v<T, Hyper2>) {
          j["p1"] = law.p1;
          j["rate1"] = law.rate1;
          j["rate2"] = law.rate2;
        } else {
          j["value"] = law.value;
        }
      },
      d.law());
  return j;
}

Distribution distribution_from_json(const nlohmann::json& j,
                                    const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "distribution must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw SpecError(path + "/kind", "missing or not a string");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "exp") return Distribution::exponential(number_field(j, "rate", path));
    if (kind == "erlang") {
      if (!j.contains("k") || !j.at("k").is_number_integer()) {
        throw SpecError(path + "/k", "must be an integer");
      }
      return Distribution::erlang(j.at("k").get<int>(), number_field(j, "rate", path));
    }
    if (kind == "hyper2") {
      return Distribution::hyper2(number_field(j, "p1", path),
                                  number_field(j, "rate1", path),
                                  number_field(j, "rate2", path));
    }
    if (kind == "det") return Distribution::deterministic(number_field(j, "value", path));
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(path, e.what());
  }
  throw SpecError(path + "/kind", "unknown distribution kind '" + kind + "'");
}

}  // namespace aoi
