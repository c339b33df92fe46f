#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "aoi/distribution.hpp"

namespace aoi {

/// Invalid configuration; `path()` is a JSON pointer to the offending field.
class SpecError : public std::invalid_argument {
 public:
  SpecError(const std::string& path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// {"kind":"exp","rate":1.0}, {"kind":"erlang","k":2,"rate":2.0},
// {"kind":"hyper2","p1":0.5,"rate1":2.0,"rate2":0.6667}, {"kind":"det","value":1.0}
nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j,
                                    const std::string& path = "");

}  // namespace aoi
