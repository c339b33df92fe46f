#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aoi/experiments.hpp"

#ifndef AOI_VERSION
#define AOI_VERSION "0.0.0"
#endif

namespace aoi::experiments {

std::string tool_version() { return AOI_VERSION; }

std::string_view family_name(Family f) {
  switch (f) {
    case Family::MarkovTandem: return "markov_tandem";
    case Family::Mg1Sequential: return "mg1_sequential";
    case Family::Mg1Overlap: return "mg1_overlap";
  }
  return "unknown";
}

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::Ctmc: return "ctmc";
    case Engine::Simulation: return "simulation";
  }
  return "unknown";
}

std::string format_number(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", *x);
  return buf;
}

namespace {

nlohmann::json number_or_null(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  // Round-trip through the fixed format so CSV and JSONL agree.
  return std::stod(format_number(x));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, Format fmt) {
  if (fmt == Format::Jsonl) {
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["model"] = r.model;
      j["N"] = r.n;
      j["lambda"] = number_or_null(r.lambda);
      j["alpha"] = number_or_null(r.alpha);
      j["gamma"] = number_or_null(r.gamma);
      j["dist_kind"] = r.dist_kind;
      j["engine"] = std::string(engine_name(r.engine));
      j["aaoi"] = number_or_null(r.aaoi);
      j["aaoi_ci_half"] = number_or_null(r.aaoi_ci_half);
      j["sojourn_mean"] = number_or_null(r.sojourn_mean);
      j["stable"] = r.stable;
      j["runtime_sec"] = number_or_null(r.runtime_sec);
      os << j.dump() << '\n';
    }
    return;
  }
  os << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    os << r.model << ',' << r.n << ',' << format_number(r.lambda) << ','
       << format_number(r.alpha) << ',' << format_number(r.gamma) << ','
       << r.dist_kind << ',' << engine_name(r.engine) << ','
       << format_number(r.aaoi) << ',' << format_number(r.aaoi_ci_half) << ','
       << format_number(r.sojourn_mean) << ',' << (r.stable ? "true" : "false")
       << ',' << format_number(r.runtime_sec) << "\r\n";
  }
}

void write_wait_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "model,N,lambda,alpha,gamma,dist_kind,engine,node,wait_mean,wait_ci_half,"
        "stable\r\n";
  for (const auto& r : rows) {
    if (r.engine != Engine::Simulation || r.node_wait.empty()) continue;
    for (std::size_t i = 0; i < r.node_wait.size(); ++i) {
      os << r.model << ',' << r.n << ',' << format_number(r.lambda) << ','
         << format_number(r.alpha) << ',' << format_number(r.gamma) << ','
         << r.dist_kind << ',' << engine_name(r.engine) << ',' << (i + 1) << ','
         << format_number(r.node_wait[i]) << ','
         << format_number(i < r.node_wait_ci.size() ? std::optional(r.node_wait_ci[i])
                                                     : std::nullopt)
         << ',' << (r.stable ? "true" : "false") << "\r\n";
    }
  }
}

std::vector<SweepRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("line 1: header mismatch");

  static const char* columns[] = {"model", "N", "lambda", "alpha", "gamma",
                                  "dist_kind", "engine", "aaoi", "aaoi_ci_half",
                                  "sojourn_mean", "stable", "runtime_sec"};
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    auto fail = [&](int col, const std::string& why) {
      throw std::runtime_error("line " + std::to_string(line_no) + ", column '" +
                               columns[col] + "': " + why);
    };
    if (f.size() != 12) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 12 fields");
    }
    auto number = [&](int col, bool required) -> std::optional<double> {
      if (f[col].empty()) {
        if (required) fail(col, "empty");
        return std::nullopt;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f[col], &used);
      } catch (const std::exception&) {
        fail(col, "not a number");
      }
      if (used != f[col].size() || !std::isfinite(v)) fail(col, "not a finite number");
      return v;
    };
    SweepRow r;
    r.model = f[0];
    if (r.model.empty()) fail(0, "empty");
    r.n = static_cast<std::size_t>(*number(1, true));
    r.lambda = *number(2, true);
    r.alpha = *number(3, true);
    r.gamma = *number(4, true);
    r.dist_kind = f[5];
    if (f[6] == "analytic") r.engine = Engine::Analytic;
    else if (f[6] == "ctmc") r.engine = Engine::Ctmc;
    else if (f[6] == "simulation") r.engine = Engine::Simulation;
    else fail(6, "unknown engine");
    r.aaoi = number(7, false);
    r.aaoi_ci_half = number(8, false);
    r.sojourn_mean = number(9, false);
    if (f[10] == "true") r.stable = true;
    else if (f[10] == "false") r.stable = false;
    else fail(10, "expected true or false");
    r.runtime_sec = number(11, false);
    if (!r.stable && r.aaoi) fail(7, "unstable row carries a value");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace aoi::experiments
