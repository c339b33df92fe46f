#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoi/distribution.hpp"
#include "aoi/json_io.hpp"

namespace aoi::experiments {

enum class Family { MarkovTandem, Mg1Sequential, Mg1Overlap };
enum class Engine { Analytic, Ctmc, Simulation };

std::string_view family_name(Family f);
std::string_view engine_name(Engine e);

struct LambdaGrid {
  double start = 0.02;
  double stop = 0.5;
  double step = 0.02;
  std::vector<double> values() const;
};

struct SimSettings {
  double horizon = 1e6;
  double warmup_fraction = 0.1;
  int replications = 20;
};

struct SweepSpec {
  Family family = Family::Mg1Sequential;
  LambdaGrid lambda_grid;
  // Default curve family; 0.5 and the 0 -> 0.9 span are the reference settings.
  std::vector<double> alpha_values{0.0, 0.1, 0.5, 0.9};
  std::size_t n_nodes = 2;
  Distribution stage = Distribution::exponential(1.0);
  Distribution repair = Distribution::exponential(1.0);
  std::vector<Engine> engines{Engine::Analytic};
  SimSettings simulation;
  // Simulation rows for every prefix 1..N of the chain (age after node i).
  bool per_node_rows = false;
  std::uint64_t seed = 1;
  bool record_runtime = false;
  std::string label;
};

/// Accepts "model" as one of markov_tandem, mg1_sequential, mg1_overlap,
/// analytic_mm1 (= markov_tandem, analytic engine), analytic_mg1
/// (= mg1_sequential, analytic engine). Throws SpecError with a JSON
/// pointer to the first offending field.
SweepSpec parse_sweep_spec(const nlohmann::json& j);
nlohmann::json to_json(const SweepSpec& spec);

struct SweepRow {
  std::string model;
  std::size_t n = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::string dist_kind;
  Engine engine = Engine::Analytic;
  std::optional<double> aaoi;
  std::optional<double> aaoi_ci_half;
  std::optional<double> sojourn_mean;
  bool stable = true;
  std::optional<double> runtime_sec;
  // Simulation only; not part of the main CSV schema.
  std::vector<double> node_wait;
  std::vector<double> node_wait_ci;
  std::string diagnostic;
};

inline constexpr const char* kCsvHeader =
    "model,N,lambda,alpha,gamma,dist_kind,engine,aaoi,aaoi_ci_half,"
    "sojourn_mean,stable,runtime_sec";

enum class Format { Csv, Jsonl };

/// Fixed formatting: 9 significant digits, empty field for missing values.
std::string format_number(std::optional<double> x);
void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, Format fmt);
/// Per-node expected waiting times of simulation rows.
void write_wait_csv(std::ostream& os, const std::vector<SweepRow>& rows);
/// Parses a CSV produced by write_rows; throws std::runtime_error naming
/// the line and column on any schema violation.
std::vector<SweepRow> read_csv(std::istream& is);

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json manifest;
};

/// Evaluates every (alpha, lambda, engine) point on a pool of `jobs`
/// workers. Rows are sorted by alpha, lambda, engine, dist_kind, N.
/// Unstable points produce stable=false rows.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs);

/// Writes <output> and <output>.manifest.json.
SweepResult sweep_to_file(const SweepSpec& spec, const std::filesystem::path& output,
                          unsigned jobs, Format fmt);

struct LambdaStarSpec {
  Family family = Family::Mg1Sequential;
  Engine engine = Engine::Analytic;
  std::size_t n_nodes = 2;
  Distribution stage = Distribution::exponential(1.0);
  Distribution repair = Distribution::exponential(1.0);
  double alpha = 0.0;
  double lo = 0.02;
  double hi = 1.0;
  double coarse_step = 0.02;
  double tolerance = 1e-4;
  SimSettings simulation;
  std::uint64_t seed = 1;
};

LambdaStarSpec parse_lambda_star_spec(const nlohmann::json& j);

struct LambdaStar {
  double lambda_star;
  double aaoi_min;
  std::optional<double> aaoi_ci_half;
  int evaluations;
};

/// Coarse scan of the stable part of [lo, hi] followed by golden-section
/// refinement. Simulation uses the same seed for every candidate and stops
/// once candidate differences fall inside their confidence intervals.
/// Throws std::runtime_error("no interior minimum ...") for monotone scans.
LambdaStar find_lambda_star(const LambdaStarSpec& spec);

/// AAoI (and CI half-width for simulation) at one point.
struct PointEstimate {
  bool stable;
  std::optional<double> aaoi;
  std::optional<double> aaoi_ci_half;
  std::optional<double> sojourn_mean;
  std::vector<double> node_aaoi;
  std::vector<double> node_aaoi_ci;
  std::vector<double> node_wait;
  std::vector<double> node_wait_ci;
  std::string diagnostic;
};

struct PointSpec {
  Family family;
  Engine engine;
  std::size_t n_nodes;
  Distribution stage;
  Distribution repair;
  double lambda;
  double alpha;
  SimSettings simulation;
  std::uint64_t seed;
};

PointEstimate evaluate_point(const PointSpec& p);

struct ValidationRow {
  std::string id;
  std::string check;
  std::string params;
  std::optional<double> analytic;
  double reference = 0.0;
  std::optional<double> reference_ci_half;
  double tolerance = 0.0;
  std::optional<double> measured_gap;  // analytic - reference
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::string suite;
  std::vector<ValidationRow> rows;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Suites: "default" (10^6 time units x 20 replications) and "quick"
/// (10^5 x 10). Unknown ids throw std::invalid_argument.
ValidationReport validate(const std::string& suite, unsigned jobs);

inline const std::vector<std::string> kFigureIds{"fig3a", "fig3b", "fig3c",
                                                  "fig4a", "fig4b", "fig4c"};

/// Canned sweeps for one figure id.
std::vector<SweepSpec> figure_specs(const std::string& figure,
                                    const SimSettings& simulation,
                                    std::uint64_t seed);

/// Writes <dir>/<fig>.csv and <dir>/<fig>.manifest.json (fig3c also writes
/// <dir>/fig3c_waits.csv). Returns the rows written.
std::vector<SweepRow> reproduce(const std::string& figure,
                                const std::filesystem::path& out_dir,
                                const SimSettings& simulation, std::uint64_t seed,
                                unsigned jobs, Format fmt);

std::string tool_version();

}  // namespace aoi::experiments
