#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "aoi/mg1_tandem.hpp"
#include "aoi/mm1_tandem.hpp"

namespace aoi::sim {

enum class Model {
  // Exponential nodes with infinite buffers; the whole network fails at
  // rate alpha while up and is repaired at rate gamma. All service is
  // frozen during repair.
  MarkovTandemGlobalFailure,
  // A packet holds the whole chain from service start at node 1 until it
  // leaves node N (the semantics behind the product-form h*).
  Mg1SequentialStage,
  // Node i may serve the next packet while node i+1 is busy; a finished
  // packet blocks node i until node i+1 is free.
  Mg1Overlap,
};

/// Exponential tandem of any length with global failures.
struct MarkovParams {
  double lambda;
  std::vector<double> service_rates;
  double alpha;
  double gamma;

  static MarkovParams from(const mm1::Params& p) {
    return {p.lambda, {p.mu1, p.mu2}, p.alpha, p.gamma};
  }
  void validate() const;
  /// Every node's offered load lambda/mu_i below the up fraction
  /// gamma/(alpha+gamma).
  bool is_stable() const;
};

using ModelParams = std::variant<MarkovParams, mg1::Params>;

struct SimConfig {
  Model model = Model::Mg1SequentialStage;
  ModelParams params;
  std::size_t n_nodes = 0;
  double horizon = 1e6;
  double warmup_fraction = 0.1;
  int replications = 20;
  std::uint64_t base_seed = 1;
  std::size_t hist_bins = 64;  // last bin collects everything above

  void validate() const;  // throws std::invalid_argument
};

/// Statistics of one replication over the window [warmup, horizon].
struct ReplicationStats {
  double aaoi = 0.0;
  double paoi = 0.0;
  double sojourn = 0.0;
  double service_total = 0.0;  // mean summed service requirement
  std::vector<double> node_aaoi;
  std::vector<double> node_wait;
  std::vector<double> node_queue_mean;  // time-average number waiting
  std::vector<double> node_throughput;
  std::vector<double> node2_hist;
  std::vector<double> system_hist;
  std::size_t delivered = 0;
};

struct SimResult {
  double aaoi_mean = 0.0;
  double aaoi_ci_half = 0.0;
  double paoi_mean = 0.0;
  double paoi_ci_half = 0.0;
  double sojourn_mean = 0.0;
  double sojourn_ci_half = 0.0;
  double service_mean_total = 0.0;
  std::vector<double> per_node_wait;
  std::vector<double> per_node_wait_ci;
  // Age process observed at the output of node i.
  std::vector<double> per_node_aaoi;
  std::vector<double> per_node_aaoi_ci;
  std::vector<double> per_node_queue_mean;
  std::vector<double> per_node_queue_ci;
  std::vector<double> per_node_throughput;
  std::vector<double> node2_queue_hist;  // empty when N < 2
  std::vector<double> node2_queue_hist_ci;
  std::vector<double> system_size_hist;
  std::vector<double> system_size_hist_ci;
  std::size_t delivered_count = 0;
  std::vector<ReplicationStats> replicates;
};

/// Replication `index` consumes the stream seeded base_seed + index.
ReplicationStats run_replication(const SimConfig& config, int index);

SimResult aggregate(std::span<const ReplicationStats> replicates);

/// Sequential replications.
SimResult run(const SimConfig& config);

/// Same statistics as run(); replications are spread over `workers`
/// threads and aggregated in index order.
SimResult run_replicated_parallel(const SimConfig& config, unsigned workers);

}  // namespace aoi::sim
