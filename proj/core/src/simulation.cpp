#include "aoi/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "aoi/errors.hpp"
#include "aoi/statistics.hpp"
#include "sim_internal.hpp"

namespace aoi::sim {

void MarkovParams::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(lambda) || !positive(gamma) || !(alpha >= 0.0) ||
      service_rates.empty() ||
      !std::all_of(service_rates.begin(), service_rates.end(), positive)) {
    throw std::invalid_argument(
        "markov tandem: lambda, gamma and every service rate must be positive, "
        "alpha >= 0");
  }
}

bool MarkovParams::is_stable() const {
  const double up_fraction = gamma / (alpha + gamma);
  return std::all_of(service_rates.begin(), service_rates.end(),
                     [&](double mu) { return lambda / mu < up_fraction; });
}

void SimConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw std::invalid_argument("warmup_fraction must lie in [0, 1)");
  }
  if (hist_bins < 2) throw std::invalid_argument("hist_bins must be >= 2");
  const bool markov = model == Model::MarkovTandemGlobalFailure;
  if (markov != std::holds_alternative<MarkovParams>(params)) {
    throw std::invalid_argument("model and parameter kinds do not match");
  }
  std::size_t nodes = 0;
  if (markov) {
    const auto& p = std::get<MarkovParams>(params);
    p.validate();
    nodes = p.service_rates.size();
  } else {
    const auto& p = std::get<mg1::Params>(params);
    p.validate();
    nodes = p.stages.size();
  }
  if (n_nodes != 0 && n_nodes != nodes) {
    throw std::invalid_argument("n_nodes does not match the parameter set");
  }
}

ReplicationStats run_replication(const SimConfig& config, int index) {
  config.validate();
  RandomStream rng(config.base_seed + static_cast<std::uint64_t>(index));
  if (config.model == Model::MarkovTandemGlobalFailure) {
    return detail::simulate_markov(config, std::get<MarkovParams>(config.params), rng);
  }
  return detail::simulate_mg1(config, std::get<mg1::Params>(config.params), rng);
}

SimResult aggregate(std::span<const ReplicationStats> reps) {
  if (reps.empty()) throw std::invalid_argument("no replications to aggregate");
  SimResult r;
  auto scalar = [&](auto member, double& mean, double& half) {
    std::vector<double> xs;
    for (const auto& rep : reps) xs.push_back(rep.*member);
    const auto iv = stats::mean_ci95(xs);
    mean = iv.mean;
    half = iv.half_width;
  };
  auto vector = [&](auto member, std::vector<double>& mean,
                    std::vector<double>& half) {
    std::vector<std::vector<double>> rows;
    for (const auto& rep : reps) rows.push_back(rep.*member);
    stats::mean_ci95_columns(rows, mean, half);
  };
  double ignored = 0.0;
  scalar(&ReplicationStats::aaoi, r.aaoi_mean, r.aaoi_ci_half);
  scalar(&ReplicationStats::paoi, r.paoi_mean, r.paoi_ci_half);
  scalar(&ReplicationStats::sojourn, r.sojourn_mean, r.sojourn_ci_half);
  scalar(&ReplicationStats::service_total, r.service_mean_total, ignored);
  vector(&ReplicationStats::node_wait, r.per_node_wait, r.per_node_wait_ci);
  vector(&ReplicationStats::node_aaoi, r.per_node_aaoi, r.per_node_aaoi_ci);
  vector(&ReplicationStats::node_queue_mean, r.per_node_queue_mean,
         r.per_node_queue_ci);
  std::vector<double> throughput_ci;
  vector(&ReplicationStats::node_throughput, r.per_node_throughput, throughput_ci);
  vector(&ReplicationStats::node2_hist, r.node2_queue_hist, r.node2_queue_hist_ci);
  vector(&ReplicationStats::system_hist, r.system_size_hist, r.system_size_hist_ci);
  for (const auto& rep : reps) r.delivered_count += rep.delivered;
  r.replicates.assign(reps.begin(), reps.end());
  return r;
}

SimResult run(const SimConfig& config) {
  return run_replicated_parallel(config, 1);
}

SimResult run_replicated_parallel(const SimConfig& config, unsigned workers) {
  config.validate();
  const int count = config.replications;
  std::vector<ReplicationStats> reps(static_cast<std::size_t>(count));
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(count));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        reps[static_cast<std::size_t>(i)] = run_replication(config, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(reps);
}

}  // namespace aoi::sim
