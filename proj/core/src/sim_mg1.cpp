#include "aoi/errors.hpp"
#include "sim_internal.hpp"

namespace aoi::sim::detail {
namespace {

// Completion time of one service at a node that fails at rate alpha while
// serving: each failure adds an independent repair, remaining work resumes.
double completion_time(const Distribution& service, double alpha,
                       const Distribution& repair, RandomStream& rng,
                       double& requirement) {
  requirement = service.sample(rng);
  double total = requirement;
  if (alpha > 0.0) {
    double served = 0.0;
    while (true) {
      served += rng.exponential(alpha);
      if (served >= requirement) break;
      total += repair.sample(rng);
    }
  }
  return total;
}

}  // namespace

// Packet-by-packet recursion. Sequential mode: node 1 starts a packet only
// after its predecessor left node N. Overlap mode: blocking after service,
// node i releases a finished packet once node i+1 is empty.
ReplicationStats simulate_mg1(const SimConfig& config, const mg1::Params& p,
                              RandomStream& rng) {
  const std::size_t n = p.stages.size();
  const bool overlap = config.model == Model::Mg1Overlap;
  const Window window{config.warmup_fraction * config.horizon, config.horizon};

  std::vector<AgeTracker> ages(n, AgeTracker(window));
  std::vector<LevelIntegrator> waiting(n, LevelIntegrator(window, 1));
  std::vector<MeanAccumulator> waits(n);
  std::vector<std::size_t> departures(n, 0);
  LevelIntegrator system(window, config.hist_bins);
  LevelIntegrator node2(window, config.hist_bins);
  MeanAccumulator sojourn, service;

  std::vector<double> left(n, 0.0);  // previous packet's departure per node
  double arrival = 0.0;

  while (true) {
    arrival += rng.exponential(p.lambda);
    if (arrival > config.horizon) break;
    system.up(arrival);

    double ready = arrival;  // time the packet is ready to enter node i
    double start = overlap ? std::max(arrival, left[0]) : std::max(arrival, left[n - 1]);
    double requirement_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      waiting[i].up(ready);
      waiting[i].down(start);
      if (window.contains(start)) waits[i].add(start - ready);
      if (i == 1) node2.up(start);

      double requirement = 0.0;
      const double done =
          start + completion_time(p.stages[i], p.alpha, p.repair, rng, requirement);
      requirement_total += requirement;

      double leave = done;
      if (overlap && i + 1 < n) leave = std::max(done, left[i + 1]);
      left[i] = leave;
      ages[i].deliver(leave, arrival);
      if (window.contains(leave)) ++departures[i];
      if (i == 1) node2.down(leave);

      ready = done;
      start = leave;
    }
    const double exit = left[n - 1];
    system.down(exit);
    if (window.contains(exit)) {
      sojourn.add(exit - arrival);
      service.add(requirement_total);
    }
  }

  for (auto& lv : waiting) lv.finish();
  system.finish();
  node2.finish();

  if (ages.back().peaks() == 0) {
    throw SimulationError("insufficient horizon: no deliveries after warm-up");
  }

  const double span = window.end - window.start;
  ReplicationStats out;
  out.aaoi = ages.back().average();
  out.paoi = ages.back().mean_peak();
  out.sojourn = sojourn.mean();
  out.service_total = service.mean();
  out.delivered = ages.back().peaks();
  for (std::size_t i = 0; i < n; ++i) {
    out.node_aaoi.push_back(ages[i].peaks() ? ages[i].average() : 0.0);
    out.node_wait.push_back(waits[i].mean());
    out.node_queue_mean.push_back(waiting[i].mean());
    out.node_throughput.push_back(static_cast<double>(departures[i]) / span);
  }
  if (n >= 2) out.node2_hist = node2.histogram();
  out.system_hist = system.histogram();
  return out;
}

}  // namespace aoi::sim::detail
