#include <deque>

#include "aoi/errors.hpp"
#include "sim_internal.hpp"

namespace aoi::sim::detail {
namespace {

struct Packet {
  double generated;
  double arrived;     // at the current node
  double head_clock;  // up-time clock when it reached the server
  double service;     // accumulated up-time spent in service
};

}  // namespace

// Event-by-event simulation of the competing exponential clocks. Service
// clocks only run while the network is up; resampling them on repair is
// equivalent to resuming by memorylessness.
ReplicationStats simulate_markov(const SimConfig& config, const MarkovParams& p,
                                 RandomStream& rng) {
  const std::size_t n = p.service_rates.size();
  const Window window{config.warmup_fraction * config.horizon, config.horizon};

  std::vector<std::deque<Packet>> queues(n);
  std::vector<AgeTracker> ages(n, AgeTracker(window));
  std::vector<LevelIntegrator> waiting(n, LevelIntegrator(window, 1));
  std::vector<MeanAccumulator> waits(n);
  std::vector<std::size_t> departures(n, 0);
  LevelIntegrator system(window, config.hist_bins);
  LevelIntegrator node2(window, config.hist_bins);
  MeanAccumulator sojourn, service;

  double t = 0.0;
  double up_clock = 0.0;
  bool up = true;

  auto start_service = [&](std::size_t i) {
    Packet& head = queues[i].front();
    head.head_clock = up_clock;
    waiting[i].down(t);
    if (window.contains(t)) waits[i].add(t - head.arrived);
  };

  auto enter = [&](std::size_t i, Packet pkt) {
    pkt.arrived = t;
    queues[i].push_back(pkt);
    waiting[i].up(t);
    if (i == 1) node2.up(t);
    if (queues[i].size() == 1) start_service(i);
  };

  auto complete = [&](std::size_t i) {
    Packet pkt = queues[i].front();
    queues[i].pop_front();
    pkt.service += up_clock - pkt.head_clock;
    ages[i].deliver(t, pkt.generated);
    if (window.contains(t)) ++departures[i];
    if (i == 1) node2.down(t);
    if (i + 1 < n) {
      enter(i + 1, pkt);
    } else {
      system.down(t);
      if (window.contains(t)) {
        sojourn.add(t - pkt.generated);
        service.add(pkt.service);
      }
    }
    if (!queues[i].empty()) start_service(i);
  };

  while (true) {
    double rate = p.lambda;
    if (up) {
      rate += p.alpha;
      for (std::size_t i = 0; i < n; ++i)
        if (!queues[i].empty()) rate += p.service_rates[i];
    } else {
      rate += p.gamma;
    }
    const double next = t + rng.exponential(rate);
    if (next > config.horizon) break;
    if (up) up_clock += next - t;
    t = next;

    double u = rng.uniform() * rate;
    if (u < p.lambda) {
      system.up(t);
      enter(0, Packet{t, t, 0.0, 0.0});
      continue;
    }
    u -= p.lambda;
    if (!up) {
      up = true;
      continue;
    }
    if (u < p.alpha) {
      up = false;
      continue;
    }
    u -= p.alpha;
    std::size_t chosen = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (queues[i].empty()) continue;
      chosen = i;
      if (u < p.service_rates[i]) break;
      u -= p.service_rates[i];
    }
    complete(chosen);
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
