#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <vector>

#include "aoi/random.hpp"
#include "aoi/simulation.hpp"

namespace aoi::sim::detail {

struct Window {
  double start;
  double end;
  bool contains(double t) const { return t >= start && t <= end; }
};

// Sawtooth age at one observation point, integrated exactly between the
// first and last delivery inside the window.
class AgeTracker {
 public:
  explicit AgeTracker(Window w) : window_(w) {}

  void deliver(double t, double generated) {
    if (t > window_.end) return;
    const double fresh = t - generated;
    if (!started_) {
      if (t >= window_.start) {
        started_ = true;
        first_ = t;
      }
      last_age_ = have_last_ ? std::min(last_age_ + (t - last_t_), fresh) : fresh;
      have_last_ = true;
      last_t_ = t;
      return;
    }
    const double dt = t - last_t_;
    const double peak = last_age_ + dt;
    area_ += last_age_ * dt + 0.5 * dt * dt;
    peak_sum_ += peak;
    ++peaks_;
    last_age_ = std::min(peak, fresh);
    last_t_ = t;
  }

  double span() const { return started_ ? last_t_ - first_ : 0.0; }
  std::size_t peaks() const { return peaks_; }
  double average() const { return area_ / span(); }
  double mean_peak() const { return peak_sum_ / static_cast<double>(peaks_); }

 private:
  Window window_;
  bool started_ = false;
  bool have_last_ = false;
  double first_ = 0.0;
  double last_t_ = 0.0;
  double last_age_ = 0.0;
  double area_ = 0.0;
  double peak_sum_ = 0.0;
  std::size_t peaks_ = 0;
};

// Time-weighted occupancy of a level that moves by +1 / -1. Increments must
// arrive in time order, as must decrements; a decrement may be announced
// before earlier-timed increments are seen and is applied lazily.
class LevelIntegrator {
 public:
  LevelIntegrator(Window w, std::size_t bins) : window_(w), hist_(bins, 0.0) {}

  void up(double t) {
    flush(t);
    advance(t);
    ++level_;
  }
  void down(double t) { pending_.push_back(t); }

  void finish() {
    flush(window_.end);
    advance(window_.end);
  }

  double mean() const { return weighted_ / (window_.end - window_.start); }
  std::vector<double> histogram() const {
    std::vector<double> h(hist_);
    const double total = window_.end - window_.start;
    for (double& x : h) x /= total;
    return h;
  }

 private:
  void flush(double t) {
    while (!pending_.empty() && pending_.front() <= t) {
      advance(pending_.front());
      pending_.pop_front();
      --level_;
    }
  }
  void advance(double t) {
    const double lo = std::max(now_, window_.start);
    const double hi = std::min(t, window_.end);
    if (hi > lo) {
      const double dt = hi - lo;
      weighted_ += dt * static_cast<double>(level_);
      const std::size_t bin = std::min<std::size_t>(level_, hist_.size() - 1);
      hist_[bin] += dt;
    }
    now_ = std::max(now_, t);
  }

  Window window_;
  std::vector<double> hist_;
  std::deque<double> pending_;
  std::size_t level_ = 0;
  double now_ = 0.0;
  double weighted_ = 0.0;
};

struct MeanAccumulator {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double x) {
    sum += x;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

ReplicationStats simulate_markov(const SimConfig& config,
                                 const MarkovParams& params, RandomStream& rng);

ReplicationStats simulate_mg1(const SimConfig& config, const mg1::Params& params,
                              RandomStream& rng);

}  // namespace aoi::sim::detail
