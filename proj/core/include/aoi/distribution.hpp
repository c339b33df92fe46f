#pragma once

#include <complex>
#include <string_view>
#include <variant>

#include "aoi/random.hpp"

namespace aoi {

using Complex = std::complex<double>;

struct Exponential {
  double rate;
};

// Sum of k independent exponential phases, each with rate `rate`.
struct Erlang {
  int k;
  double rate;
};

// Two-branch hyperexponential: branch 1 with probability p1.
struct Hyper2 {
  double p1;
  double rate1;
  double rate2;
};

struct Deterministic {
  double value;
};

enum class DistKind { Exponential, Erlang, Hyper2, Deterministic };

/// A service or repair time law. Immutable once constructed; the
/// constructor rejects parameters outside the law's support.
class Distribution {
 public:
  using Law = std::variant<Exponential, Erlang, Hyper2, Deterministic>;

  Distribution(Exponential law);
  Distribution(Erlang law);
  Distribution(Hyper2 law);
  Distribution(Deterministic law);

  static Distribution exponential(double rate) { return Exponential{rate}; }
  static Distribution erlang(int k, double rate) { return Erlang{k, rate}; }
  static Distribution hyper2(double p1, double rate1, double rate2) {
    return Hyper2{p1, rate1, rate2};
  }
  static Distribution deterministic(double value) {
    return Deterministic{value};
  }

  /// Erlang-k with the given mean (per-phase rate k / mean).
  static Distribution erlang_with_mean(int k, double mean);

  /// E[exp(-sX)]. Throws DomainError at a pole of the rational kinds.
  Complex lst(Complex s) const;
  double mean() const;
  double variance() const;
  double scv() const { return variance() / (mean() * mean()); }
  double sample(RandomStream& rng) const;

  DistKind kind() const;
  /// Short tag used in CSV and JSON: exp, erlang, hyper2, det.
  std::string_view kind_name() const;
  const Law& law() const { return law_; }

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  Law law_;
};

bool operator==(const Exponential& a, const Exponential& b);
bool operator==(const Erlang& a, const Erlang& b);
bool operator==(const Hyper2& a, const Hyper2& b);
bool operator==(const Deterministic& a, const Deterministic& b);

}  // namespace aoi
