#include "aoi/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {
namespace {

constexpr double kPoleGuard = 1e-300;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

Complex rational_term(double rate, Complex s) {
  const Complex den = s + rate;
  if (std::abs(den) <= kPoleGuard * rate) {
    throw DomainError("LST evaluated at its pole s = -" + std::to_string(rate));
  }
  return rate / den;
}

}  // namespace

Distribution::Distribution(Exponential law) : law_(law) {
  require(positive_finite(law.rate), "exponential rate must be positive");
}

Distribution::Distribution(Erlang law) : law_(law) {
  require(law.k >= 1, "erlang k must be at least 1");
  require(positive_finite(law.rate), "erlang rate must be positive");
}

Distribution::Distribution(Hyper2 law) : law_(law) {
  require(law.p1 > 0.0 && law.p1 < 1.0, "hyper2 p1 must lie in (0, 1)");
  require(positive_finite(law.rate1) && positive_finite(law.rate2),
          "hyper2 rates must be positive");
}

Distribution::Distribution(Deterministic law) : law_(law) {
  require(positive_finite(law.value), "deterministic value must be positive");
}

Distribution Distribution::erlang_with_mean(int k, double mean) {
  require(positive_finite(mean), "mean must be positive");
  return Erlang{k, k / mean};
}

Complex Distribution::lst(Complex s) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return rational_term(d.rate, s); },
          [&](const Erlang& d) {
            return std::pow(rational_term(d.rate, s), d.k);
          },
          [&](const Hyper2& d) {
            return d.p1 * rational_term(d.rate1, s) +
                   (1.0 - d.p1) * rational_term(d.rate2, s);
          },
          [&](const Deterministic& d) { return std::exp(-s * d.value); },
      },
      law_);
}

double Distribution::mean() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return 1.0 / d.rate; },
          [](const Erlang& d) { return d.k / d.rate; },
          [](const Hyper2& d) { return d.p1 / d.rate1 + (1.0 - d.p1) / d.rate2; },
          [](const Deterministic& d) { return d.value; },
      },
      law_);
}

double Distribution::variance() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return 1.0 / (d.rate * d.rate); },
          [](const Erlang& d) { return d.k / (d.rate * d.rate); },
          [](const Hyper2& d) {
            const double m = d.p1 / d.rate1 + (1.0 - d.p1) / d.rate2;
            const double second = 2.0 * d.p1 / (d.rate1 * d.rate1) +
                                  2.0 * (1.0 - d.p1) / (d.rate2 * d.rate2);
            return second - m * m;
          },
          [](const Deterministic&) { return 0.0; },
      },
      law_);
}

double Distribution::sample(RandomStream& rng) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return rng.exponential(d.rate); },
          [&](const Erlang& d) {
            double x = 0.0;
            for (int i = 0; i < d.k; ++i) x += rng.exponential(d.rate);
            return x;
          },
          [&](const Hyper2& d) {
            return rng.bernoulli(d.p1) ? rng.exponential(d.rate1)
                                       : rng.exponential(d.rate2);
          },
          [](const Deterministic& d) { return d.value; },
      },
      law_);
}

DistKind Distribution::kind() const {
  return static_cast<DistKind>(law_.index());
}

std::string_view Distribution::kind_name() const {
  switch (kind()) {
    case DistKind::Exponential: return "exp";
    case DistKind::Erlang: return "erlang";
    case DistKind::Hyper2: return "hyper2";
    case DistKind::Deterministic: return "det";
  }
  return "unknown";
}

bool operator==(const Exponential& a, const Exponential& b) {
  return a.rate == b.rate;
}
bool operator==(const Erlang& a, const Erlang& b) {
  return a.k == b.k && a.rate == b.rate;
}
bool operator==(const Hyper2& a, const Hyper2& b) {
  return a.p1 == b.p1 && a.rate1 == b.rate1 && a.rate2 == b.rate2;
}
bool operator==(const Deterministic& a, const Deterministic& b) {
  return a.value == b.value;
}
bool operator==(const Distribution& a, const Distribution& b) {
  return a.law_ == b.law_;
}

}  // namespace aoi
