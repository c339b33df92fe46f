#include <doctest.h>

#include <cmath>
#include <random>

#include "aoi/errors.hpp"
#include "aoi/mg1_tandem.hpp"

using aoi::Complex;
using aoi::Distribution;
using aoi::mg1::Params;

namespace {

const Distribution kExp1 = Distribution::exponential(1.0);
const Distribution kErl2 = Distribution::erlang(2, 2.0);

double second_moment(const Distribution& d) { return d.variance() + d.mean() * d.mean(); }

// Pollaczek-Khinchine mean sojourn of one stage.
double pk_sojourn(double lambda, const Distribution& s) {
  const double rho = lambda * s.mean();
  return s.mean() + lambda * second_moment(s) / (2.0 * (1.0 - rho));
}

// Exact M/G/1 FCFS average age: E[T] + (1 - rho) / (lambda S*(lambda)).
double mg1_fcfs_aaoi(double lambda, const Distribution& s) {
  const double rho = lambda * s.mean();
  return pk_sojourn(lambda, s) + (1.0 - rho) / (lambda * s.lst(lambda).real());
}

}  // namespace

TEST_CASE("phi kernel") {
  const Params p{0.2, {kExp1}, 0.5, kExp1};
  CHECK(std::abs(aoi::mg1::phi(p, 0.0, 1.0)) < 1e-15);
  // 0.1 + 0.5 - 0.5 / 1.1
  CHECK(aoi::mg1::phi(p, 0.0, 0.5).real() == doctest::Approx(0.1 + 0.5 - 0.5 / 1.1));
  const Params q{0.2, {kExp1}, 0.0, kExp1};
  for (Complex s : {Complex(0.0), Complex(0.7, 0.2)}) {
    for (Complex z : {Complex(0.1), Complex(0.6, -0.3)}) {
      CHECK(std::abs(aoi::mg1::phi(q, s, z) - (s + 0.2 - 0.2 * z)) < 1e-15);
    }
  }
}

TEST_CASE("h* is the product of the stage transforms") {
  const Params two{0.1, {kExp1, kExp1}, 0.0, kExp1};
  CHECK(aoi::mg1::h_star(two, 0.0).real() == 1.0);
  CHECK(aoi::mg1::h_star(two, 1.0).real() == doctest::Approx(0.25));
  const Params four{0.1, {kErl2, kErl2, kErl2, kErl2}, 0.0, kExp1};
  CHECK(aoi::mg1::h_star(four, 1.0).real() == doctest::Approx(std::pow(4.0 / 9.0, 4)));
}

TEST_CASE("p0 and stability") {
  const Params p{0.2, {kExp1, kExp1}, 0.5, kExp1};
  CHECK(p.p0() == doctest::Approx(0.4));
  CHECK(aoi::mg1::system_pgf(p)(0.0).real() == doctest::Approx(0.4).epsilon(1e-12));
  const Params unstable{0.3, {kExp1, kExp1}, 0.9, kExp1};
  CHECK_FALSE(unstable.is_stable());
  try {
    aoi::mg1::system_pgf(unstable);
    FAIL("expected StabilityError");
  } catch (const aoi::StabilityError& e) {
    CHECK(e.slack() == doctest::Approx(unstable.p0()));
  }
  CHECK_THROWS_AS(aoi::mg1::aaoi(unstable), aoi::StabilityError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(Params({0.2, {}, 0.0, kExp1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params({-0.2, {kExp1}, 0.0, kExp1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params({0.2, {kExp1}, -1.0, kExp1}).validate(), std::invalid_argument);
}

TEST_CASE("M/M/1 stationary law") {
  const Params p{0.5, {kExp1}, 0.0, kExp1};
  const auto P = aoi::mg1::system_pgf(p);
  CHECK(aoi::limit_at(P, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  const auto c = aoi::pgf_coefficients(P, 30);
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK(std::abs(c[k] - 0.5 * std::pow(0.5, k)) < 1e-8);
  }
}

TEST_CASE("single-stage failure-free means match the textbook M/G/1") {
  for (const auto& s : {kExp1, kErl2, Distribution::deterministic(1.0),
                        Distribution::hyper2(0.5, 2.0, 2.0 / 3.0)}) {
    for (double lambda : {0.2, 0.5, 0.7}) {
      const Params p{lambda, {s}, 0.0, kExp1};
      CAPTURE(s.kind_name());
      CAPTURE(lambda);
      CHECK(aoi::neg_derivative_at_zero(aoi::mg1::sojourn_lst(p)) ==
            doctest::Approx(pk_sojourn(lambda, s)).epsilon(1e-6));
      CHECK(aoi::mg1::aaoi(p) == doctest::Approx(mg1_fcfs_aaoi(lambda, s)).epsilon(1e-6));
    }
  }
  CHECK(aoi::mg1::aaoi({0.5, {kExp1}, 0.0, kExp1}) == doctest::Approx(3.5).epsilon(1e-6));
}

TEST_CASE("sequential tandem without failures is an M/G/1 with summed service") {
  const Params p{0.3, {kExp1, kErl2}, 0.0, kExp1};
  // Sum of Exp(1) and Erlang(2,2): mean 2, variance 1.5.
  const double es = 2.0;
  const double es2 = 1.5 + 4.0;
  const double rho = 0.3 * es;
  const double t = es + 0.3 * es2 / (2.0 * (1.0 - rho));
  CHECK(aoi::neg_derivative_at_zero(aoi::mg1::sojourn_lst(p)) == doctest::Approx(t).epsilon(1e-6));
  const double hl = kExp1.lst(0.3).real() * kErl2.lst(0.3).real();
  CHECK(aoi::mg1::aaoi(p) == doctest::Approx(t + (1.0 - rho) / (0.3 * hl)).epsilon(1e-6));
}

TEST_CASE("mean sojourn with failures uses the completion-time moments") {
  // Completion time C of a requirement S with Poisson(alpha) interruptions
  // and repair R: E[C] = E[S](1 + a E[R]),
  // E[C^2] = E[S^2](1 + a E[R])^2 + a E[S] E[R^2].
  for (double alpha : {0.3, 0.5}) {
    const Params p{0.1, {kExp1, kExp1}, alpha, kExp1};
    const double es = 2.0, es2 = 6.0, er = 1.0, er2 = 2.0;
    const double ec = es * (1.0 + alpha * er);
    const double ec2 = es2 * std::pow(1.0 + alpha * er, 2) + alpha * es * er2;
    const double t = ec + 0.1 * ec2 / (2.0 * (1.0 - 0.1 * ec));
    CHECK(aoi::neg_derivative_at_zero(aoi::mg1::sojourn_lst(p)) == doctest::Approx(t).epsilon(1e-6));
  }
}

TEST_CASE("Little's law on the transforms") {
  const Params p{0.15, {kErl2, kExp1}, 0.4, Distribution::erlang(2, 3.0)};
  const auto P = aoi::mg1::system_pgf(p);
  // P'(1) from below as -d/ds P(1 - s) at 0+.
  const aoi::TransformFn reflected{[P](Complex s) { return P(1.0 - s); }, "P(1-s)",
                                   {{0.0, aoi::Approach::FromAbove}}};
  const double mean_size = aoi::neg_derivative_at_zero(reflected);
  const double sojourn = aoi::neg_derivative_at_zero(aoi::mg1::sojourn_lst(p));
  CHECK(mean_size == doctest::Approx(p.lambda * sojourn).epsilon(1e-5));
}

TEST_CASE("system-size coefficients form a probability law") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const int n = 1 + static_cast<int>(u(rng) * 3.0);
    std::vector<Distribution> stages;
    for (int i = 0; i < n; ++i) {
      stages.push_back(u(rng) < 0.5 ? Distribution::exponential(0.8 + 2.0 * u(rng))
                                    : Distribution::erlang(2, 1.6 + 4.0 * u(rng)));
    }
    const Params p{0.05 + 0.5 * u(rng), stages, 0.9 * u(rng),
                   Distribution::exponential(0.5 + 2.0 * u(rng))};
    if (p.p0() < 0.3) continue;
    ++checked;
    const auto c = aoi::pgf_coefficients(aoi::mg1::system_pgf(p), 200);
    double sum = 0.0;
    for (double x : c) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c[0] == doctest::Approx(p.p0()).epsilon(1e-8));
  }
}

TEST_CASE("transforms are normalised") {
  const Params p{0.12, {kErl2, kErl2}, 0.5, kExp1};
  CHECK(aoi::limit_at(aoi::mg1::sojourn_lst(p), 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(aoi::limit_at(aoi::mg1::age_lst(p), 0.0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("aaoi grows without bound as the source starves") {
  double prev = 0.0;
  for (double lambda : {0.05, 0.02, 0.01, 0.005}) {
    const double a = aoi::mg1::aaoi({lambda, {kExp1, kExp1}, 0.0, kExp1});
    CHECK(a > prev);
    prev = a;
  }
  CHECK(prev > 150.0);
}

TEST_CASE("aaoi is nondecreasing in alpha") {
  for (const auto& s : {kExp1, kErl2}) {
    double prev = 0.0;
    for (double alpha : {0.0, 0.3, 0.6, 0.9}) {
      const double a = aoi::mg1::aaoi({0.2, {s, s}, alpha, kExp1});
      CHECK(a >= prev);
      prev = a;
    }
  }
}
