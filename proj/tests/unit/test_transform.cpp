#include <doctest.h>

#include <cmath>

#include "aoi/distribution.hpp"
#include "aoi/errors.hpp"
#include "aoi/mg1_tandem.hpp"
#include "aoi/transform.hpp"

using aoi::Approach;
using aoi::Complex;
using aoi::TransformFn;

namespace {

TransformFn fn(std::function<Complex(Complex)> f, std::vector<aoi::RemovablePoint> r = {}) {
  return {std::move(f), "test", std::move(r)};
}

}  // namespace

TEST_CASE("neg_derivative_at_zero on known transforms") {
  CHECK(aoi::neg_derivative_at_zero(fn([](Complex s) { return std::exp(-s); })) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(aoi::neg_derivative_at_zero(fn([](Complex s) { return 1.0 / (1.0 + s); })) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(aoi::neg_derivative_at_zero(fn([](Complex s) { return std::pow(2.0 / (2.0 + s), 7.0); })) ==
        doctest::Approx(3.5).epsilon(1e-8));
}

TEST_CASE("neg_derivative_at_zero never evaluates the removable point") {
  const auto g = fn(
      [](Complex s) {
        if (s == Complex(0.0)) throw aoi::DomainError("evaluated at 0");
        return (1.0 - std::exp(-s)) / s;  // LST of Uniform(0, 1)
      },
      {{0.0, Approach::FromAbove}});
  CHECK(aoi::neg_derivative_at_zero(g) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("M/M/1 sojourn mean from the single-stage M/G/1 transform") {
  const aoi::mg1::Params p{0.5, {aoi::Distribution::exponential(1.0)}, 0.0,
                           aoi::Distribution::exponential(1.0)};
  // 1 / (mu - lambda)
  CHECK(aoi::neg_derivative_at_zero(aoi::mg1::sojourn_lst(p)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("a pole at zero is reported as an unstable derivative") {
  CHECK_THROWS_AS(aoi::neg_derivative_at_zero(fn([](Complex s) { return 1.0 / s; })),
                  aoi::UnstableDerivative);
}

TEST_CASE("a constant has zero derivative") {
  CHECK(aoi::neg_derivative_at_zero(fn([](Complex) { return Complex(-0.2); })) ==
        doctest::Approx(0.0));
}

TEST_CASE("limit_at") {
  const auto ratio = fn([](Complex z) { return (1.0 - z) / (1.0 - z); },
                        {{1.0, Approach::FromBelow}});
  CHECK(aoi::limit_at(ratio, 1.0) == doctest::Approx(1.0));

  const auto sinc = fn([](Complex s) { return std::sin(s) / s; }, {{0.0, Approach::FromAbove}});
  CHECK(aoi::limit_at(sinc, 0.0) == doctest::Approx(1.0).epsilon(1e-10));

  const aoi::mg1::Params p{0.3, {aoi::Distribution::erlang(2, 2.0)}, 0.4,
                           aoi::Distribution::exponential(2.0)};
  CHECK(aoi::limit_at(aoi::mg1::sojourn_lst(p), 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(aoi::limit_at(aoi::mg1::system_pgf(p), 1.0) == doctest::Approx(1.0).epsilon(1e-8));

  const auto divergent = fn([](Complex s) { return 1.0 / s; }, {{0.0, Approach::FromAbove}});
  CHECK_THROWS_AS(aoi::limit_at(divergent, 0.0), aoi::DivergentLimit);
}

TEST_CASE("pgf_coefficients") {
  const auto one = aoi::pgf_coefficients(fn([](Complex) { return Complex(1.0); }), 8);
  REQUIRE(one.size() == 9);
  CHECK(one[0] == doctest::Approx(1.0));
  for (std::size_t k = 1; k < one.size(); ++k) CHECK(std::abs(one[k]) < 1e-12);

  const double rho = 0.5;
  const auto geo =
      aoi::pgf_coefficients(fn([&](Complex z) { return (1.0 - rho) / (1.0 - rho * z); }), 40);
  double sum = 0.0;
  for (std::size_t k = 0; k < geo.size(); ++k) {
    CHECK(geo[k] == doctest::Approx((1.0 - rho) * std::pow(rho, k)).epsilon(1e-9));
    sum += geo[k];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pgf_coefficients rejects a function that is not a PGF") {
  // 2 - z has coefficients 2 and -1.
  CHECK_THROWS_AS(aoi::pgf_coefficients(fn([](Complex z) { return 2.0 - z; }), 4),
                  aoi::InversionError);
}

TEST_CASE("complex step agrees with real finite differences") {
  for (const auto& d : {aoi::Distribution::exponential(1.3), aoi::Distribution::erlang(3, 2.0),
                        aoi::Distribution::hyper2(0.2, 0.5, 4.0),
                        aoi::Distribution::deterministic(0.7)}) {
    const auto g = fn([d](Complex s) { return d.lst(s); });
    for (double x : {0.1, 0.5, 2.0}) {
      const double h = 1e-5;
      const double central = (d.lst(x + h).real() - d.lst(x - h).real()) / (2.0 * h);
      CHECK(aoi::complex_step_derivative(g, x) == doctest::Approx(central).epsilon(1e-6));
    }
  }
}
