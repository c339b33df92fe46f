#include "aoi/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aoi/errors.hpp"

namespace aoi {
namespace {

double real_value(const TransformFn& g, double x) {
  const Complex v = g(Complex{x, 0.0});
  if (!std::isfinite(v.real())) {
    std::ostringstream os;
    os << "transform not finite at " << x;
    throw DomainError(os.str());
  }
  return v.real();
}

struct Extrapolation {
  double value;
  double residual;
  bool converged;
};

// Richardson tableau for a sequence A(h_i), h_i = h0 / 2^i, whose error has
// an expansion in all integer powers of h.
template <class Sample>
Extrapolation richardson(Sample&& sample, int max_levels, double rel_tol,
                         double abs_floor) {
  std::vector<std::vector<double>> table;
  Extrapolation best{0.0, INFINITY, false};
  for (int i = 0; i < max_levels; ++i) {
    std::vector<double> row(i + 1);
    row[0] = sample(i);
    for (int j = 1; j <= i; ++j) {
      const double factor = std::ldexp(1.0, j) - 1.0;
      row[j] = row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / factor;
    }
    table.push_back(std::move(row));
    if (i == 0) continue;
    const double cur = table[i][i];
    const double prev = table[i - 1][i - 1];
    const double residual = std::abs(cur - prev);
    if (residual < best.residual) best = {cur, residual, false};
    if (residual <= rel_tol * std::max(std::abs(cur), abs_floor)) {
      return {cur, residual, true};
    }
  }
  return best;
}

}  // namespace

bool TransformFn::is_removable(double x) const {
  return std::any_of(removable.begin(), removable.end(),
                     [x](const RemovablePoint& p) { return p.at == x; });
}

double neg_derivative_at_zero(const TransformFn& g,
                              const CalculusOptions& opts) {
  const double h0 = opts.initial_step;
  auto sample = [&](int i) {
    const double h = std::ldexp(h0, -i);
    return (real_value(g, 3.0 * h) - real_value(g, h)) / (2.0 * h);
  };
  // A derivative that is exactly zero is judged against the size of g.
  const double floor = 1e-6 * std::abs(real_value(g, h0));
  const auto r = richardson(sample, opts.max_levels, opts.derivative_rel_tol,
                            std::max(floor, 1e-12));
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream os;
    os << "unstable derivative at 0 (residual " << r.residual << ")";
    throw UnstableDerivative(os.str(), r.residual);
  }
  return -r.value;
}

double limit_at(const TransformFn& g, double point,
                const CalculusOptions& opts) {
  double direction = 1.0;
  for (const auto& p : g.removable) {
    if (p.at == point && p.side == Approach::FromBelow) direction = -1.0;
  }
  const double h0 = opts.initial_step;
  auto sample = [&](int i) {
    return real_value(g, point + direction * std::ldexp(h0, -i));
  };
  const auto r = richardson(sample, opts.max_levels, opts.limit_tol, 1.0);
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream os;
    os << "limit at " << point << " does not settle (residual " << r.residual
       << ")";
    throw DivergentLimit(os.str());
  }
  return r.value;
}

double complex_step_derivative(const TransformFn& g, double x, double h) {
  return g(Complex{x, h}).imag() / h;
}

std::vector<double> pgf_coefficients(const TransformFn& pgf, std::size_t n_max,
                                     const CalculusOptions& opts) {
  // Round-off in c_k grows like r^-k; for long expansions the radius moves
  // toward 1 so that the amplification stays below 1e6.
  const double r =
      n_max == 0 ? opts.pgf_radius
                 : std::max(opts.pgf_radius,
                            std::min(0.99, std::pow(1e-6, 1.0 / static_cast<double>(n_max))));
  const std::size_t m = std::max<std::size_t>(4 * (n_max + 1), 256);
  std::vector<Complex> samples(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(m);
    samples[j] = pgf(std::polar(r, theta));
  }
  std::vector<double> coeffs(n_max + 1);
  constexpr double kTol = 1e-8;
  for (std::size_t k = 0; k <= n_max; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      const double theta = -2.0 * std::numbers::pi *
                           static_cast<double>((j * k) % m) /
                           static_cast<double>(m);
      acc += samples[j] * std::polar(1.0, theta);
    }
    const double c =
        acc.real() / static_cast<double>(m) / std::pow(r, static_cast<double>(k));
    if (!std::isfinite(c) || c < -kTol || c > 1.0 + kTol) {
      std::ostringstream os;
      os << "inversion failed / unstable PGF: c_" << k << " = " << c;
      throw InversionError(os.str());
    }
    coeffs[k] = std::clamp(c, 0.0, 1.0);
  }
  return coeffs;
}

}  // namespace aoi
