#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace aoi {

using Complex = std::complex<double>;

enum class Approach { FromAbove, FromBelow };

struct RemovablePoint {
  double at;
  // Side from which the point is approached when it must be avoided
  // (LSTs at s = 0 from above, PGFs at z = 1 from below).
  Approach side;
};

/// An LST or PGF as an opaque complex evaluable. Points listed in
/// `removable` are 0/0 forms and are never evaluated directly by the
/// calculus routines.
struct TransformFn {
  std::function<Complex(Complex)> eval;
  std::string domain_note;
  std::vector<RemovablePoint> removable;

  Complex operator()(Complex x) const { return eval(x); }
  bool is_removable(double x) const;
};

struct CalculusOptions {
  double derivative_rel_tol = 1e-6;
  double limit_tol = 1e-8;
  double initial_step = 1e-2;
  int max_levels = 14;
  double pgf_radius = 0.9;
};

/// -g'(0+) by Richardson extrapolation of the difference quotients
/// (g(3h) - g(h)) / 2h on the ladder h = h0, h0/2, ... Never evaluates g(0).
/// Throws UnstableDerivative when the last two diagonal entries of the
/// tableau disagree by more than the relative tolerance.
double neg_derivative_at_zero(const TransformFn& g,
                              const CalculusOptions& opts = {});

/// Limit of g at `point`, approached from the side recorded for a
/// removable point (from above otherwise).
double limit_at(const TransformFn& g, double point,
                const CalculusOptions& opts = {});

/// g'(x) from the complex-step formula Im g(x + ih) / h.
double complex_step_derivative(const TransformFn& g, double x,
                               double h = 1e-20);

/// Probability masses c_0..c_{n_max} of a PGF analytic on the closed unit
/// disk, by trapezoidal Cauchy inversion on a circle of radius
/// max(pgf_radius, min(0.99, 1e-6^(1/n_max))).
std::vector<double> pgf_coefficients(const TransformFn& pgf, std::size_t n_max,
                                     const CalculusOptions& opts = {});

}  // namespace aoi
