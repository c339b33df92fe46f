#pragma once

#include <complex>

#include "aoi/transform.hpp"

namespace aoi::mm1 {

/// Two exponential nodes in tandem with infinite buffers and a single
/// network-wide operational state: failures at rate alpha, repairs at
/// rate gamma.
struct Params {
  double lambda;
  double mu1;
  double mu2;
  double alpha;
  double gamma;

  void validate() const;  // throws std::invalid_argument
  /// gamma/(alpha+gamma) - lambda (1/mu1 + 1/mu2); positive iff stable.
  double stability_slack() const;
  bool is_stable() const { return stability_slack() > 0.0; }
};

struct Kernels {
  Complex d, a, b, c;
};

/// Coefficient polynomials of the functional equation for Pi_0(z1, z2),
/// taken as printed. A and C are the same polynomial.
Kernels kernels(const Params& p, Complex z1, Complex z2);

/// z1 = mu1 z2^2 / (mu1 + mu2 (1 - z2)). Throws DomainError at its pole.
Complex f_curve(const Params& p, Complex z2);

/// Pi_0(0, 0) = gamma/(alpha+gamma) - lambda (1/mu1 + 1/mu2).
/// Throws StabilityError carrying the slack when not positive.
double boundary_prob(const Params& p);

/// Node-2 marginal P(z2) = Pi_0(f(z2), z2). The common factor
/// alpha / (lambda (1 - f) + gamma) is divided out before evaluation, so
/// alpha = 0 is evaluated directly rather than as 0/0.
TransformFn marginal_pgf_node2(const Params& p);

/// W*(s) = P(1 - s/lambda).
TransformFn sojourn_lst(const Params& p);

/// Delta*(s) = lambda [W*(s) - W*(s) h*(s) + W*(s+lambda) s h*(s)/(s+lambda)] / s
/// with h*(s) = ((alpha+gamma)/gamma) mu1/(s+mu1) mu2/(s+mu2).
TransformFn age_lst(const Params& p);

/// -d Delta*/ds at 0+. Throws DomainError when the extracted value is not
/// positive and finite.
double aaoi(const Params& p, const CalculusOptions& opts = {});

}  // namespace aoi::mm1
