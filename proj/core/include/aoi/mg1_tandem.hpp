#pragma once

#include <vector>

#include "aoi/distribution.hpp"
#include "aoi/transform.hpp"

namespace aoi::mg1 {

/// N-stage tandem with an infinite buffer at node 1 and bufferless
/// downstream nodes. A packet holds the whole chain from its service start
/// at node 1 until it leaves node N. Each node fails at rate `alpha` only
/// while serving and is repaired (preemptive resume) with law `repair`,
/// common to all nodes.
struct Params {
  double lambda;
  std::vector<Distribution> stages;
  double alpha;
  Distribution repair;

  void validate() const;  // throws std::invalid_argument
  /// 1 - lambda (1 + alpha E[R]) sum_i E[H_i]; positive iff stable.
  double p0() const;
  bool is_stable() const { return p0() > 0.0; }
  std::size_t n_nodes() const { return stages.size(); }
};

/// phi(s, z) = s + lambda - lambda z + alpha - alpha r*(s + lambda - lambda z).
Complex phi(const Params& p, Complex s, Complex z);

/// Product of the stage LSTs.
Complex h_star(const Params& p, Complex s);

/// P(z) = h*(phi(0,z)) (1 - z) p0 / (h*(phi(0,z)) - z).
TransformFn system_pgf(const Params& p);

/// W*(s) = P(1 - s/lambda).
TransformFn sojourn_lst(const Params& p);

/// Delta*(s) = W*(s) - s p0 h*(s) / (s + lambda h*(s + lambda)).
TransformFn age_lst(const Params& p);

double aaoi(const Params& p, const CalculusOptions& opts = {});

}  // namespace aoi::mg1
