#pragma once

#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "aoi/mm1_tandem.hpp"

namespace aoi::ctmc {

/// Finite generator for the two-node tandem with a global up/down state,
/// both queues capped at `cap`. Arrivals at n1 = cap are lost and node-1
/// completions block while n2 = cap.
class TruncatedChain {
 public:
  TruncatedChain(const mm1::Params& params, int cap);

  const mm1::Params& params() const { return params_; }
  int cap() const { return cap_; }
  Eigen::Index state_count() const { return generator_.rows(); }
  /// Row = source state. Diagonal holds minus the total outflow.
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& generator() const {
    return generator_;
  }
  Eigen::Index index(int i, int n1, int n2) const {
    return (static_cast<Eigen::Index>(i) * (cap_ + 1) + n1) * (cap_ + 1) + n2;
  }

 private:
  mm1::Params params_;
  int cap_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> generator_;
};

TruncatedChain build(const mm1::Params& params, int cap);

class StationaryDistribution {
 public:
  StationaryDistribution(int cap, std::vector<double> probs, double residual);

  int cap() const { return cap_; }
  double q(int i, int n1, int n2) const;
  const std::vector<double>& probabilities() const { return probs_; }
  /// max |(pi Q)_j| of the solved system.
  double residual() const { return residual_; }
  /// Probability of the states with n1 = cap or n2 = cap.
  double boundary_mass() const;
  /// Total probability of the repair states (i = 1).
  double repair_mass() const;
  /// Distribution of n2 summed over i and n1.
  std::vector<double> node2_marginal() const;
  /// Mean total number of packets in the network.
  double mean_total() const;

 private:
  int cap_;
  std::vector<double> probs_;
  double residual_;
};

/// Solves pi Q = 0 with one balance equation replaced by normalisation
/// (sparse LU). Throws SolverError when the residual exceeds 1e-10.
StationaryDistribution stationary(const TruncatedChain& chain);

/// sum_{n,k} q_i(n, k) z1^n z2^k over the truncated support.
std::complex<double> pgf_eval(const StationaryDistribution& dist, int i,
                              std::complex<double> z1, std::complex<double> z2);

struct CapChoice {
  int cap;
  StationaryDistribution distribution;
};

inline constexpr int kMaxCap = 512;

/// Smallest cap in the schedule 8, 16, ..., 512 whose boundary mass falls
/// below `tol`. Throws OracleUnavailable past the hard limit.
CapChoice choose_cap(const mm1::Params& params, double tol = 1e-9);

}  // namespace aoi::ctmc
