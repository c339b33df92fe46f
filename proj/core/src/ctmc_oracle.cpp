#include "aoi/ctmc_oracle.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoi/errors.hpp"

namespace aoi::ctmc {

using Triplet = Eigen::Triplet<double>;

TruncatedChain::TruncatedChain(const mm1::Params& params, int cap)
    : params_(params), cap_(cap) {
  params.validate();
  if (cap < 1) throw std::invalid_argument("truncation cap must be >= 1");
  const Eigen::Index n_states = 2 * static_cast<Eigen::Index>(cap + 1) * (cap + 1);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n_states) * 5);

  for (int i = 0; i <= 1; ++i) {
    for (int n1 = 0; n1 <= cap; ++n1) {
      for (int n2 = 0; n2 <= cap; ++n2) {
        const Eigen::Index from = index(i, n1, n2);
        double out = 0.0;
        auto add = [&](Eigen::Index to, double rate) {
          if (rate <= 0.0) return;
          entries.emplace_back(from, to, rate);
          out += rate;
        };
        if (n1 < cap) add(index(i, n1 + 1, n2), params.lambda);
        if (i == 0) {
          if (n1 > 0 && n2 < cap) add(index(0, n1 - 1, n2 + 1), params.mu1);
          if (n2 > 0) add(index(0, n1, n2 - 1), params.mu2);
          add(index(1, n1, n2), params.alpha);
        } else {
          add(index(0, n1, n2), params.gamma);
        }
        entries.emplace_back(from, from, -out);
      }
    }
  }
  generator_.resize(n_states, n_states);
  generator_.setFromTriplets(entries.begin(), entries.end());
  generator_.makeCompressed();
}

TruncatedChain build(const mm1::Params& params, int cap) {
  return TruncatedChain(params, cap);
}

StationaryDistribution::StationaryDistribution(int cap, std::vector<double> probs,
                                               double residual)
    : cap_(cap), probs_(std::move(probs)), residual_(residual) {}

double StationaryDistribution::q(int i, int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 > cap_ || n2 > cap_ || i < 0 || i > 1) return 0.0;
  return probs_[(static_cast<std::size_t>(i) * (cap_ + 1) + n1) * (cap_ + 1) + n2];
}

double StationaryDistribution::boundary_mass() const {
  double mass = 0.0;
  for (int i = 0; i <= 1; ++i) {
    for (int n = 0; n <= cap_; ++n) {
      mass += q(i, cap_, n) + q(i, n, cap_);
    }
    mass -= q(i, cap_, cap_);
  }
  return mass;
}

double StationaryDistribution::repair_mass() const {
  double mass = 0.0;
  for (int n1 = 0; n1 <= cap_; ++n1)
    for (int n2 = 0; n2 <= cap_; ++n2) mass += q(1, n1, n2);
  return mass;
}

std::vector<double> StationaryDistribution::node2_marginal() const {
  std::vector<double> marginal(cap_ + 1, 0.0);
  for (int i = 0; i <= 1; ++i)
    for (int n1 = 0; n1 <= cap_; ++n1)
      for (int n2 = 0; n2 <= cap_; ++n2) marginal[n2] += q(i, n1, n2);
  return marginal;
}

double StationaryDistribution::mean_total() const {
  double mean = 0.0;
  for (int i = 0; i <= 1; ++i)
    for (int n1 = 0; n1 <= cap_; ++n1)
      for (int n2 = 0; n2 <= cap_; ++n2) mean += (n1 + n2) * q(i, n1, n2);
  return mean;
}

StationaryDistribution stationary(const TruncatedChain& chain) {
  const auto& q = chain.generator();
  const Eigen::Index n = q.rows();

  // Solve Q^T pi = 0 with equation 0 replaced by sum(pi) = 1.
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(q.nonZeros() + n));
  for (Eigen::Index row = 0; row < q.outerSize(); ++row) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(q, row);
         it; ++it) {
      if (it.col() != 0) entries.emplace_back(it.col(), row, it.value());
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) entries.emplace_back(0, j, 1.0);
  Eigen::SparseMatrix<double> system(n, n);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorisation failed: " + lu.lastErrorMessage(),
                      INFINITY);
  }
  Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success) {
    throw SolverError("sparse LU solve failed", INFINITY);
  }

  const Eigen::VectorXd flow = q.transpose() * pi;
  const double residual = flow.lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-10)) {
    std::ostringstream os;
    os << "stationary solve ill-conditioned: ||pi Q||_inf = " << residual
       << ", log|det| = " << lu.logAbsDeterminant();
    throw SolverError(os.str(), residual);
  }

  std::vector<double> probs(pi.data(), pi.data() + n);
  for (double& x : probs) x = std::max(x, 0.0);
  return StationaryDistribution(chain.cap(), std::move(probs), residual);
}

std::complex<double> pgf_eval(const StationaryDistribution& dist, int i,
                              std::complex<double> z1, std::complex<double> z2) {
  if (i != 0 && i != 1) throw std::invalid_argument("state index must be 0 or 1");
  // Horner in both variables.
  std::complex<double> outer{0.0, 0.0};
  for (int n1 = dist.cap(); n1 >= 0; --n1) {
    std::complex<double> inner{0.0, 0.0};
    for (int n2 = dist.cap(); n2 >= 0; --n2) inner = inner * z2 + dist.q(i, n1, n2);
    outer = outer * z1 + inner;
  }
  return outer;
}

CapChoice choose_cap(const mm1::Params& params, double tol) {
  if (!params.is_stable()) {
    throw StabilityError("oracle requires stable parameters",
                         params.stability_slack());
  }
  for (int cap = 8; cap <= kMaxCap; cap *= 2) {
    auto dist = stationary(build(params, cap));
    if (dist.boundary_mass() < tol) return {cap, std::move(dist)};
  }
  throw OracleUnavailable("near-instability, oracle unavailable: truncation cap "
                          "would exceed " + std::to_string(kMaxCap));
}

}  // namespace aoi::ctmc
