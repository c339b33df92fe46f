#include "aoi/statistics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace aoi::stats {

double t_quantile(double confidence, int dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence);
}

Interval mean_ci95(std::span<const double> samples) {
  const auto n = samples.size();
  if (n == 0) throw std::invalid_argument("mean of empty sample");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (n < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const int dof = static_cast<int>(n - 1);
  return {mean, t_quantile(0.95, dof) * sd / std::sqrt(static_cast<double>(n))};
}

void mean_ci95_columns(std::span<const std::vector<double>> rows,
                       std::vector<double>& mean, std::vector<double>& half) {
  mean.clear();
  half.clear();
  if (rows.empty()) return;
  const std::size_t width = rows.front().size();
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r].at(j);
    const Interval iv = mean_ci95(column);
    mean.push_back(iv.mean);
    half.push_back(iv.half_width);
  }
}

}  // namespace aoi::stats
