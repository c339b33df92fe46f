#pragma once

#include <span>
#include <vector>

namespace aoi::stats {

struct Interval {
  double mean;
  // 95% Student-t half-width; NaN with fewer than two samples.
  double half_width;
};

double t_quantile(double confidence, int dof);

Interval mean_ci95(std::span<const double> samples);

/// Column-wise mean and half-width of equally sized vectors.
void mean_ci95_columns(std::span<const std::vector<double>> rows,
                       std::vector<double>& mean, std::vector<double>& half);

}  // namespace aoi::stats
