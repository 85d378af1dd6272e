#pragma once

#include <span>
#include <vector>

namespace ccce::stats {

double mean(std::span<const double> xs);
// Standard error of the mean (sample standard deviation / sqrt(n)). NaN for
// fewer than two samples; mean() is NaN when empty.
double sem(std::span<const double> xs);
// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> xs, double p);
double median(std::vector<double> xs);
// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace ccce::stats
