#pragma once

#include <span>
#include <vector>

namespace tlcp {

// Monte Carlo estimate of a probability with a two-sided Wilson interval.
struct EstimateWithCI {
  double point = 0;
  double ci_low = 0;
  double ci_high = 0;
  long reps = 0;
  double level = 0.95;

  double half_width() const { return (ci_high - ci_low) / 2; }
  bool overlaps(const EstimateWithCI& o) const {
    return ci_low <= o.ci_high && o.ci_low <= ci_high;
  }
};

namespace stats {

// Standard normal quantile (Acklam's rational approximation, |err| < 1.2e-9).
double normal_quantile(double p);

// Wilson score interval for k successes out of n at the given two-sided
// confidence level.
EstimateWithCI wilson(long k, long n, double level = 0.95);

// Normal-approximation standard error of a proportion estimate.
double proportion_se(double p, long n);

// Kolmogorov-Smirnov statistic sup|F_n - F| for samples against cdf values;
// `cdf_at_sample` holds F(x_i) for the sorted samples.
double ks_statistic(std::span<const double> sorted_cdf_values);

// Kolmogorov distribution: P(sqrt(n) D_n <= x) asymptotically.
double kolmogorov_cdf(double x);

// Total variation distance between two distributions on the same support.
double tv_distance(std::span<const double> a, std::span<const double> b);

// Empirical quantile (nearest-rank) of a sample.
double quantile(std::vector<double> sample, double q);

}  // namespace stats
}  // namespace tlcp
