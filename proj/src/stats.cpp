#include "tlcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlcp::stats {

double normal_quantile(double p) {
  if (!(p > 0 && p < 1))
    throw std::invalid_argument("normal_quantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

EstimateWithCI wilson(long k, long n, double level) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("wilson: bad k/n");
  const double z = normal_quantile(0.5 + level / 2);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {p, std::max(0.0, center - half), std::min(1.0, center + half), n,
          level};
}

double proportion_se(double p, long n) {
  return std::sqrt(std::max(0.0, p * (1 - p)) / static_cast<double>(n));
}

double ks_statistic(std::span<const double> f) {
  const std::size_t n = f.size();
  if (n == 0) throw std::invalid_argument("ks_statistic: empty sample");
  double d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double hi = static_cast<double>(i + 1) / n - f[i];
    double lo = f[i] - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double kolmogorov_cdf(double x) {
  if (x <= 0) return 0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    if (term < 1e-16) break;
    sum += (k % 2 ? term : -term);
  }
  return std::max(0.0, 1 - 2 * sum);
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("tv_distance: size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / 2;
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(sample.begin(), sample.end());
  double rank = q * (sample.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(rank));
  if (i + 1 >= sample.size()) return sample.back();
  double frac = rank - static_cast<double>(i);
  return sample[i] * (1 - frac) + sample[i + 1] * frac;
}

}  // namespace tlcp::stats
