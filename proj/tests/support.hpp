#pragma once

// Shared helpers for the test suites: an exhaustive point-packing oracle
// independent of the greedy implementation, and random-configuration
// generators.

#include <algorithm>
#include <random>
#include <vector>

#include "tlcp/lattice.hpp"

namespace tlcp_test {

// Exhaustive maximum of unit-gap point packing via dynamic programming over
// the candidate grid {interval start + whole numbers}. Any feasible point
// set can be shifted left onto this grid point by point, so the grid
// maximum is the true maximum.
inline int exhaustive_max_points(
    const std::vector<std::pair<double, double>>& iv) {
  std::vector<double> cand;
  double tmax = 0;
  for (auto [a, b] : iv) tmax = std::max(tmax, b);
  for (auto [a, b] : iv) {
    (void)b;
    for (double k = 0; a + k <= tmax + 1e-12; k += 1) cand.push_back(a + k);
  }
  auto occupied = [&](double t) {
    for (auto [a, b] : iv)
      if (t >= a - 1e-12 && t <= b + 1e-12) return true;
    return false;
  };
  cand.erase(std::remove_if(cand.begin(), cand.end(),
                            [&](double t) { return !occupied(t); }),
             cand.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const int n = static_cast<int>(cand.size());
  std::vector<int> best(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) {
    int j = static_cast<int>(
        std::lower_bound(cand.begin(), cand.end(), cand[i] + 1 - 1e-12) -
        cand.begin());
    best[i] = std::max(best[i + 1], 1 + best[j]);
  }
  return best.empty() ? 0 : best[0];
}

inline tlcp::Configuration random_config(const tlcp::Window& w,
                                         std::mt19937_64& gen) {
  tlcp::Configuration c(w);
  std::uniform_int_distribution<int> st(0, 3);
  for (tlcp::SiteIndex i = 0; i < w.n_sites(); ++i)
    c.set_state(i, static_cast<tlcp::SiteState>(st(gen)));
  return c;
}

// random configuration sitewise below c
inline tlcp::Configuration random_below(const tlcp::Configuration& c,
                                        std::mt19937_64& gen) {
  tlcp::Configuration out = c;
  std::uniform_int_distribution<int> coin(0, 1);
  for (tlcp::SiteIndex i = 0; i < c.n_sites(); ++i) {
    bool a = has_animal(c.state(i)) && coin(gen);
    bool f = has_fleas(c.state(i)) && coin(gen);
    out.set_state(i,
                  static_cast<tlcp::SiteState>((a ? 1 : 0) + (f ? 2 : 0)));
  }
  return out;
}

inline tlcp::SiteSet random_subset(const tlcp::Window& w,
                                   std::mt19937_64& gen, double p = 0.3) {
  tlcp::SiteSet out;
  std::uniform_real_distribution<double> u(0, 1);
  for (tlcp::SiteIndex i = 0; i < w.n_sites(); ++i)
    if (u(gen) < p) out.push_back(i);
  return out;
}

}  // namespace tlcp_test
