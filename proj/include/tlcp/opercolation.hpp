#pragma once

#include <cstdint>
#include <vector>

namespace tlcp {

// 2D oriented site percolation on {(m, n) : m + n even, n >= 0} with edges
// to (m - 1, n + 1) and (m + 1, n + 1). The origin is the seed of the
// cluster; openness of every other site is a deterministic function of
// (seed, site), so couplings across p share uniforms and the reachable set
// is monotone in p.
class OPGrid {
 public:
  OPGrid(double p, int n_max, std::uint64_t seed);

  double p() const { return p_; }
  int n_max() const { return n_max_; }
  std::uint64_t seed() const { return seed_; }
  // First row with no reachable site, or -1 if the cluster reaches n_max.
  int died_at() const { return died_at_; }
  bool alive_at(int row) const;

  // Reachable sites of a row, ascending m.
  const std::vector<std::int32_t>& row(int n) const { return reach_[n]; }
  // Leftmost/rightmost reachable site of a row (row must be alive).
  int l(int n) const;
  int r(int n) const;
  // Fraction of correct-parity sites in [l_n, r_n] that are reachable.
  double density_between_edges(int n) const;

 private:
  double p_;
  int n_max_;
  std::uint64_t seed_;
  int died_at_ = -1;
  std::vector<std::vector<std::int32_t>> reach_;
};

OPGrid percolate(double p, int n_max, std::uint64_t seed);

// Comparison bridge: true when the block-event probability lower bound
// clears the user-supplied oriented-percolation threshold 1 - eps1. The
// quantitative eps1 -> supercritical mapping is not derived here; eps1 is a
// parameter, and OP survival estimates at p = 1 - eps1 inform its choice.
bool dominate_check(double block_p_lower, double eps1);

}  // namespace tlcp
