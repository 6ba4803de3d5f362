#include "tlcp/opercolation.hpp"

#include <stdexcept>

#include "tlcp/rng.hpp"

namespace tlcp {

namespace {

std::uint64_t site_code(int m, int n) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
         static_cast<std::uint32_t>(m + (1 << 30));
}

}  // namespace

OPGrid::OPGrid(double p, int n_max, std::uint64_t seed)
    : p_(p), n_max_(n_max), seed_(seed) {
  if (p < 0 || p > 1) throw std::invalid_argument("percolate: p outside [0,1]");
  if (n_max < 0) throw std::invalid_argument("percolate: negative rows");
  reach_.resize(n_max + 1);
  reach_[0] = {0};
  for (int n = 1; n <= n_max; ++n) {
    const auto& prev = reach_[n - 1];
    auto& cur = reach_[n];
    // candidates are prev values +-1, visited in nondecreasing order, so one
    // cursor dedupes the shared m+1 == m'-1 case
    std::int32_t last_considered = INT32_MIN;
    for (std::int32_t m : prev) {
      for (std::int32_t cand : {m - 1, m + 1}) {
        if (cand <= last_considered) continue;
        last_considered = cand;
        if (rng::uniform(seed_ ^ rng::kSaltPercolation, site_code(cand, n),
                         0) < p_)
          cur.push_back(cand);
      }
    }
    if (cur.empty()) {
      died_at_ = n;
      break;
    }
  }
}

bool OPGrid::alive_at(int row) const {
  if (row < 0 || row > n_max_) throw std::invalid_argument("bad row");
  return !reach_[row].empty();
}

int OPGrid::l(int n) const {
  if (!alive_at(n)) throw std::invalid_argument("l: dead row");
  return reach_[n].front();
}

int OPGrid::r(int n) const {
  if (!alive_at(n)) throw std::invalid_argument("r: dead row");
  return reach_[n].back();
}

double OPGrid::density_between_edges(int n) const {
  if (!alive_at(n)) throw std::invalid_argument("density: dead row");
  const auto& row = reach_[n];
  // correct-parity lattice sites in [l, r]: step 2
  int span_sites = (row.back() - row.front()) / 2 + 1;
  return static_cast<double>(row.size()) / span_sites;
}

OPGrid percolate(double p, int n_max, std::uint64_t seed) {
  return OPGrid(p, n_max, seed);
}

bool dominate_check(double block_p_lower, double eps1) {
  if (block_p_lower < 0 || block_p_lower > 1 || eps1 < 0 || eps1 > 1)
    throw std::invalid_argument("dominate_check: estimates outside [0,1]");
  return block_p_lower >= 1 - eps1;
}

}  // namespace tlcp
