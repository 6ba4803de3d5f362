#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tlcp/blocks.hpp"
#include "tlcp/dual.hpp"
#include "tlcp/events.hpp"
#include "tlcp/stats.hpp"

namespace tlcp {

// Survival-probability scan over mu on thinning-coupled logs: every
// replicate generates one log at max(mu_grid) and thins it to each grid
// value, so the per-seed survival indicators are nondecreasing in mu by
// pathwise inclusion, and the curve is monotone by construction.
struct ScanParams {
  int dim = 1;
  int window_radius = 50;
  int cube_n = 1;  // fleas initially on [-cube_n, cube_n]^d
  double lambda = 3.0;
  double delta = 1.0;
  std::vector<double> mu_grid;
  double horizon = 50;
  double burn_in = 10;
  long reps = 400;
  std::uint64_t seed = 1;
  int threads = 1;
  double level = 0.95;
};

struct ScanResult {
  std::vector<double> mu_grid;
  std::vector<EstimateWithCI> survival;
  bool monotone_per_seed = true;  // exact pathwise check
  // linear interpolation of the first upward crossing of 1/2
  std::optional<double> mu_star;
};

ScanResult survival_scan(const ScanParams& p);

// Dual block events: same containment events as the forward block module,
// evaluated on the truncated flea dual anchored at time 0 and run backward
// through T + 1 time units of the log, with the animal environment burned
// in from the bottom of the same log.
struct DualBlockEstimate {
  EstimateWithCI event_a, event_b;
};

DualBlockEstimate dual_block_estimate(const BlockSpec& spec, long reps,
                                      std::uint64_t seed, int threads = 1,
                                      double level = 0.95);

// Complete-convergence factorization experiment. For each t in the grid:
//   lhs(t)  = P(B_t ∩ D != ∅), fleas started on B;
//   rhs(t)  = P(B_{t/2} != ∅ | start B) * P(B_{t/2} ∩ D != ∅ | fleas
//             started on every window site);
//   nonintersection(t) = P(B_{t/2} != ∅, B^t_{t/2} != ∅, disjoint), with the
//             forward process and the dual anchored at t sharing one log.
// The window radius defaults to ceil(diam(B ∪ D)/2 + pad_speed * t) per
// grid point (speed-of-light padding); a user-supplied radius below that
// bound is refused.
struct ConvergenceParams {
  int dim = 1;
  Rates rates{3, 3, 1};
  std::vector<Coords> set_b, set_d;
  std::vector<double> t_grid;
  double burn_in = 10;
  double pad_speed = 4.0;
  std::optional<int> window_radius;  // per-point automatic when unset
  long reps = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  double level = 0.95;
};

struct ConvergencePoint {
  double t = 0;
  int window_radius = 0;
  EstimateWithCI lhs;
  EstimateWithCI survive_half;   // P(B_{t/2} != ∅ | start B)
  EstimateWithCI hit_from_full;  // P(B_{t/2} ∩ D != ∅ | fleas everywhere)
  double rhs = 0;
  double rhs_se = 0;  // delta-method standard error of the product
  double residual = 0;
  double residual_half_width = 0;  // z * pooled se of lhs - rhs
  EstimateWithCI nonintersection;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
};

ConvergenceReport convergence_test(const ConvergenceParams& p);

}  // namespace tlcp
