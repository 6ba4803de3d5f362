#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "tlcp/dual.hpp"
#include "tlcp/events.hpp"
#include "tlcp/simulate.hpp"
#include "tlcp/stats.hpp"

namespace tlcp {

// Block-construction geometry: seed cube [-n, n]^d, translation range L,
// horizon T, truncation radius 2n + L.
struct BlockSpec {
  int dim = 1;
  int n = 1;       // seed-cube radius (0 = single site)
  int L = 2;       // translation range
  double T = 4;    // time horizon; events are read on [1, T+1]
  Rates rates;
  double burn_in = 8;    // animal burn-in before time 0
  int window_pad = 3;    // extra window radius beyond the truncation box
  double epsilon = 0.1;  // target failure probability (reporting only)

  int truncation() const { return 2 * n + L; }
  void validate() const;
};

// One forward replicate. Initial condition: animals from burn-in (negative
// times of the same log), fleas filling the seed cube (state 3 if hosted,
// 2 if not). Event A: at time T+1 the truncated flea set contains a full
// translated cube x + [-n, n]^d for some x in [0, L)^d. Event B: the same
// containment at some time in [1, T+1] for x in {L+n} x [0, L)^{d-1}.
// The animal block event and the path diagnostics are evaluated on the
// animals-only process started from the cube (animal active paths from the
// cube are what the fleas would have to follow).
struct BlockReplicate {
  bool flea_event_a = false;
  bool flea_event_b = false;
  bool animal_event_a = false;
  // boundary counts N(2n+L, T) and N_+(2n+L, T) of the truncated run
  int n_count = 0;
  int nplus_count = 0;
  // diagnostics, valid when animal_event_a:
  int jumps = 0;
  double min_birth_window = std::numeric_limits<double>::infinity();
};

BlockReplicate run_block_replicate(const BlockSpec& spec, std::uint64_t seed);
// Same replicate on a prepared log (for thinning-coupled comparisons). The
// log must live on the spec's truncated window and cover
// [-burn_in, T + 1].
BlockReplicate run_block_replicate_on(const BlockSpec& spec,
                                      const EventLog& log);

// The window a block replicate runs on.
Window block_window(const BlockSpec& spec);

struct BlockEstimate {
  EstimateWithCI event_a, event_b;
  EstimateWithCI animal_event_a;
  // boundary-count statistics across replicates
  double n_mean = 0, n_q50 = 0, n_q90 = 0, n_max = 0;
  double nplus_mean = 0, nplus_q50 = 0, nplus_q90 = 0, nplus_max = 0;
  // empirical quantiles over replicates with the animal event achieved
  double jumps_q = 0;        // (1 - epsilon) quantile of total jumps
  double window_q = 0;       // epsilon quantile of the minimum birth window
  double joint_fraction = 0; // fraction with jumps <= jumps_q and window >= window_q
  long diagnosed = 0;
};

BlockEstimate estimate_block_events(const BlockSpec& spec, long reps,
                                    std::uint64_t seed, int threads = 1,
                                    double level = 0.95);

// Maximal number of (boundary site, time) points with same-site times at
// least 1 apart; value plus a witness. Exact via per-site greedy interval
// scheduling; sites are independent in the constraint.
struct BoundaryCount {
  int value = 0;
  std::vector<std::pair<SiteIndex, double>> witness;
};

// Boundary sphere {||x||_inf = L} x [0, T]. The trajectory must come from a
// run truncated at L covering [0, T].
BoundaryCount compute_N(const Trajectory& traj, int L, double T);
// Positive face {L} x {0..L}^{d-1} x [0, T].
BoundaryCount compute_N_plus(const Trajectory& traj, int L, double T);

// Greedy point packing on one site's occupancy intervals (exposed for the
// exhaustive-oracle test).
int max_unit_gap_points(const std::vector<std::pair<double, double>>& intervals,
                        std::vector<double>* chosen = nullptr);

// Statistical test of the orthant correlation inequality
//   P(|_L B_T ∩ [0,L]^d| <= N)  <=  P(|_L B_T| <= 2^d N)^(1/2^d)
// and of its boundary-count companion
//   P(N_+ <= M)^(d 2^d)  <=  P(N <= M d 2^d),
// both from fleas-on-cube starts with burn-in animals. A violation is
// flagged only when the lhs lower confidence bound exceeds the rhs upper
// bound (one-sided at the given level).
struct OrthantTestParams {
  int dim = 1;
  int n = 1;
  int L = 3;
  double T = 2;
  Rates rates{3, 2, 1};
  double burn_in = 8;
  int window_pad = 2;
  int N = 1;
  int M = 1;
  long reps = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  double level = 0.99;
};

struct OrthantTestReport {
  EstimateWithCI lhs;        // P(|B ∩ [0,L]^d| <= N)
  EstimateWithCI rhs_inner;  // P(|B| <= 2^d N)
  double rhs_low = 0, rhs_high = 0, rhs_point = 0;  // inner^(1/2^d)
  bool violation = false;
  EstimateWithCI nplus_leq_m;  // P(N_+ <= M)
  EstimateWithCI n_leq_md2d;   // P(N <= M d 2^d)
  double lhs2_low = 0, lhs2_high = 0, lhs2_point = 0;  // first^(d 2^d)
  bool violation2 = false;
};

OrthantTestReport test_orthant_inequality(const OrthantTestParams& p);

// Jump count and minimum birth window of witnessing animal active paths
// from the initial animal set of `animal_traj` (an animals-only run) to the
// targets. Jumps are distinct birth arrows across the extracted paths; the
// window of a jump is the time from it to the earliest of the next jump on
// its path, an animal death at either arrow endpoint, or the path's end.
struct PathDiagnostics {
  int jumps = 0;
  double min_birth_window = std::numeric_limits<double>::infinity();
  long reachable = 0;
  long unreachable = 0;
};

PathDiagnostics path_diagnostics(
    const EventLog& log, const Trajectory& animal_traj,
    const std::vector<std::pair<SiteIndex, double>>& targets);

}  // namespace tlcp
