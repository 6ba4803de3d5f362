#pragma once

#include <cstdint>
#include <vector>

#include "tlcp/events.hpp"
#include "tlcp/lattice.hpp"
#include "tlcp/simulate.hpp"
#include "tlcp/stats.hpp"

namespace tlcp {

enum class DualKind { Animal, Flea };

struct DualEvent {
  double s = 0;  // dual time, s = anchor - mark time
  std::uint64_t mark_id = 0;
  SiteIndex site = -1;
  bool added = false;
};

// Reverse-time record: the dual set starts from D at dual time s = 0
// (absolute time = anchor) and changes only at mark times of the log
// reversed about the anchor.
class DualTrajectory {
 public:
  DualTrajectory(DualKind kind, const Window& window, SiteSet initial,
                 double anchor, double s_max,
                 std::vector<DualEvent> events = {});

  DualKind kind() const { return kind_; }
  double anchor() const { return anchor_; }
  double s_max() const { return s_max_; }
  const SiteSet& initial() const { return initial_; }
  const std::vector<DualEvent>& events() const { return events_; }

  // Dual set after consuming all marks with absolute time > anchor - s.
  SiteSet set_at(double s) const;
  const SiteSet& final_set() const { return final_; }
  bool final_empty() const { return final_.empty(); }
  // First s at which the dual set becomes empty, if it ever does.
  std::optional<double> extinction_s() const { return s_ext_; }

 private:
  DualKind kind_;
  Window win_;
  SiteSet initial_;
  double anchor_, s_max_;
  std::vector<DualEvent> events_;
  SiteSet final_;
  std::optional<double> s_ext_;
};

// Animal dual A^T_s: reverse traversal over (anchor - s_max, anchor].
// A death symbol at a dual member removes it; an arrow x->y with y in the
// dual adds x (truncation suppresses arrows from ||x||_inf >= L, mirroring
// the forward rule). Pathwise: A_T ∩ C != ∅ iff A^T_T ∩ A_0 != ∅ on the
// same log.
DualTrajectory run_animal_dual(const EventLog& log, const SiteSet& initial,
                               double anchor, double s_max);

// Flea dual B^T_s. A flea arrow x->y exists only when both endpoints host
// animals at the mark time, and a star removes a dual member only when the
// site is hostless then; both conditions are read from the given animal
// history exactly as the forward traversal reads them, which makes the
// pathwise duality an identity seed by seed. The history must cover
// [anchor - s_max, anchor].
//
// Truncation has two readings. The default mirrors the forward rule (arrows
// from ||x||_inf >= L do not exist), which is the exact pathwise dual of the
// truncated forward process; under it the outermost shell can never join
// the dual. truncate_by_member instead truncates the dual's own dynamics:
// a dual birth originates from the dual member (the arrow target, read
// backward), so it is suppressed when the member sits outside (-L, L)^d.
// The block construction for the dual uses the latter.
struct FleaDualOptions {
  bool truncate_by_member = false;
};

DualTrajectory run_flea_dual(const EventLog& log, const SiteSet& initial,
                             double anchor, double s_max,
                             const AnimalHistory& animals,
                             const FleaDualOptions& opts = {});

// Independent Monte Carlo estimates of the two sides of the joint hitting
// identity: lhs runs the forward process from fleas-on-B and checks
// A_t ∩ C and B_t ∩ D; rhs runs the animal and flea duals from C and D and
// checks them against A_0 and B. Animal initial law on both sides is the
// burn-in sampler. With share_seeds the two sides use the same logs and the
// estimates coincide exactly (useful at t = 0).
struct DualityCheckParams {
  Window window = Window::symmetric(1, 4);
  Rates rates;
  std::vector<Coords> set_b, set_c, set_d;
  double t = 1;
  double burn_in = 8;
  long reps = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool share_seeds = false;
  double level = 0.95;
};

struct DualityCheckResult {
  EstimateWithCI lhs, rhs;
  bool ci_overlap = false;
};

DualityCheckResult check_duality_distributional(const DualityCheckParams& p);

// Helpers shared by experiments: coordinate lists -> site indices (sites
// outside the window are dropped).
SiteSet sites_in_window(const Window& w, const std::vector<Coords>& coords);
bool intersects(const SiteSet& a, const SiteSet& b);

}  // namespace tlcp
