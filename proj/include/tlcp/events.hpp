#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tlcp/lattice.hpp"

namespace tlcp {

// Poisson mark rates. The animal death rate is normalized to 1.
struct Rates {
  double lambda = 0;  // animal birth, per directed edge
  double mu = 0;      // flea birth, per directed edge
  double delta = 0;   // hostless flea death, per site
  static constexpr double animal_death = 1.0;

  void validate() const;
};

enum class MarkKind : std::uint8_t {
  AnimalArrow = 0,   // alpha_{x,y}
  AnimalDeath = 1,   // beta_x
  FleaArrow = 2,     // gamma_{x,y}
  FleaDeathMark = 3  // delta_x (acts only when x is hostless)
};

const char* mark_kind_name(MarkKind k);

struct Mark {
  double time = 0;
  std::uint64_t id = 0;  // strictly increasing in (time, kind, stream) order
  MarkKind kind = MarkKind::AnimalDeath;
  SiteIndex src = -1;
  SiteIndex dst = -1;     // -1 for site marks
  std::uint32_t counter = 0;  // arrival index within its stream
};

// Addresses one Poisson stream: a site stream (dir = -1) or a directed edge
// stream (dir in [0, 2d)).
struct StreamSel {
  MarkKind kind;
  SiteIndex site;
  int dir = -1;
};

// The graphical representation on window x [t_min, t_max]: one Poisson
// process per site (deaths) and per directed in-window edge (birth arrows).
// Marks are unconditional; occupancy conditions (star active only on a
// hostless site, flea arrow only between hosted sites) are evaluated when a
// log is traversed, so one log serves every initial condition, forward and
// dual. A log is a pure function of (window geometry, time window, rates,
// seed): streams are keyed by window-independent codes and anchored at time
// 0, so enlarging the window or the time window extends existing streams
// without reshuffling them.
class EventLog {
 public:
  static EventLog generate(const Window& window, double t_min, double t_max,
                           const Rates& rates, std::uint64_t seed);
  // Explicit mark list (fixtures, tests). Marks are sorted and re-numbered.
  static EventLog from_marks(const Window& window, double t_min, double t_max,
                             const Rates& rates, std::vector<Mark> marks);

  const Window& window() const { return win_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const Rates& rates() const { return rates_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const Mark> marks() const { return marks_; }
  const Mark& mark(std::uint64_t id) const { return marks_[id]; }

  // First index with time > t (marks are sorted by (time, id)).
  std::size_t upper_bound(double t) const;

  // All marks of one stream with time in [a, b], ascending.
  // [a, b] must lie inside the log's time window.
  std::vector<Mark> marks_in(const StreamSel& sel, double a, double b) const;

  // Keeps each FleaArrow mark independently with probability mu_sub/mu,
  // using a per-mark coin that does not depend on mu_sub; the retained set is
  // therefore monotone in mu_sub. Requires 0 <= mu_sub <= mu.
  EventLog thinned_mu(double mu_sub) const;
  // Same construction for AnimalArrow marks and lambda.
  EventLog thinned_lambda(double lambda_sub) const;

  // CSV dump "kind,time,x,y,id" (17 significant digits, coords
  // space-separated within a field).
  void dump_csv(std::ostream& os) const;

 private:
  EventLog(Window w, double t_min, double t_max, Rates r, std::uint64_t seed)
      : win_(std::move(w)), t_min_(t_min), t_max_(t_max), rates_(r),
        seed_(seed) {}
  void index_streams();
  int slot_of(MarkKind kind, int dir) const;
  std::uint64_t stream_code_of(const Mark& m) const;

  Window win_;
  double t_min_, t_max_;
  Rates rates_;
  std::uint64_t seed_;
  std::vector<Mark> marks_;  // sorted by (time, kind, stream, counter)
  std::vector<std::vector<std::uint32_t>> by_stream_;
};

}  // namespace tlcp
