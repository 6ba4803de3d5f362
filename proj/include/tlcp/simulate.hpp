#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tlcp/events.hpp"
#include "tlcp/lattice.hpp"

namespace tlcp {

struct TrajectoryEvent {
  double time = 0;
  std::uint64_t mark_id = 0;
  SiteIndex site = -1;
  std::uint8_t old_state = 0;
  std::uint8_t new_state = 0;
};

// Piecewise-constant record of a run: the initial configuration plus every
// effective state change, in (time, mark id) order. T1/T2 are the first
// times the animal/flea set becomes empty (t_start if empty initially).
class Trajectory {
 public:
  // Derived fields (final configuration, extinction times) are recomputed
  // from the event list.
  Trajectory(Configuration init, double t_start, double t_end,
             std::vector<TrajectoryEvent> events = {});

  const Configuration& initial() const { return init_; }
  const Configuration& final_config() const { return final_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  const std::vector<TrajectoryEvent>& events() const { return events_; }
  std::optional<double> extinction_time_animals() const { return t1_; }
  std::optional<double> extinction_time_fleas() const { return t2_; }

  // State at time t (events with time <= t applied); t in [t_start, t_end].
  Configuration config_at(double t) const;
  // Maximal intervals within [t_start, t_end] during which the site hosts
  // fleas.
  std::vector<std::pair<double, double>> flea_intervals(SiteIndex site) const;

 private:
  Configuration init_, final_;
  double t_start_, t_end_;
  std::vector<TrajectoryEvent> events_;
  std::optional<double> t1_, t2_;
};

struct RunOptions {
  bool animals_only = false;  // apply only alpha/beta marks
  // Stop consuming marks once the flea set is empty (it is absorbing); the
  // remaining animal evolution is then not recorded.
  bool stop_when_fleas_extinct = false;
};

// Applies one mark's local rule and returns the new configuration. Throws
// when an endpoint lies outside the window.
Configuration apply_mark(const Configuration& c, const Mark& m);

// Folds the log's marks over (t_start, t_end] in (time, id) order. The local
// rules, with truncation suppressing births from ||x||_inf >= L:
//   animal arrow x->y: if x hosts an animal and y does not, y gains one;
//   animal death x:    1 -> 0, 3 -> 2;
//   flea arrow x->y:   if x is in state 3 and y in state 1, y becomes 3;
//   flea death mark x: 2 -> 0 (a star acts only on a hostless site).
// The initial configuration must share the log window's geometry; its own
// truncation setting governs the run, so one log can serve truncated and
// untruncated phases.
Trajectory run_forward(const EventLog& log, const Configuration& init,
                       double t_start, double t_end,
                       const RunOptions& opts = {});

// Animal-only evolution (the basic contact process on the same log);
// the flea component of init is ignored and left empty.
Trajectory run_animals_only(const EventLog& log, const Configuration& init,
                            double t_start, double t_end);

// Time-indexed view of the animal component of a trajectory, for dual
// traversals. Queries are "immediately before mark (time, id)" so forward
// and dual decisions consult identical occupancy data.
class AnimalHistory {
 public:
  explicit AnimalHistory(const Trajectory& traj);
  bool has_animal_before(SiteIndex site, double time, std::uint64_t id) const;
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  // First time strictly after (time, id) at which the site's animal dies;
  // +infinity if it never does within the trajectory.
  double next_animal_death(SiteIndex site, double time,
                           std::uint64_t id) const;

 private:
  struct Change {
    double time;
    std::uint64_t id;
    bool present_after;
  };
  double t_start_, t_end_;
  std::vector<std::uint8_t> initial_;
  std::vector<std::vector<Change>> changes_;
};

// Runs both initial conditions through the same log and checks that the
// partial order holds after every mark. Requires leq(init1, init2).
bool check_monotone_coupling(const EventLog& log, const Configuration& init1,
                             const Configuration& init2, double t_start,
                             double t_end);

// Animals-only burn-in from the full configuration; approximates the upper
// invariant measure of the contact process with finite-time and
// finite-window bias (documented, not corrected).
Configuration sample_upper_invariant_animals(const Window& window,
                                             double lambda, double burn_in,
                                             std::uint64_t seed);

// Joint burn-in from all-3; approximates the two-level upper invariant
// measure the same way.
Configuration sample_upper_invariant_joint(const Window& window,
                                           const Rates& rates, double burn_in,
                                           std::uint64_t seed);

}  // namespace tlcp
