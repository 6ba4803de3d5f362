#include "tlcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tlcp {

Trajectory::Trajectory(Configuration init, double t_start, double t_end,
                       std::vector<TrajectoryEvent> events)
    : init_(init), final_(std::move(init)), t_start_(t_start), t_end_(t_end),
      events_(std::move(events)) {
  int animals = final_.animal_count();
  int fleas = final_.flea_count();
  if (animals == 0) t1_ = t_start_;
  if (fleas == 0) t2_ = t_start_;
  for (const auto& e : events_) {
    SiteState from = final_.state(e.site);
    SiteState to = static_cast<SiteState>(e.new_state);
    final_.set_state(e.site, to);
    animals += has_animal(to) - has_animal(from);
    fleas += has_fleas(to) - has_fleas(from);
    if (animals == 0 && !t1_) t1_ = e.time;
    if (fleas == 0 && !t2_) t2_ = e.time;
  }
}

Configuration Trajectory::config_at(double t) const {
  if (t < t_start_ || t > t_end_)
    throw std::invalid_argument("config_at: time outside trajectory");
  Configuration c = init_;
  for (const auto& e : events_) {
    if (e.time > t) break;
    c.set_state(e.site, static_cast<SiteState>(e.new_state));
  }
  return c;
}

std::vector<std::pair<double, double>> Trajectory::flea_intervals(
    SiteIndex site) const {
  std::vector<std::pair<double, double>> out;
  bool occ = has_fleas(init_.state(site));
  double start = t_start_;
  for (const auto& e : events_) {
    if (e.site != site) continue;
    bool now = has_fleas(static_cast<SiteState>(e.new_state));
    if (now == occ) continue;
    if (occ) out.emplace_back(start, e.time);
    else start = e.time;
    occ = now;
  }
  if (occ) out.emplace_back(start, t_end_);
  return out;
}

namespace {

// The single-site rule of one mark: returns the changed site and its new
// state, or site -1 when the mark has no effect.
std::pair<SiteIndex, SiteState> mark_effect(const Configuration& c,
                                            const Window& win, const Mark& m,
                                            bool animals_only) {
  switch (m.kind) {
    case MarkKind::AnimalArrow:
      if (win.birth_allowed(m.src) && has_animal(c.state(m.src)) &&
          !has_animal(c.state(m.dst)))
        return {m.dst, c.state(m.dst) == SiteState::Empty ? SiteState::Animal
                                                          : SiteState::Both};
      break;
    case MarkKind::AnimalDeath:
      if (c.state(m.src) == SiteState::Animal)
        return {m.src, SiteState::Empty};
      if (c.state(m.src) == SiteState::Both) return {m.src, SiteState::Fleas};
      break;
    case MarkKind::FleaArrow:
      if (!animals_only && win.birth_allowed(m.src) &&
          c.state(m.src) == SiteState::Both &&
          c.state(m.dst) == SiteState::Animal)
        return {m.dst, SiteState::Both};
      break;
    case MarkKind::FleaDeathMark:
      if (!animals_only && c.state(m.src) == SiteState::Fleas)
        return {m.src, SiteState::Empty};
      break;
  }
  return {-1, SiteState::Empty};
}

Trajectory run_impl(const EventLog& log, Configuration init, double t_start,
                    double t_end, const RunOptions& opts) {
  if (!init.window().same_geometry(log.window()))
    throw std::invalid_argument("run: configuration window mismatch");
  if (!(t_start < t_end) || t_start < log.t_min() || t_end > log.t_max())
    throw std::invalid_argument("run: time range outside log window");

  const Window& win = init.window();
  Configuration c = init;
  std::vector<TrajectoryEvent> events;
  int animals = c.animal_count();
  int fleas = c.flea_count();

  auto record = [&](const Mark& m, SiteIndex site, SiteState to) {
    SiteState from = c.state(site);
    c.set_state(site, to);
    events.push_back({m.time, m.id, site, static_cast<std::uint8_t>(from),
                      static_cast<std::uint8_t>(to)});
    animals += has_animal(to) - has_animal(from);
    fleas += has_fleas(to) - has_fleas(from);
  };

  const auto marks = log.marks();
  for (std::size_t i = log.upper_bound(t_start); i < marks.size(); ++i) {
    const Mark& m = marks[i];
    if (m.time > t_end) break;
    auto [site, to] = mark_effect(c, win, m, opts.animals_only);
    if (site >= 0) record(m, site, to);
    if (opts.stop_when_fleas_extinct && fleas == 0) break;
  }
  return Trajectory(std::move(init), t_start, t_end, std::move(events));
}

}  // namespace

Configuration apply_mark(const Configuration& c, const Mark& m) {
  const Window& win = c.window();
  if (m.src < 0 || m.src >= win.n_sites() ||
      (m.dst != -1 && (m.dst < 0 || m.dst >= win.n_sites())))
    throw std::invalid_argument("apply_mark: endpoint outside window");
  Configuration out = c;
  auto [site, to] = mark_effect(c, win, m, false);
  if (site >= 0) out.set_state(site, to);
  return out;
}

Trajectory run_forward(const EventLog& log, const Configuration& init,
                       double t_start, double t_end, const RunOptions& opts) {
  return run_impl(log, init, t_start, t_end, opts);
}

Trajectory run_animals_only(const EventLog& log, const Configuration& init,
                            double t_start, double t_end) {
  Configuration stripped = init;
  for (SiteIndex i = 0; i < stripped.n_sites(); ++i)
    stripped.set_state(i, has_animal(init.state(i)) ? SiteState::Animal
                                                    : SiteState::Empty);
  RunOptions opts;
  opts.animals_only = true;
  return run_impl(log, stripped, t_start, t_end, opts);
}

AnimalHistory::AnimalHistory(const Trajectory& traj)
    : t_start_(traj.t_start()), t_end_(traj.t_end()) {
  const Configuration& init = traj.initial();
  initial_.resize(init.n_sites());
  for (SiteIndex i = 0; i < init.n_sites(); ++i)
    initial_[i] = has_animal(init.state(i)) ? 1 : 0;
  changes_.resize(init.n_sites());
  for (const auto& e : traj.events()) {
    bool before = has_animal(static_cast<SiteState>(e.old_state));
    bool after = has_animal(static_cast<SiteState>(e.new_state));
    if (before != after) changes_[e.site].push_back({e.time, e.mark_id, after});
  }
}

bool AnimalHistory::has_animal_before(SiteIndex site, double time,
                                      std::uint64_t id) const {
  const auto& ch = changes_[site];
  // last change with (time, id) strictly before the query mark
  auto it = std::lower_bound(ch.begin(), ch.end(), std::make_pair(time, id),
                             [](const Change& c, const std::pair<double, std::uint64_t>& q) {
                               if (c.time != q.first) return c.time < q.first;
                               return c.id < q.second;
                             });
  if (it == ch.begin()) return initial_[site] != 0;
  return std::prev(it)->present_after;
}

double AnimalHistory::next_animal_death(SiteIndex site, double time,
                                        std::uint64_t id) const {
  const auto& ch = changes_[site];
  auto it = std::upper_bound(ch.begin(), ch.end(), std::make_pair(time, id),
                             [](const std::pair<double, std::uint64_t>& q, const Change& c) {
                               if (q.first != c.time) return q.first < c.time;
                               return q.second < c.id;
                             });
  for (; it != ch.end(); ++it)
    if (!it->present_after) return it->time;
  return std::numeric_limits<double>::infinity();
}

bool check_monotone_coupling(const EventLog& log, const Configuration& init1,
                             const Configuration& init2, double t_start,
                             double t_end) {
  if (!leq(init1, init2))
    throw std::invalid_argument("check_monotone_coupling: init1 > init2");
  // Lockstep over the shared log; each mark touches at most one site in each
  // copy, so checking the touched sites after every mark checks the order at
  // every event time.
  Trajectory t1 = run_forward(log, init1, t_start, t_end);
  Trajectory t2 = run_forward(log, init2, t_start, t_end);
  Configuration c1 = init1, c2 = init2;
  std::size_t i1 = 0, i2 = 0;
  const auto& e1 = t1.events();
  const auto& e2 = t2.events();
  while (i1 < e1.size() || i2 < e2.size()) {
    std::uint64_t next1 =
        i1 < e1.size() ? e1[i1].mark_id : std::numeric_limits<std::uint64_t>::max();
    std::uint64_t next2 =
        i2 < e2.size() ? e2[i2].mark_id : std::numeric_limits<std::uint64_t>::max();
    std::uint64_t id = std::min(next1, next2);
    SiteIndex touched = -1;
    if (next1 == id) {
      c1.set_state(e1[i1].site, static_cast<SiteState>(e1[i1].new_state));
      touched = e1[i1].site;
      ++i1;
    }
    if (next2 == id) {
      c2.set_state(e2[i2].site, static_cast<SiteState>(e2[i2].new_state));
      touched = e2[i2].site;
      ++i2;
    }
    if (!state_leq(c1.state(touched), c2.state(touched))) return false;
  }
  return true;
}

Configuration sample_upper_invariant_animals(const Window& window,
                                             double lambda, double burn_in,
                                             std::uint64_t seed) {
  if (!(burn_in > 0))
    throw std::invalid_argument("burn-in must be positive");
  Rates r{lambda, 0, 0};
  EventLog log = EventLog::generate(window, -burn_in, 0, r, seed);
  Configuration all1(window, SiteState::Animal);
  return run_animals_only(log, all1, -burn_in, 0).final_config();
}

Configuration sample_upper_invariant_joint(const Window& window,
                                           const Rates& rates, double burn_in,
                                           std::uint64_t seed) {
  if (!(burn_in > 0))
    throw std::invalid_argument("burn-in must be positive");
  EventLog log = EventLog::generate(window, -burn_in, 0, rates, seed);
  Configuration all3(window, SiteState::Both);
  return run_forward(log, all3, -burn_in, 0).final_config();
}

}  // namespace tlcp
