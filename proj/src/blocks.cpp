#include "tlcp/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tlcp/replicate.hpp"
#include "tlcp/rng.hpp"

namespace tlcp {

void BlockSpec::validate() const {
  if (dim < 1 || dim > kMaxDim || n < 0 || L < 1 || !(T > 0) ||
      !(burn_in > 0) || window_pad < 0)
    throw std::invalid_argument("block spec: inconsistent parameters");
  rates.validate();
}

namespace {

// Candidate translate sets of Theorem-style block events.
std::vector<Coords> event_a_translates(int dim, int L) {
  std::vector<Coords> out;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= L;
  for (int i = 0; i < total; ++i) {
    int rem = i;
    Coords c{};
    for (int a = dim - 1; a >= 0; --a) {
      c[a] = rem % L;
      rem /= L;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Coords> event_b_translates(int dim, int L, int n) {
  std::vector<Coords> out;
  int total = 1;
  for (int a = 1; a < dim; ++a) total *= L;
  for (int i = 0; i < total; ++i) {
    int rem = i;
    Coords c{};
    c[0] = L + n;
    for (int a = dim - 1; a >= 1; --a) {
      c[a] = rem % L;
      rem /= L;
    }
    out.push_back(c);
  }
  return out;
}

// Site indices of (x + [-n, n]^d) ∩ window.
std::vector<SiteIndex> cube_sites(const Window& w, const Coords& x, int n) {
  std::vector<SiteIndex> out;
  const int d = w.dim();
  int total = 1;
  for (int a = 0; a < d; ++a) total *= 2 * n + 1;
  for (int i = 0; i < total; ++i) {
    int rem = i;
    Coords c = x;
    for (int a = d - 1; a >= 0; --a) {
      c[a] += rem % (2 * n + 1) - n;
      rem /= (2 * n + 1);
    }
    SiteIndex idx = w.index_of(c);
    if (idx < 0)
      throw std::invalid_argument("block spec: cube leaves the window");
    out.push_back(idx);
  }
  return out;
}

// Monitors whether any candidate cube is fully covered by the evolving flea
// mask; containment is registered at checkpoint times in [1, horizon].
class CubeMonitor {
 public:
  CubeMonitor(const Window& w, const std::vector<Coords>& translates, int n) {
    for (const Coords& x : translates) cubes_.push_back(cube_sites(w, x, n));
    member_of_.resize(w.n_sites());
    counts_.assign(cubes_.size(), 0);
    for (std::size_t k = 0; k < cubes_.size(); ++k)
      for (SiteIndex s : cubes_[k]) member_of_[s].push_back(k);
  }

  void set(SiteIndex site, bool fleas) {
    if (mask_.empty()) return;  // configured via reset()
    if (mask_[site] == fleas) return;
    mask_[site] = fleas;
    for (std::size_t k : member_of_[site]) counts_[k] += fleas ? 1 : -1;
  }

  void reset(const std::vector<std::uint8_t>& flea_mask) {
    mask_ = flea_mask;
    std::fill(counts_.begin(), counts_.end(), 0);
    for (std::size_t k = 0; k < cubes_.size(); ++k)
      for (SiteIndex s : cubes_[k]) counts_[k] += mask_[s] ? 1 : 0;
  }

  bool any_full() const {
    for (std::size_t k = 0; k < cubes_.size(); ++k)
      if (counts_[k] == static_cast<int>(cubes_[k].size())) return true;
    return false;
  }

 private:
  std::vector<std::vector<SiteIndex>> cubes_;
  std::vector<std::vector<std::size_t>> member_of_;
  std::vector<int> counts_;
  std::vector<std::uint8_t> mask_;
};

std::vector<std::uint8_t> flea_mask_at(const Trajectory& traj, double t) {
  Configuration c = traj.config_at(t);
  std::vector<std::uint8_t> mask(c.n_sites());
  for (SiteIndex i = 0; i < c.n_sites(); ++i)
    mask[i] = has_fleas(c.state(i)) ? 1 : 0;
  return mask;
}

}  // namespace

Window block_window(const BlockSpec& spec) {
  spec.validate();
  const int trunc = spec.truncation();
  return Window::symmetric(spec.dim, trunc + spec.window_pad, trunc);
}

BlockReplicate run_block_replicate(const BlockSpec& spec, std::uint64_t seed) {
  const Window run_win = block_window(spec);
  EventLog log = EventLog::generate(run_win, -spec.burn_in, spec.T + 1,
                                    spec.rates, seed);
  return run_block_replicate_on(spec, log);
}

BlockReplicate run_block_replicate_on(const BlockSpec& spec,
                                      const EventLog& log) {
  spec.validate();
  const Window run_win = log.window();
  if (!run_win.truncated() || run_win.truncation() != spec.truncation())
    throw std::invalid_argument("block replicate: log truncation mismatch");
  const Window burn_win = run_win.with_truncation(std::nullopt);
  const double horizon = spec.T + 1;
  if (log.t_min() > -spec.burn_in || log.t_max() < horizon)
    throw std::invalid_argument("block replicate: log time window too small");

  // burn-in animals on the untruncated window, then fleas on the seed cube
  Configuration init =
      run_animals_only(log, Configuration(burn_win, SiteState::Animal),
                       -spec.burn_in, 0)
          .final_config();
  Configuration start(run_win);
  for (SiteIndex i = 0; i < run_win.n_sites(); ++i)
    start.set_state(i, init.state(i) == SiteState::Animal ? SiteState::Animal
                                                          : SiteState::Empty);
  Coords origin{};
  for (SiteIndex s : cube_sites(run_win, origin, spec.n))
    start.set_state(s, has_animal(start.state(s)) ? SiteState::Both
                                                  : SiteState::Fleas);

  Trajectory traj = run_forward(log, start, 0, horizon);

  BlockReplicate rep;
  rep.n_count = compute_N(traj, spec.truncation(), spec.T).value;
  rep.nplus_count = compute_N_plus(traj, spec.truncation(), spec.T).value;
  // event A: containment at the final time only
  CubeMonitor mon_a(run_win, event_a_translates(spec.dim, spec.L), spec.n);
  mon_a.reset(flea_mask_at(traj, horizon));
  rep.flea_event_a = mon_a.any_full();

  // event B: containment at any time in [1, horizon]
  CubeMonitor mon_b(run_win, event_b_translates(spec.dim, spec.L, spec.n),
                    spec.n);
  mon_b.reset(flea_mask_at(traj, 1.0));
  bool hit = mon_b.any_full();
  for (const auto& e : traj.events()) {
    if (hit) break;
    if (e.time <= 1.0) continue;
    mon_b.set(e.site, has_fleas(static_cast<SiteState>(e.new_state)));
    hit = mon_b.any_full();
  }
  rep.flea_event_b = hit;

  // animal block event and path diagnostics from the cube-started
  // animals-only process on the same log
  Configuration cube_only(run_win);
  for (SiteIndex s : cube_sites(run_win, origin, spec.n))
    cube_only.set_state(s, SiteState::Animal);
  Trajectory atraj = run_animals_only(log, cube_only, 0, horizon);
  Configuration a_final = atraj.final_config();

  std::optional<Coords> achieved;
  for (const Coords& x : event_a_translates(spec.dim, spec.L)) {
    bool full = true;
    for (SiteIndex s : cube_sites(run_win, x, spec.n))
      full &= has_animal(a_final.state(s));
    if (full) {
      achieved = x;
      break;
    }
  }
  rep.animal_event_a = achieved.has_value();
  if (achieved) {
    std::vector<std::pair<SiteIndex, double>> targets;
    for (SiteIndex s : cube_sites(run_win, *achieved, spec.n))
      targets.emplace_back(s, horizon);
    PathDiagnostics d = path_diagnostics(log, atraj, targets);
    rep.jumps = d.jumps;
    rep.min_birth_window = d.min_birth_window;
  }
  return rep;
}

BlockEstimate estimate_block_events(const BlockSpec& spec, long reps,
                                    std::uint64_t seed, int threads,
                                    double level) {
  if (reps <= 0) throw std::invalid_argument("block estimate: reps <= 0");
  auto out = run_replicates<BlockReplicate>(reps, threads, [&](long i) {
    return run_block_replicate(spec, rng::replicate_seed(seed, i));
  });
  long ka = 0, kb = 0, kaa = 0;
  std::vector<double> jumps, windows, ns, nps;
  for (const auto& r : out) {
    ka += r.flea_event_a;
    kb += r.flea_event_b;
    kaa += r.animal_event_a;
    ns.push_back(r.n_count);
    nps.push_back(r.nplus_count);
    if (r.animal_event_a) {
      jumps.push_back(r.jumps);
      windows.push_back(r.min_birth_window);
    }
  }
  BlockEstimate est;
  est.event_a = stats::wilson(ka, reps, level);
  est.event_b = stats::wilson(kb, reps, level);
  est.animal_event_a = stats::wilson(kaa, reps, level);
  est.n_mean = std::accumulate(ns.begin(), ns.end(), 0.0) / reps;
  est.n_q50 = stats::quantile(ns, 0.5);
  est.n_q90 = stats::quantile(ns, 0.9);
  est.n_max = *std::max_element(ns.begin(), ns.end());
  est.nplus_mean = std::accumulate(nps.begin(), nps.end(), 0.0) / reps;
  est.nplus_q50 = stats::quantile(nps, 0.5);
  est.nplus_q90 = stats::quantile(nps, 0.9);
  est.nplus_max = *std::max_element(nps.begin(), nps.end());
  est.diagnosed = static_cast<long>(jumps.size());
  if (!jumps.empty()) {
    est.jumps_q = stats::quantile(jumps, 1 - spec.epsilon);
    est.window_q = stats::quantile(windows, spec.epsilon);
    long joint = 0;
    for (std::size_t i = 0; i < jumps.size(); ++i)
      joint += jumps[i] <= est.jumps_q && windows[i] >= est.window_q;
    est.joint_fraction = static_cast<double>(joint) / jumps.size();
  }
  return est;
}

int max_unit_gap_points(const std::vector<std::pair<double, double>>& intervals,
                        std::vector<double>* chosen) {
  int count = 0;
  double next_allowed = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : intervals) {
    double t = std::max(a, next_allowed);
    while (t <= b) {
      ++count;
      if (chosen) chosen->push_back(t);
      next_allowed = t + 1;
      t = next_allowed;
    }
  }
  return count;
}

namespace {

BoundaryCount count_on_sites(const Trajectory& traj,
                             const std::vector<SiteIndex>& sites, double T) {
  BoundaryCount out;
  for (SiteIndex s : sites) {
    std::vector<std::pair<double, double>> iv;
    for (auto [a, b] : traj.flea_intervals(s)) {
      a = std::max(a, 0.0);
      b = std::min(b, T);
      if (a <= b) iv.emplace_back(a, b);
    }
    std::vector<double> chosen;
    out.value += max_unit_gap_points(iv, &chosen);
    for (double t : chosen) out.witness.emplace_back(s, t);
  }
  return out;
}

void require_truncated_run(const Trajectory& traj, int L, double T) {
  const Window& w = traj.initial().window();
  if (!w.truncated() || w.truncation() != L)
    throw std::invalid_argument("boundary count: trajectory truncation mismatch");
  if (traj.t_start() > 0 || traj.t_end() < T)
    throw std::invalid_argument("boundary count: trajectory horizon too short");
}

}  // namespace

BoundaryCount compute_N(const Trajectory& traj, int L, double T) {
  require_truncated_run(traj, L, T);
  const Window& w = traj.initial().window();
  std::vector<SiteIndex> sites;
  for (SiteIndex i = 0; i < w.n_sites(); ++i)
    if (w.inf_norm(i) == L) sites.push_back(i);
  return count_on_sites(traj, sites, T);
}

BoundaryCount compute_N_plus(const Trajectory& traj, int L, double T) {
  require_truncated_run(traj, L, T);
  const Window& w = traj.initial().window();
  std::vector<SiteIndex> sites;
  for (SiteIndex i = 0; i < w.n_sites(); ++i) {
    Coords c = w.coords_of(i);
    if (c[0] != L) continue;
    bool face = true;
    for (int a = 1; a < w.dim(); ++a) face &= c[a] >= 0 && c[a] <= L;
    if (face) sites.push_back(i);
  }
  return count_on_sites(traj, sites, T);
}

OrthantTestReport test_orthant_inequality(const OrthantTestParams& p) {
  if (p.N < 1 || p.M < 1 || p.L < p.n || p.n < 1 || p.reps <= 0)
    throw std::invalid_argument("orthant test: bad parameters");
  p.rates.validate();

  const Window run_win =
      Window::symmetric(p.dim, p.L + p.window_pad, p.L);
  const Window burn_win = run_win.with_truncation(std::nullopt);

  struct Obs {
    int in_orthant;
    int total;
    int n_count;
    int nplus_count;
  };
  auto obs = run_replicates<Obs>(p.reps, p.threads, [&](long i) {
    std::uint64_t s = rng::replicate_seed(p.seed, i);
    EventLog log = EventLog::generate(run_win, -p.burn_in, p.T, p.rates, s);
    Configuration init =
        run_animals_only(log, Configuration(burn_win, SiteState::Animal),
                         -p.burn_in, 0)
            .final_config();
    Configuration start(run_win);
    for (SiteIndex j = 0; j < run_win.n_sites(); ++j)
      start.set_state(j, init.state(j) == SiteState::Animal
                             ? SiteState::Animal
                             : SiteState::Empty);
    for (SiteIndex j = 0; j < run_win.n_sites(); ++j) {
      if (run_win.inf_norm(j) <= p.n)
        start.set_state(j, has_animal(start.state(j)) ? SiteState::Both
                                                      : SiteState::Fleas);
    }
    Trajectory traj = run_forward(log, start, 0, p.T);
    const Configuration fin = traj.final_config();
    Obs o{0, 0, 0, 0};
    for (SiteIndex j = 0; j < run_win.n_sites(); ++j) {
      if (!has_fleas(fin.state(j))) continue;
      ++o.total;
      Coords c = run_win.coords_of(j);
      bool orthant = true;
      for (int a = 0; a < p.dim; ++a) orthant &= c[a] >= 0 && c[a] <= p.L;
      o.in_orthant += orthant;
    }
    o.n_count = compute_N(traj, p.L, p.T).value;
    o.nplus_count = compute_N_plus(traj, p.L, p.T).value;
    return o;
  });

  const double pow2d = std::pow(2.0, p.dim);
  long k_lhs = 0, k_inner = 0, k_nplus = 0, k_n = 0;
  for (const auto& o : obs) {
    k_lhs += o.in_orthant <= p.N;
    k_inner += o.total <= static_cast<int>(pow2d) * p.N;
    k_nplus += o.nplus_count <= p.M;
    k_n += o.n_count <= p.M * p.dim * static_cast<int>(pow2d);
  }
  OrthantTestReport rep;
  rep.lhs = stats::wilson(k_lhs, p.reps, p.level);
  rep.rhs_inner = stats::wilson(k_inner, p.reps, p.level);
  const double inv = 1.0 / pow2d;
  rep.rhs_point = std::pow(rep.rhs_inner.point, inv);
  rep.rhs_low = std::pow(rep.rhs_inner.ci_low, inv);
  rep.rhs_high = std::pow(rep.rhs_inner.ci_high, inv);
  rep.violation = rep.lhs.ci_low > rep.rhs_high;

  rep.nplus_leq_m = stats::wilson(k_nplus, p.reps, p.level);
  rep.n_leq_md2d = stats::wilson(k_n, p.reps, p.level);
  const double expo = p.dim * pow2d;
  rep.lhs2_point = std::pow(rep.nplus_leq_m.point, expo);
  rep.lhs2_low = std::pow(rep.nplus_leq_m.ci_low, expo);
  rep.lhs2_high = std::pow(rep.nplus_leq_m.ci_high, expo);
  rep.violation2 = rep.lhs2_low > rep.n_leq_md2d.ci_high;
  return rep;
}

PathDiagnostics path_diagnostics(
    const EventLog& log, const Trajectory& animal_traj,
    const std::vector<std::pair<SiteIndex, double>>& targets) {
  PathDiagnostics out;
  AnimalHistory hist(animal_traj);

  // per-site animal entry events (time, trajectory mark id)
  const int n_sites = animal_traj.initial().n_sites();
  std::vector<std::vector<std::pair<double, std::uint64_t>>> entries(n_sites);
  for (const auto& e : animal_traj.events()) {
    bool before = has_animal(static_cast<SiteState>(e.old_state));
    bool after = has_animal(static_cast<SiteState>(e.new_state));
    if (!before && after) entries[e.site].emplace_back(e.time, e.mark_id);
  }

  std::set<std::uint64_t> seen_arrows;
  const std::uint64_t top_id = std::numeric_limits<std::uint64_t>::max();

  for (const auto& [target, t_star] : targets) {
    if (!hist.has_animal_before(target, t_star, top_id)) {
      ++out.unreachable;
      continue;
    }
    ++out.reachable;
    // walk down: follow each site's most recent entry below the current time
    SiteIndex site = target;
    double t_hi = t_star;
    double jump_above = t_star;  // time of the jump above the current one
    while (true) {
      const auto& ev = entries[site];
      auto it = std::upper_bound(
          ev.begin(), ev.end(), std::make_pair(t_hi, top_id));
      if (it == ev.begin()) break;  // occupied since the start: path base
      const auto [u, mark_id] = *std::prev(it);
      const Mark& arrow = log.mark(mark_id);
      SiteIndex from = arrow.src;
      double death_to = hist.next_animal_death(site, u, mark_id);
      double death_from = hist.next_animal_death(from, u, mark_id);
      double window =
          std::min({jump_above, death_to, death_from, t_star}) - u;
      if (seen_arrows.insert(mark_id).second) ++out.jumps;
      out.min_birth_window = std::min(out.min_birth_window, window);
      site = from;
      jump_above = u;
      t_hi = u;
    }
  }
  return out;
}

}  // namespace tlcp
