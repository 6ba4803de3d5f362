#include "tlcp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlcp/replicate.hpp"
#include "tlcp/rng.hpp"
#include "tlcp/simulate.hpp"

namespace tlcp {

ScanResult survival_scan(const ScanParams& p) {
  if (p.mu_grid.empty()) throw std::invalid_argument("scan: empty mu grid");
  if (!std::is_sorted(p.mu_grid.begin(), p.mu_grid.end()))
    throw std::invalid_argument("scan: mu grid must be ascending");
  for (double m : p.mu_grid)
    if (m < 0) throw std::invalid_argument("scan: negative mu");
  const double mu_max = p.mu_grid.back();
  const Window win = Window::symmetric(p.dim, p.window_radius);
  const Rates full{p.lambda, mu_max, p.delta};
  const std::size_t n_mu = p.mu_grid.size();

  auto rows = run_replicates<std::vector<std::uint8_t>>(
      p.reps, p.threads, [&](long i) {
        std::uint64_t s = rng::replicate_seed(p.seed, i);
        EventLog log =
            EventLog::generate(win, -p.burn_in, p.horizon, full, s);
        Configuration animals =
            run_animals_only(log, Configuration(win, SiteState::Animal),
                             -p.burn_in, 0)
                .final_config();
        Configuration start = animals;
        for (SiteIndex j = 0; j < win.n_sites(); ++j)
          if (win.inf_norm(j) <= p.cube_n)
            start.set_state(j, has_animal(start.state(j)) ? SiteState::Both
                                                          : SiteState::Fleas);
        std::vector<std::uint8_t> alive(n_mu);
        RunOptions opts;
        opts.stop_when_fleas_extinct = true;
        for (std::size_t k = 0; k < n_mu; ++k) {
          // thinning from the shared log keeps the coupling nested in mu
          EventLog sub = log.thinned_mu(p.mu_grid[k]);
          Trajectory traj = run_forward(sub, start, 0, p.horizon, opts);
          alive[k] = traj.final_config().flea_count() > 0 ? 1 : 0;
        }
        return alive;
      });

  ScanResult res;
  res.mu_grid = p.mu_grid;
  for (std::size_t k = 0; k < n_mu; ++k) {
    long hits = 0;
    for (const auto& row : rows) hits += row[k];
    res.survival.push_back(stats::wilson(hits, p.reps, p.level));
  }
  for (const auto& row : rows)
    for (std::size_t k = 1; k < n_mu; ++k)
      if (row[k - 1] > row[k]) res.monotone_per_seed = false;
  for (std::size_t k = 0; k < n_mu; ++k) {
    if (res.survival[k].point >= 0.5) {
      if (k == 0) {
        res.mu_star = p.mu_grid[0];
      } else {
        double p0 = res.survival[k - 1].point, p1 = res.survival[k].point;
        double frac = (0.5 - p0) / (p1 - p0);
        res.mu_star = p.mu_grid[k - 1] + frac * (p.mu_grid[k] - p.mu_grid[k - 1]);
      }
      break;
    }
  }
  return res;
}

namespace {

// Containment monitor over the dual set replay (shares the block module's
// event semantics: event A at the final dual time, event B anywhere in
// [1, s_max]).
struct DualBlockEvents {
  bool event_a = false;
  bool event_b = false;
};

DualBlockEvents dual_block_events(const BlockSpec& spec,
                                  const DualTrajectory& dual,
                                  const Window& win) {
  auto cube = [&](const Coords& x) {
    std::vector<SiteIndex> out;
    int total = 1;
    for (int a = 0; a < spec.dim; ++a) total *= 2 * spec.n + 1;
    for (int i = 0; i < total; ++i) {
      int rem = i;
      Coords c = x;
      for (int a = spec.dim - 1; a >= 0; --a) {
        c[a] += rem % (2 * spec.n + 1) - spec.n;
        rem /= (2 * spec.n + 1);
      }
      out.push_back(win.index_of(c));
    }
    return out;
  };
  std::vector<std::vector<SiteIndex>> cubes_a, cubes_b;
  {
    int totalA = 1;
    for (int a = 0; a < spec.dim; ++a) totalA *= spec.L;
    for (int i = 0; i < totalA; ++i) {
      int rem = i;
      Coords c{};
      for (int a = spec.dim - 1; a >= 0; --a) {
        c[a] = rem % spec.L;
        rem /= spec.L;
      }
      cubes_a.push_back(cube(c));
    }
    int totalB = 1;
    for (int a = 1; a < spec.dim; ++a) totalB *= spec.L;
    for (int i = 0; i < totalB; ++i) {
      int rem = i;
      Coords c{};
      c[0] = spec.L + spec.n;
      for (int a = spec.dim - 1; a >= 1; --a) {
        c[a] = rem % spec.L;
        rem /= spec.L;
      }
      cubes_b.push_back(cube(c));
    }
  }
  auto full_in = [&](const std::vector<std::uint8_t>& mask,
                     const std::vector<SiteIndex>& sites) {
    for (SiteIndex s : sites)
      if (!mask[s]) return false;
    return true;
  };
  std::vector<std::uint8_t> mask(win.n_sites(), 0);
  for (SiteIndex s : dual.initial()) mask[s] = 1;
  DualBlockEvents ev;
  std::size_t idx = 0;
  const auto& events = dual.events();
  // replay to s = 1, then monitor through s_max
  while (idx < events.size() && events[idx].s < 1.0) {
    mask[events[idx].site] = events[idx].added ? 1 : 0;
    ++idx;
  }
  auto check_b = [&] {
    if (ev.event_b) return;
    for (const auto& c : cubes_b)
      if (full_in(mask, c)) {
        ev.event_b = true;
        return;
      }
  };
  check_b();
  for (; idx < events.size(); ++idx) {
    mask[events[idx].site] = events[idx].added ? 1 : 0;
    check_b();
  }
  for (const auto& c : cubes_a)
    if (full_in(mask, c)) {
      ev.event_a = true;
      break;
    }
  return ev;
}

}  // namespace

DualBlockEstimate dual_block_estimate(const BlockSpec& spec, long reps,
                                      std::uint64_t seed, int threads,
                                      double level) {
  spec.validate();
  if (reps <= 0) throw std::invalid_argument("dual block estimate: reps <= 0");
  const int trunc = spec.truncation();
  const Window run_win =
      Window::symmetric(spec.dim, trunc + spec.window_pad, trunc);
  const Window plain_win = run_win.with_truncation(std::nullopt);
  const double s_max = spec.T + 1;

  auto out = run_replicates<DualBlockEvents>(reps, threads, [&](long i) {
    std::uint64_t s = rng::replicate_seed(seed, i);
    // anchor at 0; the dual consumes marks on (-(T+1), 0], the animal
    // environment burns in from the bottom of the same log
    EventLog log = EventLog::generate(run_win, -s_max - spec.burn_in, 1e-9,
                                      spec.rates, s);
    Trajectory animals = run_animals_only(
        log, Configuration(plain_win, SiteState::Animal), -s_max - spec.burn_in,
        0);
    AnimalHistory hist(animals);
    SiteSet cube;
    for (SiteIndex j = 0; j < run_win.n_sites(); ++j)
      if (run_win.inf_norm(j) <= spec.n) cube.push_back(j);
    FleaDualOptions dopts;
    dopts.truncate_by_member = true;  // truncate the dual's own dynamics
    DualTrajectory dual = run_flea_dual(log, cube, 0, s_max, hist, dopts);
    return dual_block_events(spec, dual, run_win);
  });
  long ka = 0, kb = 0;
  for (const auto& r : out) {
    ka += r.event_a;
    kb += r.event_b;
  }
  return {stats::wilson(ka, reps, level), stats::wilson(kb, reps, level)};
}

namespace {

int required_radius(const std::vector<Coords>& b, const std::vector<Coords>& d,
                    int dim, double pad_speed, double t) {
  int max_abs = 0;
  int lo = 0, hi = 0;
  for (const auto& sets : {&b, &d})
    for (const Coords& c : *sets)
      for (int a = 0; a < dim; ++a) {
        max_abs = std::max(max_abs, std::abs(c[a]));
        lo = std::min(lo, c[a]);
        hi = std::max(hi, c[a]);
      }
  double diam_half = (hi - lo) / 2.0;
  int need = static_cast<int>(std::ceil(diam_half + pad_speed * t));
  return std::max({need, max_abs, 1});
}

}  // namespace

ConvergenceReport convergence_test(const ConvergenceParams& p) {
  if (p.set_b.empty() || p.set_d.empty())
    throw std::invalid_argument("convergence: B and D must be nonempty");
  if (p.t_grid.empty()) throw std::invalid_argument("convergence: empty grid");
  if (p.reps <= 0) throw std::invalid_argument("convergence: reps <= 0");
  p.rates.validate();
  const double z = stats::normal_quantile(0.5 + p.level / 2);

  ConvergenceReport report;
  for (double t : p.t_grid) {
    if (t < 0) throw std::invalid_argument("convergence: negative t");
    const int need =
        required_radius(p.set_b, p.set_d, p.dim, p.pad_speed, t);
    int radius = p.window_radius.value_or(need);
    if (radius < need)
      throw std::invalid_argument(
          "convergence: window radius below speed-of-light padding");
    const Window win = Window::symmetric(p.dim, radius);
    const SiteSet b = sites_in_window(win, p.set_b);
    const SiteSet d = sites_in_window(win, p.set_d);
    const double half = t / 2;
    const double eps = 1e-9;

    struct ForwardObs {
      std::uint8_t hit = 0;         // B_t ∩ D != ∅
      std::uint8_t alive_half = 0;  // B_{t/2} != ∅
      std::uint8_t noninter = 0;    // both halves alive and disjoint
    };
    auto fwd = run_replicates<ForwardObs>(p.reps, p.threads, [&](long i) {
      std::uint64_t s = rng::replicate_seed(p.seed, 2 * i);
      EventLog log =
          EventLog::generate(win, -p.burn_in, t + eps, p.rates, s);
      Configuration start =
          run_animals_only(log, Configuration(win, SiteState::Animal),
                           -p.burn_in, 0)
              .final_config();
      for (SiteIndex j : b)
        start.set_state(j, has_animal(start.state(j)) ? SiteState::Both
                                                      : SiteState::Fleas);
      Trajectory traj = run_forward(log, start, 0, std::max(t, eps));
      ForwardObs o;
      Configuration ct = traj.config_at(t);
      o.hit = intersects(flea_set(ct), d) ? 1 : 0;
      SiteSet fwd_half = flea_set(traj.config_at(half));
      o.alive_half = !fwd_half.empty();
      if (t > 0) {
        AnimalHistory hist(traj);
        DualTrajectory dual = run_flea_dual(log, d, t, half, hist);
        const SiteSet& dual_half = dual.final_set();
        o.noninter = o.alive_half && !dual_half.empty() &&
                     !intersects(fwd_half, dual_half);
      }
      return o;
    });

    auto full = run_replicates<std::uint8_t>(p.reps, p.threads, [&](long i) {
      std::uint64_t s = rng::replicate_seed(p.seed, 2 * i + 1);
      EventLog log =
          EventLog::generate(win, -p.burn_in, half + eps, p.rates, s);
      Configuration start =
          run_animals_only(log, Configuration(win, SiteState::Animal),
                           -p.burn_in, 0)
              .final_config();
      for (SiteIndex j = 0; j < win.n_sites(); ++j)
        start.set_state(j, has_animal(start.state(j)) ? SiteState::Both
                                                      : SiteState::Fleas);
      Trajectory traj = run_forward(log, start, 0, std::max(half, eps));
      return static_cast<std::uint8_t>(
          intersects(flea_set(traj.config_at(half)), d) ? 1 : 0);
    });

    long k_hit = 0, k_alive = 0, k_non = 0, k_full = 0;
    for (const auto& o : fwd) {
      k_hit += o.hit;
      k_alive += o.alive_half;
      k_non += o.noninter;
    }
    for (auto h : full) k_full += h;

    ConvergencePoint pt;
    pt.t = t;
    pt.window_radius = radius;
    pt.lhs = stats::wilson(k_hit, p.reps, p.level);
    pt.survive_half = stats::wilson(k_alive, p.reps, p.level);
    pt.hit_from_full = stats::wilson(k_full, p.reps, p.level);
    pt.nonintersection = stats::wilson(k_non, p.reps, p.level);
    const double p1 = pt.survive_half.point, p2 = pt.hit_from_full.point;
    pt.rhs = p1 * p2;
    const double se1 = stats::proportion_se(p1, p.reps);
    const double se2 = stats::proportion_se(p2, p.reps);
    pt.rhs_se = std::sqrt(p2 * p2 * se1 * se1 + p1 * p1 * se2 * se2);
    pt.residual = std::abs(pt.lhs.point - pt.rhs);
    const double se_lhs = stats::proportion_se(pt.lhs.point, p.reps);
    pt.residual_half_width =
        z * std::sqrt(se_lhs * se_lhs + pt.rhs_se * pt.rhs_se);
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace tlcp
