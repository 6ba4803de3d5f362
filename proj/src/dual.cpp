#include "tlcp/dual.hpp"

#include <algorithm>
#include <stdexcept>

#include "tlcp/replicate.hpp"
#include "tlcp/rng.hpp"

namespace tlcp {

DualTrajectory::DualTrajectory(DualKind kind, const Window& window,
                               SiteSet initial, double anchor, double s_max,
                               std::vector<DualEvent> events)
    : kind_(kind), win_(window), initial_(std::move(initial)),
      anchor_(anchor), s_max_(s_max), events_(std::move(events)) {
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()),
                 initial_.end());
  std::vector<std::uint8_t> mask(win_.n_sites(), 0);
  int size = 0;
  for (SiteIndex i : initial_) {
    mask[i] = 1;
    ++size;
  }
  if (size == 0) s_ext_ = 0.0;
  for (const auto& e : events_) {
    if (e.added && !mask[e.site]) {
      mask[e.site] = 1;
      ++size;
    } else if (!e.added && mask[e.site]) {
      mask[e.site] = 0;
      --size;
    }
    if (size == 0 && !s_ext_) s_ext_ = e.s;
  }
  for (SiteIndex i = 0; i < win_.n_sites(); ++i)
    if (mask[i]) final_.push_back(i);
}

SiteSet DualTrajectory::set_at(double s) const {
  if (s < 0 || s > s_max_)
    throw std::invalid_argument("set_at: dual time out of range");
  std::vector<std::uint8_t> mask(win_.n_sites(), 0);
  for (SiteIndex i : initial_) mask[i] = 1;
  for (const auto& e : events_) {
    if (e.s >= s) break;  // events are at s = anchor - time < s queried
    mask[e.site] = e.added ? 1 : 0;
  }
  SiteSet out;
  for (SiteIndex i = 0; i < win_.n_sites(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

namespace {

class DualRun {
 public:
  DualRun(const EventLog& log, const SiteSet& initial, double anchor,
          double s_max)
      : log_(log), win_(log.window()), anchor_(anchor), s_max_(s_max),
        mask_(win_.n_sites(), 0) {
    if (anchor > log.t_max() || anchor - s_max < log.t_min() || s_max < 0)
      throw std::invalid_argument("dual run: time range outside log window");
    for (SiteIndex i : initial) {
      if (i < 0 || i >= win_.n_sites())
        throw std::invalid_argument("dual run: site outside window");
      mask_[i] = 1;
    }
  }

  template <class Step>
  DualTrajectory run(DualKind kind, Step&& step) {
    SiteSet init;
    for (SiteIndex i = 0; i < win_.n_sites(); ++i)
      if (mask_[i]) init.push_back(i);
    const auto marks = log_.marks();
    std::size_t begin = log_.upper_bound(anchor_ - s_max_);
    std::size_t end = log_.upper_bound(anchor_);
    for (std::size_t i = end; i-- > begin;) step(marks[i]);
    return DualTrajectory(kind, win_, std::move(init), anchor_, s_max_,
                          std::move(events_));
  }

  bool in_dual(SiteIndex i) const { return mask_[i] != 0; }
  void add(const Mark& m, SiteIndex i) {
    if (mask_[i]) return;
    mask_[i] = 1;
    events_.push_back({anchor_ - m.time, m.id, i, true});
  }
  void remove(const Mark& m, SiteIndex i) {
    if (!mask_[i]) return;
    mask_[i] = 0;
    events_.push_back({anchor_ - m.time, m.id, i, false});
  }

 private:
  const EventLog& log_;
  const Window& win_;
  double anchor_, s_max_;
  std::vector<std::uint8_t> mask_;
  std::vector<DualEvent> events_;
};

}  // namespace

DualTrajectory run_animal_dual(const EventLog& log, const SiteSet& initial,
                               double anchor, double s_max) {
  DualRun run(log, initial, anchor, s_max);
  const Window& win = log.window();
  return run.run(DualKind::Animal, [&](const Mark& m) {
    switch (m.kind) {
      case MarkKind::AnimalDeath:
        run.remove(m, m.src);
        break;
      case MarkKind::AnimalArrow:
        if (win.birth_allowed(m.src) && run.in_dual(m.dst)) run.add(m, m.src);
        break;
      default:
        break;
    }
  });
}

DualTrajectory run_flea_dual(const EventLog& log, const SiteSet& initial,
                             double anchor, double s_max,
                             const AnimalHistory& animals,
                             const FleaDualOptions& opts) {
  if (animals.t_start() > anchor - s_max || animals.t_end() < anchor)
    throw std::invalid_argument("flea dual: animal history does not cover run");
  DualRun run(log, initial, anchor, s_max);
  const Window& win = log.window();
  return run.run(DualKind::Flea, [&](const Mark& m) {
    switch (m.kind) {
      case MarkKind::FleaDeathMark:
        // star symbol present only on a hostless site
        if (!animals.has_animal_before(m.src, m.time, m.id))
          run.remove(m, m.src);
        break;
      case MarkKind::FleaArrow: {
        bool allowed = opts.truncate_by_member ? win.birth_allowed(m.dst)
                                               : win.birth_allowed(m.src);
        // arrow drawn only when animals are present at both endpoints
        if (allowed && run.in_dual(m.dst) &&
            animals.has_animal_before(m.src, m.time, m.id) &&
            animals.has_animal_before(m.dst, m.time, m.id))
          run.add(m, m.src);
        break;
      }
      default:
        break;
    }
  });
}

SiteSet sites_in_window(const Window& w, const std::vector<Coords>& coords) {
  SiteSet out;
  for (const Coords& c : coords) {
    SiteIndex i = w.index_of(c);
    if (i >= 0) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool intersects(const SiteSet& a, const SiteSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else return true;
  }
  return false;
}

DualityCheckResult check_duality_distributional(const DualityCheckParams& p) {
  if (p.t < 0 || !(p.burn_in > 0) || p.reps <= 0)
    throw std::invalid_argument("duality check: bad parameters");
  const Window& win = p.window;
  const SiteSet b = sites_in_window(win, p.set_b);
  const SiteSet c = sites_in_window(win, p.set_c);
  const SiteSet d = sites_in_window(win, p.set_d);
  const double eps = 1e-9;  // degenerate t = 0 still needs a log window

  auto lhs_rep = [&](long i) -> int {
    std::uint64_t s = rng::replicate_seed(p.seed, 2 * i);
    EventLog log = EventLog::generate(win, -p.burn_in, p.t + eps, p.rates, s);
    Configuration a0 =
        run_animals_only(log, Configuration(win, SiteState::Animal),
                         -p.burn_in, 0)
            .final_config();
    for (SiteIndex i2 : b)
      a0.set_state(i2, has_animal(a0.state(i2)) ? SiteState::Both
                                                : SiteState::Fleas);
    Trajectory traj = run_forward(log, a0, 0, std::max(p.t, eps));
    Configuration ct = traj.config_at(p.t);
    return intersects(animal_set(ct), c) && intersects(flea_set(ct), d);
  };

  auto rhs_rep = [&](long i) -> int {
    std::uint64_t s = rng::replicate_seed(p.seed, p.share_seeds ? 2 * i
                                                                : 2 * i + 1);
    EventLog log = EventLog::generate(win, -p.burn_in, p.t + eps, p.rates, s);
    Trajectory animal_traj = run_animals_only(
        log, Configuration(win, SiteState::Animal), -p.burn_in,
        std::max(p.t, eps));
    Configuration a0 = animal_traj.config_at(0);
    AnimalHistory hist(animal_traj);
    DualTrajectory adual = run_animal_dual(log, c, p.t, p.t);
    DualTrajectory fdual = run_flea_dual(log, d, p.t, p.t, hist);
    return intersects(adual.final_set(), animal_set(a0)) &&
           intersects(fdual.final_set(), b);
  };

  auto lhs_hits = run_replicates<int>(p.reps, p.threads, lhs_rep);
  auto rhs_hits = run_replicates<int>(p.reps, p.threads, rhs_rep);
  long kl = 0, kr = 0;
  for (int h : lhs_hits) kl += h;
  for (int h : rhs_hits) kr += h;
  DualityCheckResult res;
  res.lhs = stats::wilson(kl, p.reps, p.level);
  res.rhs = stats::wilson(kr, p.reps, p.level);
  res.ci_overlap = res.lhs.overlaps(res.rhs);
  return res;
}

}  // namespace tlcp
