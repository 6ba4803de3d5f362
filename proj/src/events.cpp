#include "tlcp/events.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "tlcp/io.hpp"
#include "tlcp/rng.hpp"

namespace tlcp {

void Rates::validate() const {
  if (!(lambda >= 0) || !std::isfinite(lambda) || !(mu >= 0) ||
      !std::isfinite(mu) || !(delta >= 0) || !std::isfinite(delta))
    throw std::invalid_argument("rates: must be finite and nonnegative");
}

const char* mark_kind_name(MarkKind k) {
  switch (k) {
    case MarkKind::AnimalArrow: return "animal_arrow";
    case MarkKind::AnimalDeath: return "animal_death";
    case MarkKind::FleaArrow: return "flea_arrow";
    case MarkKind::FleaDeathMark: return "flea_death";
  }
  return "?";
}

int EventLog::slot_of(MarkKind kind, int dir) const {
  switch (kind) {
    case MarkKind::AnimalDeath: return 0;
    case MarkKind::FleaDeathMark: return 1;
    case MarkKind::AnimalArrow: return 2 + dir;
    case MarkKind::FleaArrow: return 2 + win_.n_dirs() + dir;
  }
  return -1;
}

std::uint64_t EventLog::stream_code_of(const Mark& m) const {
  int dir = -1;
  if (m.dst >= 0) {
    for (int d = 0; d < win_.n_dirs(); ++d)
      if (win_.neighbor(m.src, d) == m.dst) {
        dir = d;
        break;
      }
  }
  return win_.stream_code(m.src, slot_of(m.kind, dir));
}

namespace {

struct MarkOrder {
  bool operator()(const Mark& a, const Mark& b) const {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.counter < b.counter;
  }
};

// Arrival counters carry the side in the low bit so the thinning coin of a
// mark is stable under any time-window extension.
std::uint32_t encode_counter(std::uint32_t k, bool negative_side) {
  return (k << 1) | (negative_side ? 1u : 0u);
}

}  // namespace

EventLog EventLog::generate(const Window& window, double t_min, double t_max,
                            const Rates& rates, std::uint64_t seed) {
  rates.validate();
  if (!(t_min < t_max))
    throw std::invalid_argument("generate_log: empty time window");
  EventLog log(window, t_min, t_max, rates, seed);

  const int dirs = window.n_dirs();
  const double span = t_max - t_min;
  double per_unit = window.n_sites() * (Rates::animal_death + rates.delta);
  for (SiteIndex i = 0; i < window.n_sites(); ++i)
    for (int d = 0; d < dirs; ++d)
      if (window.neighbor(i, d) >= 0) per_unit += rates.lambda + rates.mu;
  log.marks_.reserve(static_cast<std::size_t>(per_unit * span * 1.1) + 64);

  auto emit_stream = [&](MarkKind kind, SiteIndex src, SiteIndex dst, int dir,
                         double rate) {
    if (rate <= 0) return;
    const std::uint64_t code = window.stream_code(src, log.slot_of(kind, dir));
    // forward side: arrivals in (0, t_max]
    if (t_max > 0) {
      double t = 0;
      for (std::uint32_t k = 0;; ++k) {
        t += rng::exponential(seed, code, k, rate);
        if (t > t_max) break;
        if (t >= t_min)
          log.marks_.push_back(
              {t, 0, kind, src, dst, encode_counter(k, false)});
      }
    }
    // negative side: arrivals in [t_min, 0)
    if (t_min < 0) {
      double t = 0;
      for (std::uint32_t k = 0;; ++k) {
        t -= rng::exponential(seed ^ rng::kSaltNegativeTime, code, k, rate);
        if (t < t_min) break;
        if (t <= t_max)
          log.marks_.push_back({t, 0, kind, src, dst, encode_counter(k, true)});
      }
    }
  };

  for (SiteIndex i = 0; i < window.n_sites(); ++i) {
    emit_stream(MarkKind::AnimalDeath, i, -1, -1, Rates::animal_death);
    emit_stream(MarkKind::FleaDeathMark, i, -1, -1, rates.delta);
    for (int d = 0; d < dirs; ++d) {
      SiteIndex nb = window.neighbor(i, d);
      if (nb < 0) continue;
      emit_stream(MarkKind::AnimalArrow, i, nb, d, rates.lambda);
      emit_stream(MarkKind::FleaArrow, i, nb, d, rates.mu);
    }
  }

  std::sort(log.marks_.begin(), log.marks_.end(), MarkOrder{});
  for (std::size_t i = 0; i < log.marks_.size(); ++i) log.marks_[i].id = i;
  log.index_streams();
  return log;
}

EventLog EventLog::from_marks(const Window& window, double t_min, double t_max,
                              const Rates& rates, std::vector<Mark> marks) {
  rates.validate();
  if (!(t_min < t_max))
    throw std::invalid_argument("from_marks: empty time window");
  EventLog log(window, t_min, t_max, rates, 0);
  for (const Mark& m : marks) {
    if (m.src < 0 || m.src >= window.n_sites())
      throw std::invalid_argument("from_marks: source outside window");
    bool arrow =
        m.kind == MarkKind::AnimalArrow || m.kind == MarkKind::FleaArrow;
    if (arrow) {
      bool adjacent = false;
      for (int d = 0; d < window.n_dirs(); ++d)
        adjacent |= window.neighbor(m.src, d) == m.dst;
      if (!adjacent)
        throw std::invalid_argument("from_marks: arrow endpoints not adjacent");
    } else if (m.dst != -1) {
      throw std::invalid_argument("from_marks: site mark with a target");
    }
    if (m.time < t_min || m.time > t_max)
      throw std::invalid_argument("from_marks: mark outside time window");
  }
  log.marks_ = std::move(marks);
  std::sort(log.marks_.begin(), log.marks_.end(), MarkOrder{});
  for (std::size_t i = 0; i < log.marks_.size(); ++i) log.marks_[i].id = i;
  log.index_streams();
  return log;
}

void EventLog::index_streams() {
  const int per_site = 2 + 2 * win_.n_dirs();
  by_stream_.assign(static_cast<std::size_t>(win_.n_sites()) * per_site, {});
  for (const Mark& m : marks_) {
    int dir = -1;
    if (m.dst >= 0) {
      for (int d = 0; d < win_.n_dirs(); ++d)
        if (win_.neighbor(m.src, d) == m.dst) {
          dir = d;
          break;
        }
    }
    by_stream_[static_cast<std::size_t>(m.src) * per_site +
               slot_of(m.kind, dir)]
        .push_back(static_cast<std::uint32_t>(m.id));
  }
}

std::size_t EventLog::upper_bound(double t) const {
  return std::upper_bound(marks_.begin(), marks_.end(), t,
                          [](double v, const Mark& m) { return v < m.time; }) -
         marks_.begin();
}

std::vector<Mark> EventLog::marks_in(const StreamSel& sel, double a,
                                     double b) const {
  if (!(a <= b) || a < t_min_ || b > t_max_)
    throw std::invalid_argument("marks_in: range outside time window");
  if (sel.site < 0 || sel.site >= win_.n_sites())
    throw std::invalid_argument("marks_in: site outside window");
  const int per_site = 2 + 2 * win_.n_dirs();
  const auto& ids =
      by_stream_[static_cast<std::size_t>(sel.site) * per_site +
                 slot_of(sel.kind, sel.dir)];
  std::vector<Mark> out;
  auto it = std::lower_bound(ids.begin(), ids.end(), a,
                             [&](std::uint32_t id, double v) {
                               return marks_[id].time < v;
                             });
  for (; it != ids.end() && marks_[*it].time <= b; ++it)
    out.push_back(marks_[*it]);
  return out;
}

namespace {

EventLog thin_arrows(const EventLog& log, MarkKind kind, double rate_sub,
                     double rate_full, std::uint64_t salt,
                     const std::function<std::uint64_t(const Mark&)>& code) {
  if (rate_sub < 0 || rate_sub > rate_full)
    throw std::invalid_argument("thin_log: sub-rate out of range");
  const double keep_prob = rate_full > 0 ? rate_sub / rate_full : 0.0;
  std::vector<Mark> kept;
  kept.reserve(log.marks().size());
  for (const Mark& m : log.marks()) {
    if (m.kind == kind) {
      if (rate_full == 0) continue;
      double u = rng::uniform(log.seed() ^ salt, code(m), m.counter);
      if (!(u < keep_prob)) continue;
    }
    kept.push_back(m);
  }
  Rates r = log.rates();
  if (kind == MarkKind::FleaArrow)
    r.mu = rate_sub;
  else
    r.lambda = rate_sub;
  return EventLog::from_marks(log.window(), log.t_min(), log.t_max(), r,
                              std::move(kept));
}

}  // namespace

EventLog EventLog::thinned_mu(double mu_sub) const {
  return thin_arrows(
      *this, MarkKind::FleaArrow, mu_sub, rates_.mu, rng::kSaltThinMu,
      [this](const Mark& m) { return stream_code_of(m); });
}

EventLog EventLog::thinned_lambda(double lambda_sub) const {
  return thin_arrows(
      *this, MarkKind::AnimalArrow, lambda_sub, rates_.lambda,
      rng::kSaltThinLambda,
      [this](const Mark& m) { return stream_code_of(m); });
}

void EventLog::dump_csv(std::ostream& os) const {
  os << "kind,time,x,y,id\n";
  for (const Mark& m : marks_) {
    os << mark_kind_name(m.kind) << ',' << io::fmt_g17(m.time) << ','
       << coords_to_string(win_.coords_of(m.src), win_.dim(), ' ') << ',';
    if (m.dst >= 0)
      os << coords_to_string(win_.coords_of(m.dst), win_.dim(), ' ');
    os << ',' << m.id << '\n';
  }
}

}  // namespace tlcp
