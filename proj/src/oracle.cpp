#include "tlcp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlcp/replicate.hpp"
#include "tlcp/rng.hpp"
#include "tlcp/simulate.hpp"

namespace tlcp {

StateCode encode_configuration(const Configuration& c) {
  StateCode code = 0;
  for (SiteIndex i = c.n_sites() - 1; i >= 0; --i)
    code = code * 4 + static_cast<StateCode>(c.state(i));
  return code;
}

Configuration decode_configuration(const Window& w, StateCode code) {
  Configuration c(w);
  for (SiteIndex i = 0; i < w.n_sites(); ++i) {
    c.set_state(i, static_cast<SiteState>(code & 3));
    code >>= 2;
  }
  return c;
}

double GeneratorMatrix::max_exit_rate() const {
  double m = 0;
  for (double e : exit_) m = std::max(m, e);
  return m;
}

GeneratorMatrix build_generator(const Window& window, const Rates& rates,
                                int threads) {
  rates.validate();
  if (window.n_sites() > 8)
    throw std::invalid_argument("build_generator: window too large");
  const int k = window.n_sites();
  const int n_states = 1 << (2 * k);

  GeneratorMatrix q;
  q.win_ = window;
  q.rates_ = rates;
  q.n_states_ = n_states;
  q.exit_.assign(n_states, 0.0);

  // Up to two transitions per site per state, assembled row by row.
  std::vector<std::vector<GeneratorMatrix::Entry>> rows(n_states);
  auto build_row = [&](long code_l) {
    const StateCode code = static_cast<StateCode>(code_l);
    auto& row = rows[code];
    for (SiteIndex i = 0; i < k; ++i) {
      const int shift = 2 * i;
      const int s = (code >> shift) & 3;
      // neighbor counts restricted to birth-allowed senders
      double animal_senders = 0, flea_senders = 0;
      for (int dir = 0; dir < window.n_dirs(); ++dir) {
        SiteIndex nb = window.neighbor(i, dir);
        if (nb < 0 || !window.birth_allowed(nb)) continue;
        int ns = (code >> (2 * nb)) & 3;
        if (ns == 1 || ns == 3) animal_senders += 1;
        if (ns == 3) flea_senders += 1;
      }
      auto add = [&](int to, double rate) {
        if (rate <= 0) return;
        StateCode target =
            code + (static_cast<StateCode>(to - s) << shift);
        row.push_back({target, rate});
      };
      switch (s) {
        case 0:
          add(1, rates.lambda * animal_senders);
          break;
        case 1:
          add(0, Rates::animal_death);
          add(3, rates.mu * flea_senders);
          break;
        case 2:
          add(3, rates.lambda * animal_senders);
          add(0, rates.delta);
          break;
        case 3:
          add(2, Rates::animal_death);
          break;
      }
    }
    double exit = 0;
    for (const auto& e : row) exit += e.rate;
    q.exit_[code] = exit;
    return 0;
  };
  run_replicates<int>(n_states, threads, build_row);

  q.row_ptr_.assign(n_states + 1, 0);
  for (int s = 0; s < n_states; ++s)
    q.row_ptr_[s + 1] = q.row_ptr_[s] + rows[s].size();
  q.entries_.reserve(q.row_ptr_[n_states]);
  for (int s = 0; s < n_states; ++s)
    q.entries_.insert(q.entries_.end(), rows[s].begin(), rows[s].end());
  return q;
}

namespace {

// One uniformization pass over [0, t] with Lambda*t <= 500 (the caller
// splits longer horizons); iterate must be a probability vector (forward)
// or a bounded function (backward).
template <bool Forward>
std::vector<double> uniformize(const GeneratorMatrix& q,
                               std::vector<double> v, double t) {
  const int n = q.n_states();
  const double lambda = q.max_exit_rate();
  if (lambda <= 0 || t <= 0) return v;

  std::vector<double> out(n, 0.0), next(n);
  double w = std::exp(-lambda * t);
  double cum = w;
  for (int i = 0; i < n; ++i) out[i] = w * v[i];
  const long m_cap =
      static_cast<long>(lambda * t + 60 * std::sqrt(lambda * t) + 200);
  for (long m = 1; cum < 1 - 1e-12 && m <= m_cap; ++m) {
    if constexpr (Forward) {
      // next = v P, P = I + Q/Lambda (scatter over out-edges)
      std::copy(v.begin(), v.end(), next.begin());
      for (int s = 0; s < n; ++s) {
        const double mass = v[s];
        if (mass == 0) continue;
        next[s] -= mass * q.exit_rate(s) / lambda;
        for (const auto& e : q.row(s))
          next[e.to] += mass * e.rate / lambda;
      }
    } else {
      // next = P v (gather over out-edges)
      for (int s = 0; s < n; ++s) {
        double acc = 0;
        for (const auto& e : q.row(s)) acc += e.rate * (v[e.to] - v[s]);
        next[s] = v[s] + acc / lambda;
      }
    }
    v.swap(next);
    w *= lambda * t / static_cast<double>(m);
    cum += w;
    for (int i = 0; i < n; ++i) out[i] += w * v[i];
  }
  if constexpr (Forward) {
    // fold the truncated tail back in so the vector stays a distribution
    double total = 0;
    for (double x : out) total += x;
    if (total > 0)
      for (double& x : out) x /= total;
  }
  return out;
}

template <bool Forward>
std::vector<double> run_uniformization(const GeneratorMatrix& q,
                                       std::vector<double> v, double t) {
  if (t < 0) throw std::invalid_argument("uniformization: negative time");
  const double lambda = q.max_exit_rate();
  int segments = 1;
  if (lambda * t > 500) segments = static_cast<int>(lambda * t / 500) + 1;
  for (int s = 0; s < segments; ++s)
    v = uniformize<Forward>(q, std::move(v), t / segments);
  return v;
}

}  // namespace

std::vector<double> transient_distribution(const GeneratorMatrix& q,
                                           StateCode init, double t) {
  if (init >= static_cast<StateCode>(q.n_states()))
    throw std::invalid_argument("transient_distribution: bad state");
  std::vector<double> v(q.n_states(), 0.0);
  v[init] = 1.0;
  return run_uniformization<true>(q, std::move(v), t);
}

std::vector<double> transient_function(const GeneratorMatrix& q,
                                       std::vector<double> g, double t) {
  if (static_cast<int>(g.size()) != q.n_states())
    throw std::invalid_argument("transient_function: size mismatch");
  return run_uniformization<false>(q, std::move(g), t);
}

double exact_hitting(const GeneratorMatrix& q, StateCode init, double t,
                     const std::function<bool(StateCode)>& predicate) {
  std::vector<double> dist = transient_distribution(q, init, t);
  double p = 0;
  for (StateCode s = 0; s < static_cast<StateCode>(q.n_states()); ++s)
    if (predicate(s)) p += dist[s];
  return p;
}

std::vector<double> empirical_distribution(const Window& window,
                                           const Rates& rates,
                                           const Configuration& init, double t,
                                           long reps, std::uint64_t seed,
                                           int threads) {
  const int n_states = 1 << (2 * window.n_sites());
  auto codes = run_replicates<StateCode>(reps, threads, [&](long i) {
    EventLog log = EventLog::generate(window, 0, t + 1e-9, rates,
                                      rng::replicate_seed(seed, i));
    return encode_configuration(
        run_forward(log, init, 0, t).final_config());
  });
  std::vector<long> counts(n_states, 0);
  for (StateCode c : codes) ++counts[c];
  std::vector<double> dist(n_states);
  for (int s = 0; s < n_states; ++s)
    dist[s] = static_cast<double>(counts[s]) / static_cast<double>(reps);
  return dist;
}

}  // namespace tlcp
