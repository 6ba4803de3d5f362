#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tlcp/events.hpp"
#include "tlcp/lattice.hpp"

namespace tlcp {

using StateCode = std::uint32_t;  // base-4 digits in site index order

StateCode encode_configuration(const Configuration& c);
Configuration decode_configuration(const Window& w, StateCode code);

// Exact generator of the two-level process on a tiny window (4^k states,
// k <= 8), stored as sparse rows. Off-diagonal entries are the single-site
// rates of the transition table; row sums are zero.
class GeneratorMatrix {
 public:
  struct Entry {
    StateCode to;
    double rate;
  };

  int n_states() const { return n_states_; }
  const Window& window() const { return win_; }
  const Rates& rates() const { return rates_; }
  double exit_rate(StateCode s) const { return exit_[s]; }
  std::span<const Entry> row(StateCode s) const {
    return {entries_.data() + row_ptr_[s],
            row_ptr_[s + 1] - row_ptr_[s]};
  }
  double max_exit_rate() const;

 private:
  friend GeneratorMatrix build_generator(const Window&, const Rates&, int);
  Window win_ = Window::symmetric(1, 0);
  Rates rates_;
  int n_states_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
  std::vector<double> exit_;
};

// Enumerates every configuration and inserts the legal single-site
// transitions with rates from neighbor counts (birth-truncation semantics
// included: a neighbor outside (-L, L)^d does not send births). Rows are
// independent, so the build is replicate-parallel; threads == 1 is the
// serial reference.
GeneratorMatrix build_generator(const Window& window, const Rates& rates,
                                int threads = 1);

// Transient distribution e^{Qt} row for init, by uniformization. The Poisson
// series is truncated once the accumulated weight is within 1e-12 of one, so
// the result carries total truncation error below 1e-10; probabilities sum
// to 1 within 1e-9.
std::vector<double> transient_distribution(const GeneratorMatrix& q,
                                           StateCode init, double t);

// Backward route: e^{Qt} g for a function g on states, by the same series
// applied to columns. Used as an algebraically independent evaluation path.
std::vector<double> transient_function(const GeneratorMatrix& q,
                                       std::vector<double> g, double t);

// Probability that the state at time t satisfies the predicate.
double exact_hitting(const GeneratorMatrix& q, StateCode init, double t,
                     const std::function<bool(StateCode)>& predicate);

// Empirical distribution over state codes from the event-driven simulator,
// for oracle-vs-simulator comparisons: reps runs from `init` to time t.
std::vector<double> empirical_distribution(const Window& window,
                                           const Rates& rates,
                                           const Configuration& init, double t,
                                           long reps, std::uint64_t seed,
                                           int threads = 1);

}  // namespace tlcp
