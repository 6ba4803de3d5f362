#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tlcp/dual.hpp"
#include "tlcp/rng.hpp"

using namespace tlcp;

namespace {

Configuration random_config(const Window& w, std::mt19937_64& gen) {
  Configuration c(w);
  std::uniform_int_distribution<int> st(0, 3);
  for (SiteIndex i = 0; i < w.n_sites(); ++i)
    c.set_state(i, static_cast<SiteState>(st(gen)));
  return c;
}

SiteSet random_subset(const Window& w, std::mt19937_64& gen, double p = 0.3) {
  SiteSet out;
  std::uniform_real_distribution<double> u(0, 1);
  for (SiteIndex i = 0; i < w.n_sites(); ++i)
    if (u(gen) < p) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("frozen and empty duals") {
  Window w = Window::symmetric(1, 2);
  EventLog empty = EventLog::from_marks(w, 0, 4, {1, 1, 1}, {});
  DualTrajectory d0 = run_animal_dual(empty, {}, 4, 4);
  CHECK(d0.final_set().empty());
  CHECK(d0.extinction_s() == 0.0);

  DualTrajectory frozen = run_animal_dual(empty, {0, 3}, 4, 4);
  CHECK(frozen.final_set() == SiteSet{0, 3});
  CHECK(frozen.set_at(2.0) == SiteSet{0, 3});
  CHECK(!frozen.extinction_s());

  // fleas: no stars and no arrows leave the dual frozen too
  Trajectory animals = run_animals_only(
      empty, Configuration(w, SiteState::Animal), 0, 4);
  AnimalHistory hist(animals);
  DualTrajectory ffrozen = run_flea_dual(empty, {1}, 4, 4, hist);
  CHECK(ffrozen.final_set() == SiteSet{1});
}

TEST_CASE("dual run validation") {
  Window w = Window::symmetric(1, 2);
  EventLog log = EventLog::generate(w, 0, 4, {1, 1, 1}, 1);
  CHECK_THROWS(run_animal_dual(log, {0}, 5, 2));   // anchor beyond log
  CHECK_THROWS(run_animal_dual(log, {0}, 4, 5));   // reaches below t_min
  CHECK_THROWS(run_animal_dual(log, {99}, 4, 2));  // site outside window
  Trajectory animals =
      run_animals_only(log, Configuration(w, SiteState::Animal), 0, 2);
  AnimalHistory hist(animals);
  // history covers [0,2], dual anchored at 4 needs [2,4]
  CHECK_THROWS(run_flea_dual(log, {0}, 4, 2, hist));
}

TEST_CASE("animal pathwise duality, exact on every seed") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> rate(0.2, 3.5);
  std::uniform_real_distribution<double> tdist(0.3, 4.0);
  for (int trial = 0; trial < 400; ++trial) {
    Window w = trial % 2 ? Window::symmetric(1, 4) : Window::symmetric(2, 2);
    Rates r{rate(gen), rate(gen), rate(gen)};
    double T = tdist(gen);
    EventLog log = EventLog::generate(w, 0, T, r, 20000 + trial);
    Configuration init = random_config(w, gen);
    SiteSet c = random_subset(w, gen);

    Trajectory fwd = run_animals_only(log, init, 0, T);
    bool lhs = intersects(animal_set(fwd.config_at(T)), c);
    DualTrajectory dual = run_animal_dual(log, c, T, T);
    bool rhs = intersects(dual.final_set(), animal_set(init));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("flea pathwise duality, exact on every seed") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> rate(0.2, 3.5);
  std::uniform_real_distribution<double> tdist(0.3, 4.0);
  for (int trial = 0; trial < 400; ++trial) {
    Window w = trial % 2 ? Window::symmetric(1, 4) : Window::symmetric(2, 2);
    Rates r{rate(gen), rate(gen), rate(gen)};
    double T = tdist(gen);
    EventLog log = EventLog::generate(w, 0, T, r, 50000 + trial);
    Configuration init = random_config(w, gen);
    SiteSet d = random_subset(w, gen);

    Trajectory fwd = run_forward(log, init, 0, T);
    bool lhs = intersects(flea_set(fwd.config_at(T)), d);
    AnimalHistory hist(fwd);
    DualTrajectory dual = run_flea_dual(log, d, T, T, hist);
    bool rhs = intersects(dual.final_set(), flea_set(init));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("flea duality with truncation and negative anchor support") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> rate(0.5, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Window w = Window::symmetric(1, 5, 3);  // truncated births
    Rates r{rate(gen), rate(gen), rate(gen)};
    EventLog log = EventLog::generate(w, -3, 2, r, 70000 + trial);
    Configuration init = random_config(w, gen);
    SiteSet d = random_subset(w, gen);

    // run from a negative start time through the anchor
    Trajectory fwd = run_forward(log, init, -3, 2);
    bool lhs = intersects(flea_set(fwd.config_at(2)), d);
    AnimalHistory hist(fwd);
    DualTrajectory dual = run_flea_dual(log, d, 2, 5, hist);
    bool rhs = intersects(dual.final_set(), flea_set(init));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("dual monotone in the initial set") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 60; ++trial) {
    Window w = Window::symmetric(1, 4);
    EventLog log = EventLog::generate(w, 0, 4, {2.0, 2.0, 1.0}, 900 + trial);
    Trajectory animals = run_animals_only(log, random_config(w, gen), 0, 4);
    AnimalHistory hist(animals);
    SiteSet big = random_subset(w, gen, 0.5);
    SiteSet small;
    std::uniform_real_distribution<double> u(0, 1);
    for (SiteIndex s : big)
      if (u(gen) < 0.6) small.push_back(s);
    DualTrajectory dbig = run_flea_dual(log, big, 4, 4, hist);
    DualTrajectory dsmall = run_flea_dual(log, small, 4, 4, hist);
    for (double s : {1.0, 2.5, 4.0}) {
      SiteSet sb = dbig.set_at(s), ss = dsmall.set_at(s);
      CHECK(std::includes(sb.begin(), sb.end(), ss.begin(), ss.end()));
    }
  }
}

TEST_CASE("dual re-anchoring composes like a semigroup") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 60; ++trial) {
    Window w = Window::symmetric(1, 4);
    EventLog log = EventLog::generate(w, -6, 6, {2.0, 2.0, 1.0}, 333 + trial);
    Trajectory animals = run_animals_only(
        log, Configuration(w, SiteState::Animal), -6, 6);
    AnimalHistory hist(animals);
    SiteSet d = random_subset(w, gen, 0.4);
    double T = 6, s1 = 2.5, s2 = 4.5;

    DualTrajectory whole = run_flea_dual(log, d, T, s1 + s2, hist);
    DualTrajectory first = run_flea_dual(log, d, T, s1, hist);
    DualTrajectory second =
        run_flea_dual(log, first.final_set(), T - s1, s2, hist);
    CHECK(whole.final_set() == second.final_set());

    DualTrajectory awhole = run_animal_dual(log, d, T, s1 + s2);
    DualTrajectory afirst = run_animal_dual(log, d, T, s1);
    DualTrajectory asecond =
        run_animal_dual(log, afirst.final_set(), T - s1, s2);
    CHECK(awhole.final_set() == asecond.final_set());
  }
}

TEST_CASE("distributional duality: zero horizon coincides exactly") {
  DualityCheckParams p;
  p.window = Window::symmetric(1, 4);
  p.rates = {2.0, 1.5, 1.0};
  p.set_b = {Coords{0}};
  p.set_c = {Coords{-1}, Coords{0}};
  p.set_d = {Coords{0}, Coords{1}};
  p.t = 0;
  p.reps = 400;
  p.seed = 12;
  p.share_seeds = true;
  DualityCheckResult res = check_duality_distributional(p);
  CHECK(res.lhs.point == res.rhs.point);
  CHECK(res.ci_overlap);
}

TEST_CASE("distributional duality: D outside the window gives zero") {
  DualityCheckParams p;
  p.window = Window::symmetric(1, 3);
  p.rates = {2.0, 1.5, 1.0};
  p.set_b = {Coords{0}};
  p.set_c = {Coords{0}};
  p.set_d = {Coords{9}};  // dropped: outside
  p.t = 1;
  p.reps = 200;
  p.seed = 13;
  DualityCheckResult res = check_duality_distributional(p);
  CHECK(res.lhs.point == 0.0);
  CHECK(res.rhs.point == 0.0);
}

TEST_CASE("distributional duality: independent estimates overlap") {
  DualityCheckParams p;
  p.window = Window::symmetric(1, 10);
  p.rates = {3.0, 2.0, 1.0};
  p.set_b = {Coords{0}};
  p.set_c = {Coords{0}, Coords{1}};
  p.set_d = {Coords{0}, Coords{1}};
  p.t = 5;
  p.burn_in = 8;
  p.reps = 4000;
  p.seed = 14;
  p.level = 0.99;
  DualityCheckResult res = check_duality_distributional(p);
  CHECK(res.ci_overlap);
  CHECK(res.lhs.point > 0.05);  // nondegenerate regime
}
