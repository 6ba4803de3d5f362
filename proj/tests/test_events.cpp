#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tlcp/events.hpp"
#include "tlcp/stats.hpp"

using namespace tlcp;

namespace {

bool same_marks(std::span<const Mark> a, std::span<const Mark> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].time != b[i].time || a[i].kind != b[i].kind ||
        a[i].src != b[i].src || a[i].dst != b[i].dst)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rate zero gives a null stream") {
  Window w = Window::symmetric(1, 3);
  EventLog log = EventLog::generate(w, 0, 50, {2.0, 0.0, 1.0}, 7);
  for (const Mark& m : log.marks()) CHECK(m.kind != MarkKind::FleaArrow);
}

TEST_CASE("poisson count of a single directed edge") {
  // lambda=2 on one directed edge over [0,1000]: mean 2000, sd ~44.7
  Window w = Window::line(2);
  EventLog log = EventLog::generate(w, 0, 1000, {2.0, 0, 0}, 123);
  long count = 0;
  for (const Mark& m : log.marks())
    if (m.kind == MarkKind::AnimalArrow && m.src == 0 && m.dst == 1) ++count;
  CHECK(std::abs(count - 2000.0) < 4 * std::sqrt(2000.0));
}

TEST_CASE("replay determinism") {
  Window w = Window::symmetric(2, 2);
  Rates r{1.5, 0.7, 0.9};
  EventLog a = EventLog::generate(w, -3, 5, r, 99);
  EventLog b = EventLog::generate(w, -3, 5, r, 99);
  CHECK(same_marks(a.marks(), b.marks()));
  EventLog c = EventLog::generate(w, -3, 5, r, 100);
  CHECK(!same_marks(a.marks(), c.marks()));
}

TEST_CASE("time-window extension keeps existing marks") {
  Window w = Window::symmetric(1, 2);
  Rates r{1.0, 1.0, 1.0};
  EventLog small = EventLog::generate(w, 0, 5, r, 42);
  EventLog big = EventLog::generate(w, 0, 10, r, 42);
  EventLog wide = EventLog::generate(w, -5, 10, r, 42);

  auto on_range = [](const EventLog& log, double a, double b) {
    std::vector<Mark> out;
    for (const Mark& m : log.marks())
      if (m.time >= a && m.time <= b) out.push_back(m);
    return out;
  };
  auto s = on_range(small, 0, 5);
  auto b1 = on_range(big, 0, 5);
  auto w1 = on_range(wide, 0, 5);
  CHECK(same_marks(s, b1));
  CHECK(same_marks(s, w1));
}

TEST_CASE("window enlargement extends streams without reshuffling") {
  Rates r{1.0, 1.0, 1.0};
  EventLog small = EventLog::generate(Window::symmetric(1, 2), 0, 20, r, 5);
  EventLog big = EventLog::generate(Window::symmetric(1, 4), 0, 20, r, 5);
  // site streams of the common sites agree
  for (int x = -2; x <= 2; ++x) {
    Coords c{x, 0, 0, 0};
    SiteIndex si = small.window().index_of(c);
    SiteIndex bi = big.window().index_of(c);
    auto sm = small.marks_in({MarkKind::AnimalDeath, si, -1}, 0, 20);
    auto bm = big.marks_in({MarkKind::AnimalDeath, bi, -1}, 0, 20);
    REQUIRE(sm.size() == bm.size());
    for (std::size_t i = 0; i < sm.size(); ++i)
      CHECK(sm[i].time == bm[i].time);
    // edge streams fully inside both windows agree too
    if (x < 2) {
      auto se = small.marks_in({MarkKind::FleaArrow, si, 1}, 0, 20);
      auto be = big.marks_in({MarkKind::FleaArrow, bi, 1}, 0, 20);
      REQUIRE(se.size() == be.size());
      for (std::size_t i = 0; i < se.size(); ++i)
        CHECK(se[i].time == be[i].time);
    }
  }
}

TEST_CASE("ids increase with time and per-stream gaps are positive") {
  Window w = Window::symmetric(1, 3);
  EventLog log = EventLog::generate(w, -4, 4, {2.0, 2.0, 1.0}, 11);
  for (std::size_t i = 0; i < log.marks().size(); ++i) {
    CHECK(log.marks()[i].id == i);
    if (i) CHECK(log.marks()[i].time >= log.marks()[i - 1].time);
  }
  for (SiteIndex s = 0; s < w.n_sites(); ++s) {
    auto ms = log.marks_in({MarkKind::AnimalDeath, s, -1}, -4, 4);
    for (std::size_t i = 1; i < ms.size(); ++i)
      CHECK(ms[i].time > ms[i - 1].time);
  }
}

TEST_CASE("marks_in validation and partition additivity") {
  Window w = Window::symmetric(1, 1);
  EventLog log = EventLog::generate(w, 0, 10, {1.0, 1.0, 1.0}, 3);
  CHECK_THROWS(log.marks_in({MarkKind::AnimalDeath, 0, -1}, -1, 5));
  CHECK_THROWS(log.marks_in({MarkKind::AnimalDeath, 0, -1}, 0, 11));

  // empty stream: mu edge stream of a rate-0 log
  EventLog nolog = EventLog::generate(w, 0, 10, {0.0, 0.0, 0.0}, 3);
  CHECK(nolog.marks_in({MarkKind::FleaArrow, 0, 1}, 0, 10).empty());

  auto a = log.marks_in({MarkKind::AnimalDeath, 1, -1}, 0, 4.3);
  auto b = log.marks_in({MarkKind::AnimalDeath, 1, -1}, 4.3, 10);
  auto all = log.marks_in({MarkKind::AnimalDeath, 1, -1}, 0, 10);
  REQUIRE(a.size() + b.size() == all.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == all[i].id);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(b[i].id == all[a.size() + i].id);
}

TEST_CASE("inter-arrival times pass a KS test against the exponential") {
  // one high-volume stream per kind, significance 1e-3, 1e4 samples
  struct Case {
    MarkKind kind;
    int dir;
    double rate;
  };
  Window w = Window::symmetric(1, 1);
  Rates r{1.7, 0.6, 1.3};
  for (Case tc : {Case{MarkKind::AnimalDeath, -1, 1.0},
                  Case{MarkKind::AnimalArrow, 1, 1.7},
                  Case{MarkKind::FleaArrow, 1, 0.6},
                  Case{MarkKind::FleaDeathMark, -1, 1.3}}) {
    double horizon = 10500.0 / tc.rate + 10;
    EventLog log = EventLog::generate(w, 0, horizon, r, 2024);
    auto ms = log.marks_in({tc.kind, 0, tc.dir}, 0, horizon);
    REQUIRE(ms.size() >= 10000);
    std::vector<double> cdf;
    double prev = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
      double gap = ms[i].time - prev;
      prev = ms[i].time;
      cdf.push_back(1 - std::exp(-tc.rate * gap));
    }
    std::sort(cdf.begin(), cdf.end());
    double d = stats::ks_statistic(cdf);
    double stat = std::sqrt(10000.0) * d;
    CHECK(stats::kolmogorov_cdf(stat) < 1 - 1e-3);
  }
}

TEST_CASE("negative-time arrivals are exponential too") {
  Window w = Window::symmetric(1, 0);
  EventLog log = EventLog::generate(w, -10500, 1, {0, 0, 1.0}, 77);
  auto ms = log.marks_in({MarkKind::FleaDeathMark, 0, -1}, -10500, 0);
  REQUIRE(ms.size() >= 10000);
  std::vector<double> cdf;
  double prev = 0;  // gaps measured downward from the anchor at 0
  for (std::size_t i = ms.size(); i-- > ms.size() - 10000;) {
    double gap = prev - ms[i].time;
    prev = ms[i].time;
    cdf.push_back(1 - std::exp(-gap));
  }
  std::sort(cdf.begin(), cdf.end());
  double stat = std::sqrt(10000.0) * stats::ks_statistic(cdf);
  CHECK(stats::kolmogorov_cdf(stat) < 1 - 1e-3);
}

TEST_CASE("thinning retention, monotonicity and errors") {
  Window w = Window::symmetric(1, 60);
  EventLog log = EventLog::generate(w, 0, 400, {0, 4.0, 0}, 8);
  auto flea_arrow_count = [](const EventLog& l) {
    long n = 0;
    for (const Mark& m : l.marks()) n += m.kind == MarkKind::FleaArrow;
    return n;
  };
  long total = flea_arrow_count(log);
  REQUIRE(total > 100000);

  CHECK_THROWS(log.thinned_mu(5.0));

  EventLog same = log.thinned_mu(4.0);
  CHECK(same.marks().size() == log.marks().size());
  EventLog none = log.thinned_mu(0.0);
  CHECK(flea_arrow_count(none) == 0);

  EventLog half = log.thinned_mu(2.0);
  double frac = static_cast<double>(flea_arrow_count(half)) / total;
  CHECK(std::abs(frac - 0.5) < 0.01);
  CHECK(half.rates().mu == 2.0);

  // monotone inclusion of retained flea arrows
  EventLog third = log.thinned_mu(1.3);
  std::size_t j = 0;
  long matched = 0;
  for (const Mark& m : half.marks()) {
    if (m.kind != MarkKind::FleaArrow) continue;
    while (j < third.marks().size() &&
           (third.marks()[j].kind != MarkKind::FleaArrow ||
            third.marks()[j].time < m.time))
      ++j;
    if (j < third.marks().size() && third.marks()[j].time == m.time &&
        third.marks()[j].src == m.src && third.marks()[j].dst == m.dst) {
      ++matched;
      ++j;
    }
  }
  CHECK(matched == flea_arrow_count(third));
}

TEST_CASE("csv dump golden fixture") {
  Window w = Window::symmetric(1, 1);
  EventLog log = EventLog::generate(w, -1, 2, {1.0, 1.0, 1.0}, 31337);
  std::ostringstream os;
  log.dump_csv(os);

  std::string path = std::string(TLCP_GOLDEN_DIR) + "/eventlog_31337.csv";
  std::ifstream golden(path);
  if (!golden.good()) {
    // first build: record the fixture
    std::ofstream out(path);
    out << os.str();
    FAIL_CHECK("golden file recorded; rerun the test");
    return;
  }
  std::stringstream buf;
  buf << golden.rdbuf();
  CHECK(os.str() == buf.str());
}

TEST_CASE("from_marks validates endpoints") {
  Window w = Window::symmetric(1, 2);
  Mark bad{1.0, 0, MarkKind::AnimalArrow, 0, 3, 0};  // not adjacent
  CHECK_THROWS(EventLog::from_marks(w, 0, 2, {1, 0, 0}, {bad}));
  Mark ok{1.0, 0, MarkKind::AnimalArrow, 0, 1, 0};
  Mark outside{3.0, 0, MarkKind::AnimalDeath, 1, -1, 0};
  CHECK_THROWS(EventLog::from_marks(w, 0, 2, {1, 0, 0}, {ok, outside}));
  EventLog log = EventLog::from_marks(w, 0, 2, {1, 0, 0}, {ok});
  CHECK(log.marks().size() == 1);
}

TEST_CASE("empty time window is rejected") {
  CHECK_THROWS(EventLog::generate(Window::symmetric(1, 1), 2, 2, {1, 1, 1}, 1));
}
