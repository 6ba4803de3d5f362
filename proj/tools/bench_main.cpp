// Benchmark of the replicate-parallel OpenMP kernels against the serial
// reference. Reports wall time and speedup for each thread count and checks
// that the results are identical, since every estimator reduces per-replicate
// slots in index order.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "tlcp/experiments.hpp"
#include "tlcp/oracle.hpp"
#include "tlcp/replicate.hpp"
#include "tlcp/rng.hpp"
#include "tlcp/simulate.hpp"

using namespace tlcp;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// forward-run kernel: one joint trajectory per replicate
std::vector<int> forward_kernel(long reps, int threads) {
  Window win = Window::symmetric(1, 40);
  Rates rates{3.0, 3.0, 1.0};
  return run_replicates<int>(reps, threads, [&](long i) {
    EventLog log =
        EventLog::generate(win, -5, 20, rates, rng::replicate_seed(11, i));
    Configuration start(win, SiteState::Both);
    Trajectory traj = run_forward(log, start, 0, 20);
    return traj.final_config().flea_count();
  });
}

}  // namespace

int main(int argc, char** argv) {
  long reps = argc > 1 ? std::stol(argv[1]) : 200;
  int max_threads = 1;
#if defined(_OPENMP)
  max_threads = omp_get_max_threads();
#endif

  std::printf("replicate kernel: %ld forward runs, window radius 40, "
              "horizon 20\n", reps);
  auto t0 = clock_type::now();
  auto reference = forward_kernel(reps, 1);
  double serial = seconds_since(t0);
  std::printf("%8s %10s %8s %s\n", "threads", "seconds", "speedup", "match");
  std::printf("%8d %10.3f %8.2f %s\n", 1, serial, 1.0, "ref");
  for (int threads : {2, 4, max_threads}) {
    if (threads <= 1 || threads > max_threads) continue;
    t0 = clock_type::now();
    auto out = forward_kernel(reps, threads);
    double dt = seconds_since(t0);
    std::printf("%8d %10.3f %8.2f %s\n", threads, dt, serial / dt,
                out == reference ? "identical" : "MISMATCH");
    if (out != reference) return 1;
  }

  std::printf("\ngenerator build: 6-site window, 4096 states\n");
  Window win = Window::line(6);
  Rates rates{2.0, 1.5, 0.8};
  t0 = clock_type::now();
  GeneratorMatrix ref = build_generator(win, rates, 1);
  double gserial = seconds_since(t0);
  std::printf("%8d %10.3f %8.2f %s\n", 1, gserial, 1.0, "ref");
  for (int threads : {2, 4, max_threads}) {
    if (threads <= 1 || threads > max_threads) continue;
    t0 = clock_type::now();
    GeneratorMatrix par = build_generator(win, rates, threads);
    double dt = seconds_since(t0);
    bool same = par.n_states() == ref.n_states();
    for (StateCode s = 0; same && s < (StateCode)ref.n_states(); ++s) {
      auto a = ref.row(s), b = par.row(s);
      same = a.size() == b.size();
      for (std::size_t i = 0; same && i < a.size(); ++i)
        same = a[i].to == b[i].to && a[i].rate == b[i].rate;
    }
    std::printf("%8d %10.3f %8.2f %s\n", threads, dt, gserial / dt,
                same ? "identical" : "MISMATCH");
    if (!same) return 1;
  }
  return 0;
}
