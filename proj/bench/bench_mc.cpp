// Timing comparison of the serial reference loop against the OpenMP engine.
#include <chrono>
#include <cstdio>
#include <functional>

#include "poistest/mc.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace poistest;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  ScenarioConfig cfg{DistSpec::poisson(5.0), 50,   20000,
                     {TestMethod{Method::W, 0}, TestMethod{Method::ID, 0}},
                     0.05,                    42,  "bench"};

  std::vector<PowerRow> serial_rows, parallel_rows;
  double t_serial = time_ms([&] { serial_rows = run_scenario_serial(cfg); });

#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
  double t_parallel =
      time_ms([&] { parallel_rows = run_scenario(cfg, max_threads); });

  bool identical = serial_rows.size() == parallel_rows.size();
  for (std::size_t i = 0; identical && i < serial_rows.size(); ++i)
    identical = serial_rows[i].rejection_rate == parallel_rows[i].rejection_rate &&
                serial_rows[i].k_used_mode == parallel_rows[i].k_used_mode;

  std::printf("scenario: %s, n=%zu, reps=%zu\n", cfg.dist.label().c_str(),
              cfg.n, cfg.reps);
  std::printf("serial reference: %8.1f ms\n", t_serial);
  std::printf("openmp (%2d thr) : %8.1f ms  (speedup %.2fx)\n", max_threads,
              t_parallel, t_serial / t_parallel);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
