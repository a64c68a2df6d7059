#ifndef POISTEST_MC_HPP
#define POISTEST_MC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "poistest/dist.hpp"
#include "poistest/gof.hpp"

namespace poistest {

// One test to run on each replication.
struct TestMethod {
  Method kind = Method::W;
  unsigned k = 0;  // Zk only

  std::string name() const;
  static TestMethod parse(std::string_view text);  // "W", "ID", "Z0", "Z1", ...
};

TestResult apply_test(const TestMethod& test, const CountSample& sample,
                      double alpha);

// One Monte Carlo cell.
struct ScenarioConfig {
  DistSpec dist;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<TestMethod> tests;
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
  std::string scenario_id;
};

struct PowerRow {
  std::string scenario_id;
  std::string test;
  double rejection_rate = 0.0;
  double mc_stderr = 0.0;
  std::size_t reps = 0;
  unsigned k_used_mode = 0;
};

// OpenMP-parallel engine. Replications are independent work units on
// per-replication substreams; rejection counts merge by integer summation,
// so the output is identical for any thread count. threads <= 0 uses the
// runtime default.
std::vector<PowerRow> run_scenario(const ScenarioConfig& cfg, int threads = 0);

// Plain serial loop kept as the reference implementation; must produce
// output identical to run_scenario.
std::vector<PowerRow> run_scenario_serial(const ScenarioConfig& cfg);

// Poisson nulls on a mu grid; scenario ids get a "/mu=" suffix.
std::vector<PowerRow> level_sweep(double mu_from, double mu_to, double mu_step,
                                  std::size_t n, std::size_t reps,
                                  const std::vector<TestMethod>& tests,
                                  double alpha, std::uint64_t seed,
                                  const std::string& base_id, int threads = 0);

// Contiguous contamination of a Poisson: each draw comes from the base with
// probability 1 - lambda/sqrt(n), otherwise from the contaminant, which must
// share the base mean.
struct MixtureSpec {
  double base_mu = 0.0;
  DistSpec contaminant;
  double lambda = 0.0;

  void validate(std::size_t n) const;
};

// Stream consumption order per draw: one uniform for the component
// indicator, then one uniform for the selected component.
CountSample sample_contiguous(const MixtureSpec& mix, std::size_t n,
                              RngStream& stream);

struct PowerCurve {
  TestMethod test;
  std::vector<double> lambdas;
  std::vector<double> power;
};

// Empirical power along the lambda grid eps, 2*eps, ..., <= sqrt(n) - eps.
std::vector<PowerCurve> power_curve_contiguous(
    double base_mu, const DistSpec& contaminant, std::size_t n, double eps,
    std::size_t reps, const std::vector<TestMethod>& tests, double alpha,
    std::uint64_t seed, const std::string& base_id, int threads = 0);

// Mean of the curve's power values.
double r_hat(const PowerCurve& curve);

}  // namespace poistest

#endif
