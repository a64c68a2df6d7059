// Acceptance suite: reproduces the published simulation results at desk
// scale and checks the asymptotic properties numerically. Prints one
// pass/fail line per criterion; exits nonzero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "poistest/config.hpp"
#include "poistest/gof.hpp"
#include "poistest/mc.hpp"
#include "poistest/oracle.hpp"

using namespace poistest;

namespace {

constexpr std::uint64_t kSeed = 20240117;
constexpr std::size_t kReps = 10000;

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double cell_rate(const DistSpec& dist, std::size_t n, const TestMethod& test,
                 const std::string& id) {
  ScenarioConfig cfg{dist, n, kReps, {test}, 0.05, kSeed, id};
  return run_scenario(cfg)[0].rejection_rate;
}

// Both W and ID on the same replications.
std::pair<double, double> cell_rate_w_id(const DistSpec& dist, std::size_t n,
                                         const std::string& id) {
  ScenarioConfig cfg{dist,
                     n,
                     kReps,
                     {TestMethod{Method::W, 0}, TestMethod{Method::ID, 0}},
                     0.05,
                     kSeed,
                     id};
  auto rows = run_scenario(cfg);
  return {rows[0].rejection_rate, rows[1].rejection_rate};
}

std::vector<DistSpec> table1_specs() {
  std::vector<DistSpec> specs = {
      DistSpec::poisson(0.5),     DistSpec::poisson(1),
      DistSpec::poisson(2),       DistSpec::poisson(5),
      DistSpec::poisson(10),      DistSpec::poisson(15),
      DistSpec::binomial(30, 0.1),
      DistSpec::neg_binomial(1, 0.5),
      DistSpec::neg_binomial(4, 0.75),
      DistSpec::neg_binomial(10, 0.9),
      DistSpec::gen_hermite(1, 1.25, 2),
      DistSpec::gen_hermite(1, 1.5, 2),
      DistSpec::gen_hermite(1, 1.75, 2),
      DistSpec::discrete_uniform(3),
      DistSpec::discrete_uniform(5),
      DistSpec::discrete_uniform(10),
      DistSpec::discrete_uniform(15),
      DistSpec::discrete_weibull(0.5, 3),
      DistSpec::discrete_weibull(0.8, 5),
      DistSpec::gen_poisson(1, 0.1),
      DistSpec::gen_poisson(3, 0.25),
      DistSpec::gen_poisson(5, 0.4),
  };
  for (double theta : {0.6, 0.7, 0.8, 0.9}) {
    specs.push_back(DistSpec::log_series_shifted(theta));
    specs.push_back(DistSpec::log_series(theta));
  }
  specs.push_back(DistSpec::zero_inflated(DistSpec::binomial(5, 0.9), 0.2));
  specs.push_back(DistSpec::zero_inflated(DistSpec::binomial(5, 0.5), 0.3));
  specs.push_back(DistSpec::zero_inflated(DistSpec::binomial(5, 0.4), 0.5));
  specs.push_back(DistSpec::zero_inflated(DistSpec::neg_binomial(5, 0.9), 0.1));
  specs.push_back(DistSpec::zero_inflated(DistSpec::neg_binomial(5, 0.5), 0.3));
  specs.push_back(DistSpec::zero_inflated(DistSpec::neg_binomial(10, 0.4), 0.5));
  specs.push_back(DistSpec::zero_inflated(DistSpec::poisson(1), 0.2));
  specs.push_back(DistSpec::zero_inflated(DistSpec::poisson(1.5), 0.3));
  specs.push_back(DistSpec::zero_inflated(DistSpec::poisson(2), 0.5));
  return specs;
}

// ---------------------------------------------------------------------
// 1. Null significance level of W.
void criterion1() {
  struct Cell { double mu; std::size_t n; double expected; };
  const std::vector<Cell> cells = {
      {0.5, 20, 0.044}, {0.5, 50, 0.047}, {1, 20, 0.055}, {1, 50, 0.046},
      {2, 20, 0.053},   {2, 50, 0.048},   {5, 20, 0.054}, {5, 50, 0.052},
      {10, 20, 0.045},  {10, 50, 0.046},  {15, 20, 0.043}, {15, 50, 0.049},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cells) {
    double rate = cell_rate(DistSpec::poisson(c.mu), c.n, {Method::W, 0},
                            "acc1/mu=" + std::to_string(c.mu) +
                                "/n=" + std::to_string(c.n));
    if (std::fabs(rate - c.expected) > 0.015) {
      pass = false;
      char buf[128];
      std::snprintf(buf, sizeof(buf), " P(%g)/n=%zu got %.3f want %.3f;",
                    c.mu, c.n, rate, c.expected);
      detail += buf;
    }
  }
  report(1, "null level of W within 1.5 pp of the published table", pass, detail);
}

// ---------------------------------------------------------------------
// 2. Power against unambiguous alternatives.
void criterion2() {
  struct Row {
    DistSpec spec;
    double w[3];   // n = 20, 30, 50 (percent)
    double id[3];
  };
  const std::vector<Row> rows = {
      {DistSpec::neg_binomial(1, 0.5), {41.2, 55.2, 76.8}, {50.1, 65.8, 83.9}},
      {DistSpec::neg_binomial(4, 0.75), {11.2, 14.1, 21.1}, {16.6, 22.2, 32.2}},
      {DistSpec::discrete_uniform(10), {35.5, 54.9, 83.2}, {71.7, 86.9, 97.3}},
      {DistSpec::discrete_uniform(15), {56.6, 78.9, 97.4}, {95.3, 99.1, 100.0}},
      {DistSpec::discrete_weibull(0.5, 3), {56.0, 77.3, 97.6}, {24.3, 65.4, 94.3}},
      {DistSpec::discrete_weibull(0.8, 5), {100.0, 100.0, 100.0}, {99.0, 100.0, 100.0}},
      {DistSpec::log_series_shifted(0.6), {45.0, 59.9, 79.1}, {51.1, 66.7, 83.7}},
      {DistSpec::log_series_shifted(0.7), {63.3, 79.0, 93.9}, {70.1, 85.0, 96.0}},
      {DistSpec::log_series_shifted(0.8), {81.8, 93.8, 99.4}, {88.3, 96.5, 99.7}},
      {DistSpec::log_series_shifted(0.9), {94.9, 99.2, 100.0}, {98.6, 99.9, 100.0}},
      {DistSpec::log_series(0.6), {92.0, 98.4, 100.0}, {37.0, 39.9, 42.9}},
      {DistSpec::log_series(0.7), {79.8, 92.0, 99.1}, {32.1, 36.0, 42.5}},
      {DistSpec::log_series(0.8), {76.5, 88.9, 97.9}, {56.0, 68.7, 82.9}},
      {DistSpec::log_series(0.9), {91.7, 97.8, 99.9}, {91.5, 97.4, 99.8}},
  };
  const std::size_t ns[3] = {20, 30, 50};
  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    for (int i = 0; i < 3; ++i) {
      auto [w, id] = cell_rate_w_id(row.spec, ns[i],
                                    "acc2/" + row.spec.label() + "/n=" +
                                        std::to_string(ns[i]));
      if (std::fabs(100.0 * w - row.w[i]) > 3.0 ||
          std::fabs(100.0 * id - row.id[i]) > 3.0) {
        pass = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      " %s/n=%zu got W=%.1f ID=%.1f want W=%.1f ID=%.1f;",
                      row.spec.label().c_str(), ns[i], 100.0 * w, 100.0 * id,
                      row.w[i], row.id[i]);
        detail += buf;
      }
    }
  }
  report(2, "power within 3 pp for the unambiguous alternatives", pass, detail);
}

// ---------------------------------------------------------------------
// 3. Qualitative W-vs-ID ordering for parametrization-sensitive rows.
void criterion3() {
  struct Row { DistSpec spec; double w50, id50; };  // published, percent
  const std::vector<Row> rows = {
      {DistSpec::gen_hermite(1, 1.25, 2), 43.7, 78.8},
      {DistSpec::gen_hermite(1, 1.5, 2), 51.4, 81.4},
      {DistSpec::gen_hermite(1, 1.75, 2), 58.9, 83.8},
      {DistSpec::gen_poisson(1, 0.1), 13.6, 20.7},
      {DistSpec::gen_poisson(3, 0.25), 48.2, 79.3},
      {DistSpec::gen_poisson(5, 0.4), 90.6, 99.6},
      {DistSpec::zero_inflated(DistSpec::binomial(5, 0.9), 0.2), 75.4, 13.2},
      {DistSpec::zero_inflated(DistSpec::binomial(5, 0.5), 0.3), 90.8, 19.6},
      {DistSpec::zero_inflated(DistSpec::binomial(5, 0.4), 0.5), 98.2, 78.1},
      {DistSpec::zero_inflated(DistSpec::neg_binomial(5, 0.9), 0.1), 10.6, 13.4},
      {DistSpec::zero_inflated(DistSpec::neg_binomial(5, 0.5), 0.3), 98.5, 100.0},
      {DistSpec::zero_inflated(DistSpec::neg_binomial(10, 0.4), 0.5), 100.0, 100.0},
      {DistSpec::zero_inflated(DistSpec::poisson(1), 0.2), 17.1, 14.0},
      {DistSpec::zero_inflated(DistSpec::poisson(1.5), 0.3), 62.5, 48.5},
      {DistSpec::zero_inflated(DistSpec::poisson(2), 0.5), 99.4, 96.8},
  };
  auto sign_of = [](double diff, double deadband) {
    return diff > deadband ? 1 : (diff < -deadband ? -1 : 0);
  };
  int matches = 0;
  std::string detail;
  for (const auto& row : rows) {
    auto [w, id] = cell_rate_w_id(row.spec, 50, "acc3/" + row.spec.label());
    int paper = sign_of(row.w50 - row.id50, 0.3);
    int sim = sign_of(100.0 * (w - id), 1.0);
    bool match = paper == sim || paper == 0 || sim == 0;
    if (match) ++matches;
    char buf[160];
    std::snprintf(buf, sizeof(buf), " %s W=%.1f ID=%.1f (paper %.1f/%.1f)%s;",
                  row.spec.label().c_str(), 100.0 * w, 100.0 * id, row.w50,
                  row.id50, match ? "" : " MISMATCH");
    detail += buf;
  }
  bool pass = matches * 10 >= static_cast<int>(rows.size()) * 7;
  char head[64];
  std::snprintf(head, sizeof(head), "%d/%zu rows ordered as published;",
                matches, rows.size());
  report(3, "qualitative W vs ID ordering for GH/GP/ZB/ZNB/ZP rows", pass,
         head + detail);
}

// ---------------------------------------------------------------------
// 4. Efficiency under the shrinking alternative.
void criterion4() {
  struct Want { std::size_t n; double z0, id; };
  const std::vector<Want> wants = {{20, 0.19, 0.10}, {50, 0.45, 0.40}};
  bool pass = true;
  std::string detail;
  for (const auto& want : wants) {
    auto curves = power_curve_contiguous(
        0.5, DistSpec::binomial(1, 0.5), want.n, 0.05, kReps,
        {TestMethod{Method::Zk, 0}, TestMethod{Method::ID, 0}}, 0.05, kSeed,
        "acc4/n=" + std::to_string(want.n));
    double r_z0 = r_hat(curves[0]);
    double r_id = r_hat(curves[1]);
    char buf[128];
    std::snprintf(buf, sizeof(buf), " n=%zu rhat(Z0)=%.3f rhat(ID)=%.3f;",
                  want.n, r_z0, r_id);
    detail += buf;
    if (std::fabs(r_z0 - want.z0) > 0.03 || std::fabs(r_id - want.id) > 0.03)
      pass = false;
    if (!(r_z0 > 0.0 && r_z0 < 1.0 && r_id > 0.0 && r_id < 1.0)) pass = false;
  }
  report(4, "rhat efficiency within 0.03 of the published values", pass, detail);
}

// ---------------------------------------------------------------------
// 5. Asymptotic normality of the centered statistic under the null.
void criterion5() {
  // KS distance of Z_{n,0} under Poisson(1), n = 200.
  const std::size_t n = 200;
  Sampler sampler(DistSpec::poisson(1));
  std::vector<double> zs;
  zs.reserve(kReps);
  std::vector<long> values(n);
  for (std::size_t rep = 0; rep < kReps; ++rep) {
    RngStream stream = RngStream::substream(kSeed, fnv1a64("acc5/ks"), rep);
    for (auto& v : values) v = sampler.draw(stream);
    CountSample s(values);
    auto r = z_stat(s, 0);
    if (!r.degenerate) zs.push_back(r.statistic);
  }
  std::sort(zs.begin(), zs.end());
  double ks = 0.0;
  const double m = static_cast<double>(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    double cdf_val = normal_cdf(zs[i]);
    ks = std::max(ks, std::fabs(cdf_val - (i + 1) / m));
    ks = std::max(ks, std::fabs(cdf_val - i / m));
  }
  bool pass = ks < 0.02;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "KS=%.4f;", ks);
  std::string detail = buf;

  // Simulated variance of sqrt(n) T_hat^(k) against the limit variance.
  struct Case { double mu; unsigned k; };
  for (const Case& c : {Case{1, 0}, Case{2, 1}, Case{5, 2}}) {
    Sampler samp(DistSpec::poisson(c.mu));
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t rep = 0; rep < kReps; ++rep) {
      RngStream stream = RngStream::substream(
          kSeed, fnv1a64("acc5/var" + std::to_string(c.k)), rep);
      for (auto& v : values) v = samp.draw(stream);
      CountSample s(values);
      double v = std::sqrt(static_cast<double>(n)) * t_hat(s, c.k);
      sum += v;
      sum_sq += v * v;
    }
    double var = (sum_sq - sum * sum / kReps) / (kReps - 1);
    double fk = f_k(c.mu, c.k);
    double term = std::exp(-c.mu);
    for (unsigned j = 1; j <= c.k; ++j) term *= c.mu / j;
    double sigma2 = fk * (1.0 - fk) - term * term * c.mu;
    char b2[96];
    std::snprintf(b2, sizeof(b2), " (mu=%g,k=%u) var=%.4f limit=%.4f;", c.mu,
                  c.k, var, sigma2);
    detail += b2;
    if (std::fabs(var - sigma2) > 0.05 * sigma2) pass = false;
  }
  report(5, "normality: KS < 0.02 and variances within 5%", pass, detail);
}

// ---------------------------------------------------------------------
// 6. L1 sandwich and the antiderivative identity.
void criterion6() {
  bool pass = true;
  std::string detail;
  for (const auto& spec : table1_specs()) {
    double mu = mean(spec);
    double integral = adaptive_simpson(
        [&](double t) { return d_func(spec, t) * std::exp(-mu * t); }, 0.0,
        1.0, 1e-8);
    if (std::fabs(integral - (std::exp(-mu) - pmf(spec, 0))) > 1e-7) {
      pass = false;
      detail += " antiderivative identity fails for " + spec.label() + ";";
    }
    if (membership_check(spec, 2001).cls == SignClass::MixedSign) continue;
    for (unsigned k = 0; k <= 3; ++k) {
      if (!check_bounds(spec, k).holds) {
        pass = false;
        detail += " sandwich fails for " + spec.label() + " k=" +
                  std::to_string(k) + ";";
      }
    }
  }
  report(6, "L1 sandwich and antiderivative identity on every table spec",
         pass, detail);
}

// ---------------------------------------------------------------------
// 7. Drift and variance under the contiguous mixture.
void criterion7() {
  const std::size_t n = 10000;
  const double mu = 0.5, lambda = 2.0;
  Sampler base(DistSpec::poisson(mu));
  Sampler contam(DistSpec::binomial(1, 0.5));
  const double keep_prob = 1.0 - lambda / std::sqrt(static_cast<double>(n));

  double sum = 0.0, sum_sq = 0.0;
  std::vector<long> values(n);
  for (std::size_t rep = 0; rep < kReps; ++rep) {
    RngStream stream = RngStream::substream(kSeed, fnv1a64("acc7"), rep);
    for (auto& v : values) {
      double u = stream.next_u01();
      v = u < keep_prob ? base.draw(stream) : contam.draw(stream);
    }
    CountSample s(values);
    double v = std::sqrt(static_cast<double>(n)) * t_hat(s, 0);
    sum += v;
    sum_sq += v * v;
  }
  double mean_v = sum / kReps;
  double var_v = (sum_sq - sum * sum / kReps) / (kReps - 1);
  double drift = lambda * (std::exp(-mu) - 0.5);
  double sigma2 = std::exp(-2.0 * mu) * (std::exp(mu) - 1.0 - mu);
  double mc_se = std::sqrt(var_v / kReps);

  bool pass = std::fabs(mean_v - drift) <= 3.0 * mc_se &&
              std::fabs(var_v - sigma2) <= 0.05 * sigma2;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mean=%.4f drift=%.4f (3se=%.4f); var=%.4f limit=%.4f",
                mean_v, drift, 3.0 * mc_se, var_v, sigma2);
  report(7, "contiguous mixture drift and variance", pass, buf);
}

// ---------------------------------------------------------------------
// 8. Behaviour of the data-driven index.
void criterion8() {
  bool pass = true;
  std::string detail;
  if (!(select_k_for(10.0, 50) > 0)) {
    pass = false;
    detail += " k*(10, 50) not > 0;";
  }
  for (double xbar : {0.0, 0.3, 0.99}) {
    for (std::size_t sz : {5u, 50u, 1000u}) {
      if (select_k_for(xbar, sz) != 0) {
        pass = false;
        detail += " k* != 0 below unit mean;";
      }
    }
  }
  for (double xbar : {1.0, 5.0, 10.0, 15.0}) {
    unsigned k = select_k_for(xbar, 1000000);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " k*(%g, 1e6)=%u;", xbar, k);
    detail += buf;
    if (k != 0) pass = false;
  }
  report(8, "data-driven k* behaviour", pass, detail);
}

// ---------------------------------------------------------------------
// 9. Byte-identical CSV across repeated runs and thread counts.
void criterion9() {
  SimConfig cfg = parse_config_file(std::string(POISTEST_SOURCE_DIR) +
                                    "/configs/table1.cfg");
  std::string first = run_config_csv(cfg, 1);
  std::string second = run_config_csv(cfg, 1);
  std::string threaded = run_config_csv(cfg, 8);
  bool pass = first == second && first == threaded;
  report(9, "table1.cfg CSV is byte-identical across runs and 1 vs 8 threads",
         pass, pass ? "" : "outputs differ");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
