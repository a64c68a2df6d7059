#include "poistest/mc.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace poistest {

namespace {

constexpr std::size_t kHistSize = 128;

struct Tally {
  std::vector<std::uint64_t> rejects;           // per test
  std::vector<std::vector<std::uint64_t>> khist;  // per test, k_used histogram

  explicit Tally(std::size_t n_tests)
      : rejects(n_tests, 0),
        khist(n_tests, std::vector<std::uint64_t>(kHistSize, 0)) {}

  void merge(const Tally& other) {
    for (std::size_t i = 0; i < rejects.size(); ++i) {
      rejects[i] += other.rejects[i];
      for (std::size_t k = 0; k < kHistSize; ++k)
        khist[i][k] += other.khist[i][k];
    }
  }
};

void tally_one(const std::vector<TestMethod>& tests, const CountSample& sample,
               double alpha, Tally& tally) {
  for (std::size_t ti = 0; ti < tests.size(); ++ti) {
    TestResult r = apply_test(tests[ti], sample, alpha);
    if (r.reject) ++tally.rejects[ti];
    ++tally.khist[ti][std::min<std::size_t>(r.k_used, kHistSize - 1)];
  }
}

std::vector<PowerRow> rows_from_tally(const ScenarioConfig& cfg,
                                      const Tally& tally) {
  std::vector<PowerRow> rows;
  rows.reserve(cfg.tests.size());
  for (std::size_t ti = 0; ti < cfg.tests.size(); ++ti) {
    PowerRow row;
    row.scenario_id = cfg.scenario_id;
    row.test = cfg.tests[ti].name();
    row.reps = cfg.reps;
    row.rejection_rate =
        static_cast<double>(tally.rejects[ti]) / static_cast<double>(cfg.reps);
    row.mc_stderr = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) /
                              static_cast<double>(cfg.reps));
    unsigned mode = 0;
    for (std::size_t k = 1; k < kHistSize; ++k)
      if (tally.khist[ti][k] > tally.khist[ti][mode])
        mode = static_cast<unsigned>(k);
    row.k_used_mode = mode;
    rows.push_back(std::move(row));
  }
  return rows;
}

void validate_scenario(const ScenarioConfig& cfg) {
  cfg.dist.validate();
  if (cfg.n < 1) throw std::invalid_argument("scenario: n must be >= 1");
  if (cfg.reps < 1) throw std::invalid_argument("scenario: reps must be >= 1");
  if (cfg.tests.empty()) throw std::invalid_argument("scenario: no tests");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("scenario: alpha must be in (0,1)");
}

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string TestMethod::name() const {
  switch (kind) {
    case Method::W: return "W";
    case Method::ID: return "ID";
    case Method::Zk: return "Z" + std::to_string(k);
  }
  return "?";
}

TestMethod TestMethod::parse(std::string_view text) {
  if (text == "W") return {Method::W, 0};
  if (text == "ID") return {Method::ID, 0};
  if (text.size() >= 2 && text[0] == 'Z') {
    unsigned k = 0;
    for (char c : text.substr(1)) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("bad test name '" + std::string(text) + "'");
      k = k * 10 + static_cast<unsigned>(c - '0');
    }
    return {Method::Zk, k};
  }
  throw std::invalid_argument("bad test name '" + std::string(text) + "'");
}

TestResult apply_test(const TestMethod& test, const CountSample& sample,
                      double alpha) {
  switch (test.kind) {
    case Method::W: return w_stat(sample, alpha);
    case Method::ID: return fisher_id(sample, alpha);
    case Method::Zk: return z_stat(sample, test.k, alpha);
  }
  throw std::logic_error("unreachable");
}

std::vector<PowerRow> run_scenario(const ScenarioConfig& cfg, int threads) {
  validate_scenario(cfg);
  const Sampler sampler(cfg.dist);
  const std::uint64_t key = fnv1a64(cfg.scenario_id);
  Tally total(cfg.tests.size());

#ifdef _OPENMP
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    Tally local(cfg.tests.size());
    std::vector<long> values(cfg.n);
#pragma omp for schedule(static)
    for (long long rep = 0; rep < static_cast<long long>(cfg.reps); ++rep) {
      RngStream stream = RngStream::substream(
          cfg.master_seed, key, static_cast<std::uint64_t>(rep));
      for (auto& v : values) v = sampler.draw(stream);
      CountSample sample(values);
      tally_one(cfg.tests, sample, cfg.alpha, local);
    }
#pragma omp critical
    total.merge(local);
  }
#else
  (void)threads;
  std::vector<long> values(cfg.n);
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    RngStream stream = RngStream::substream(cfg.master_seed, key, rep);
    for (auto& v : values) v = sampler.draw(stream);
    CountSample sample(values);
    tally_one(cfg.tests, sample, cfg.alpha, total);
  }
#endif
  return rows_from_tally(cfg, total);
}

std::vector<PowerRow> run_scenario_serial(const ScenarioConfig& cfg) {
  validate_scenario(cfg);
  const Sampler sampler(cfg.dist);
  const std::uint64_t key = fnv1a64(cfg.scenario_id);
  Tally total(cfg.tests.size());
  std::vector<long> values(cfg.n);
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    RngStream stream = RngStream::substream(cfg.master_seed, key, rep);
    for (auto& v : values) v = sampler.draw(stream);
    CountSample sample(values);
    tally_one(cfg.tests, sample, cfg.alpha, total);
  }
  return rows_from_tally(cfg, total);
}

std::vector<PowerRow> level_sweep(double mu_from, double mu_to, double mu_step,
                                  std::size_t n, std::size_t reps,
                                  const std::vector<TestMethod>& tests,
                                  double alpha, std::uint64_t seed,
                                  const std::string& base_id, int threads) {
  if (mu_step <= 0.0) throw std::invalid_argument("level_sweep: bad step");
  std::vector<PowerRow> rows;
  for (int i = 0;; ++i) {
    double mu = mu_from + i * mu_step;
    if (mu > mu_to + 1e-9) break;
    ScenarioConfig cfg{DistSpec::poisson(mu), n,    reps, tests,
                       alpha,                 seed, base_id + "/mu=" + format_num(mu)};
    auto cell = run_scenario(cfg, threads);
    rows.insert(rows.end(), cell.begin(), cell.end());
  }
  return rows;
}

void MixtureSpec::validate(std::size_t n) const {
  if (base_mu <= 0.0) throw std::invalid_argument("mixture: base mean must be > 0");
  contaminant.validate();
  if (std::fabs(mean(contaminant) - base_mu) >= 1e-9)
    throw std::invalid_argument("mixture: contaminant mean must equal base mean");
  if (!(lambda > 0.0 && lambda < std::sqrt(static_cast<double>(n))))
    throw std::invalid_argument("mixture: need 0 < lambda < sqrt(n)");
}

namespace {

void draw_contiguous(const Sampler& base, const Sampler& contaminant,
                     double keep_prob, std::vector<long>& values,
                     RngStream& stream) {
  for (auto& v : values) {
    double u = stream.next_u01();
    v = u < keep_prob ? base.draw(stream) : contaminant.draw(stream);
  }
}

}  // namespace

CountSample sample_contiguous(const MixtureSpec& mix, std::size_t n,
                              RngStream& stream) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  mix.validate(n);
  Sampler base(DistSpec::poisson(mix.base_mu));
  Sampler contaminant(mix.contaminant);
  double keep_prob = 1.0 - mix.lambda / std::sqrt(static_cast<double>(n));
  std::vector<long> values(n);
  draw_contiguous(base, contaminant, keep_prob, values, stream);
  return CountSample(std::move(values));
}

std::vector<PowerCurve> power_curve_contiguous(
    double base_mu, const DistSpec& contaminant, std::size_t n, double eps,
    std::size_t reps, const std::vector<TestMethod>& tests, double alpha,
    std::uint64_t seed, const std::string& base_id, int threads) {
  if (eps <= 0.0) throw std::invalid_argument("power curve: eps must be > 0");
  if (reps < 1) throw std::invalid_argument("power curve: reps must be >= 1");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Sampler base(DistSpec::poisson(base_mu));
  const Sampler contam(contaminant);

  std::vector<PowerCurve> curves(tests.size());
  for (std::size_t ti = 0; ti < tests.size(); ++ti) curves[ti].test = tests[ti];

  for (int i = 1;; ++i) {
    double lambda = i * eps;
    if (lambda > sqrt_n - eps + 1e-12) break;
    MixtureSpec mix{base_mu, contaminant, lambda};
    mix.validate(n);
    double keep_prob = 1.0 - lambda / sqrt_n;
    const std::uint64_t key =
        fnv1a64(base_id + "/l" + std::to_string(i));
    Tally total(tests.size());

#ifdef _OPENMP
    int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
    {
      Tally local(tests.size());
      std::vector<long> values(n);
#pragma omp for schedule(static)
      for (long long rep = 0; rep < static_cast<long long>(reps); ++rep) {
        RngStream stream =
            RngStream::substream(seed, key, static_cast<std::uint64_t>(rep));
        draw_contiguous(base, contam, keep_prob, values, stream);
        CountSample sample(values);
        tally_one(tests, sample, alpha, local);
      }
#pragma omp critical
      total.merge(local);
    }
#else
    (void)threads;
    std::vector<long> values(n);
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      RngStream stream = RngStream::substream(seed, key, rep);
      draw_contiguous(base, contam, keep_prob, values, stream);
      CountSample sample(values);
      tally_one(tests, sample, alpha, total);
    }
#endif
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
      curves[ti].lambdas.push_back(lambda);
      curves[ti].power.push_back(static_cast<double>(total.rejects[ti]) /
                                 static_cast<double>(reps));
    }
  }
  return curves;
}

double r_hat(const PowerCurve& curve) {
  if (curve.power.empty()) throw std::invalid_argument("r_hat: empty curve");
  double total = 0.0;
  for (double p : curve.power) total += p;
  return total / static_cast<double>(curve.power.size());
}

}  // namespace poistest
