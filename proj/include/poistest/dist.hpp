#ifndef POISTEST_DIST_HPP
#define POISTEST_DIST_HPP

#include <memory>
#include <string>
#include <vector>

#include "poistest/rng.hpp"

namespace poistest {

enum class Family {
  Poisson,
  Binomial,
  NegBinomial,
  GenHermite,
  DiscreteUniform,
  DiscreteWeibull,
  LogSeries,
  LogSeriesShifted,
  GenPoisson,
  PoissonMixture,
  ZeroInflated,
};

// Tagged description of a count distribution family plus parameters.
// Parametrizations:
//   Poisson(mu)
//   Binomial(k, p)                  mean kp
//   NegBinomial(k, p)               failures before the k-th success, mean k(1-p)/p
//   GenHermite(a, b, k)             X = N1 + k*N2, N1 ~ Poisson(a), N2 ~ Poisson(b/k)
//   DiscreteUniform(nu)             uniform on {0, ..., nu}
//   DiscreteWeibull(q, beta)        survival form P(X >= x) = q^(x^beta)
//   LogSeries(theta)                support {1, 2, ...}, pmf proportional to theta^x / x
//   LogSeriesShifted(theta)         LogSeries translated onto {0, 1, ...}
//   GenPoisson(mu1, mu2)            Consul-Jain, mu2 in [0, 1)
//   PoissonMixture(mu1, mu2)        equal-weight mixture of two Poissons
//   ZeroInflated(inner, w)          extra mass w at zero atop `inner`
struct DistSpec {
  Family family = Family::Poisson;
  std::vector<double> params;
  std::shared_ptr<const DistSpec> inner;  // ZeroInflated only

  static DistSpec poisson(double mu);
  static DistSpec binomial(long k, double p);
  static DistSpec neg_binomial(double k, double p);
  static DistSpec gen_hermite(double a, double b, long k);
  static DistSpec discrete_uniform(long nu);
  static DistSpec discrete_weibull(double q, double beta);
  static DistSpec log_series(double theta);
  static DistSpec log_series_shifted(double theta);
  static DistSpec gen_poisson(double mu1, double mu2);
  static DistSpec poisson_mixture(double mu1, double mu2);
  static DistSpec zero_inflated(DistSpec inner_spec, double w);

  // Throws std::invalid_argument when a parameter is out of its domain.
  void validate() const;

  // Display string in the notation of the simulation tables, e.g. "NB(1,0.5)".
  std::string label() const;

  bool operator==(const DistSpec& other) const;
};

// Canonical machine-readable form, grammar `Family:p1,p2,...`;
// zero-inflated specs print as `ZeroInflated(<inner>):w`. Round-trips
// through parse_spec exactly.
std::string spec_string(const DistSpec& spec);
DistSpec parse_spec(std::string_view text);

double pmf(const DistSpec& spec, long x);
double cdf(const DistSpec& spec, long k);
double mean(const DistSpec& spec);
double pgf(const DistSpec& spec, double t);
double pgf_deriv(const DistSpec& spec, double t);

// Smallest support point (1 for LogSeries, otherwise 0).
long support_min(const DistSpec& spec);

// Cumulative tail mass below which series are truncated.
inline constexpr double kTailTolerance = 1e-12;

// Inverse-transform sampler: precomputed cdf table, one uniform per draw.
// Identical output for a fixed stream regardless of platform or threading.
class Sampler {
 public:
  explicit Sampler(const DistSpec& spec);

  long draw(RngStream& stream) const {
    return draw_from(stream.next_u01());
  }

  // Smallest x with cdf(x) >= u.
  long draw_from(double u) const;

 private:
  std::vector<double> cdf_;
  long support_min_ = 0;
};

// An ordered sample of natural numbers with cached mean.
class CountSample {
 public:
  explicit CountSample(std::vector<long> values);

  double mean() const { return mean_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<long>& values() const { return values_; }

  // Empirical cdf F_n(k).
  double ecdf(long k) const;

 private:
  std::vector<long> values_;
  double mean_ = 0.0;
};

// n i.i.d. draws by cdf inversion.
CountSample sample(const DistSpec& spec, std::size_t n, RngStream& stream);

}  // namespace poistest

#endif
