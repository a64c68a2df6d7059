#ifndef POISTEST_GOF_HPP
#define POISTEST_GOF_HPP

#include "poistest/dist.hpp"

namespace poistest {

enum class Method { Zk, W, ID };

struct TestResult {
  Method method = Method::Zk;
  double statistic = 0.0;
  unsigned k_used = 0;  // 0 for ID
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  bool degenerate = false;
};

// Poisson(mu) cdf at k: e^{-mu} (1 + mu + ... + mu^k / k!).
double f_k(double mu, unsigned k);

// f_k(sample mean) - F_n(k).
double t_hat(const CountSample& sample, unsigned k);

// Plug-in variance estimator; algebraically f_k(1-f_k) - e^{-2x} x^{2k+1}/(k!)^2
// evaluated at x = xbar. Clamped at zero when roundoff drives it negative.
double sigma_tilde_sq(double xbar, unsigned k);

TestResult z_stat(const CountSample& sample, unsigned k, double alpha = 0.05);

// Data-driven index: smallest k with I(xbar >= 1) sigma~ / (f_k^2 sqrt(n)) <= e.
unsigned select_k(const CountSample& sample);
unsigned select_k_for(double xbar, std::size_t n);

TestResult w_stat(const CountSample& sample, double alpha = 0.05);

// Fisher index of dispersion, two-sided chi-square(n-1) test.
TestResult fisher_id(const CountSample& sample, double alpha = 0.05);

double normal_cdf(double x);
double normal_quantile(double p);

double chisq_cdf(double x, unsigned df);
double chisq_quantile(double p, unsigned df);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

}  // namespace poistest

#endif
