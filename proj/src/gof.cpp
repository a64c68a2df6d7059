#include "poistest/gof.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace poistest {

namespace {

// Partial sum 1 + mu + ... + mu^k/k!, multiplicative recurrence in
// increasing j so mu^k/k! never overflows on its own.
long double poisson_partial_sum(long double mu, unsigned k) {
  long double term = 1.0L, total = 1.0L;
  for (unsigned j = 1; j <= k; ++j) {
    term *= mu / j;
    total += term;
  }
  return total;
}

long double poisson_term(long double mu, unsigned k) {
  long double term = 1.0L;
  for (unsigned j = 1; j <= k; ++j) term *= mu / j;
  return term;
}

}  // namespace

double f_k(double mu, unsigned k) {
  if (mu < 0.0) throw std::domain_error("f_k: mu must be >= 0");
  long double m = mu;
  return static_cast<double>(std::exp(-m) * poisson_partial_sum(m, k));
}

double t_hat(const CountSample& sample, unsigned k) {
  return f_k(sample.mean(), k) - sample.ecdf(static_cast<long>(k));
}

double sigma_tilde_sq(double xbar, unsigned k) {
  if (xbar < 0.0) throw std::domain_error("sigma_tilde_sq: xbar must be >= 0");
  long double x = xbar;
  long double s = poisson_partial_sum(x, k);
  long double e2 = std::exp(-2.0L * x);
  long double v = e2 * (s * (std::exp(x) - s) -
                        x * poisson_term(x, k) * poisson_term(x, k));
  return v > 0.0L ? static_cast<double>(v) : 0.0;
}

TestResult z_stat(const CountSample& sample, unsigned k, double alpha) {
  TestResult r;
  r.method = Method::Zk;
  r.k_used = k;
  r.alpha = alpha;
  double var = sigma_tilde_sq(sample.mean(), k);
  if (var <= 0.0) {
    r.degenerate = true;
    return r;
  }
  double n = static_cast<double>(sample.size());
  r.statistic = std::sqrt(n) * t_hat(sample, k) / std::sqrt(var);
  r.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(r.statistic)));
  r.reject = r.p_value < alpha;
  return r;
}

unsigned select_k_for(double xbar, std::size_t n) {
  if (xbar < 1.0) return 0;
  // Termination guard; the condition must trigger far below this since
  // sigma~ <= 1/2 while f_k(xbar) -> 1.
  unsigned cap =
      static_cast<unsigned>(xbar + 10.0 * std::sqrt(xbar) + 20.0);
  double sqrt_n = std::sqrt(static_cast<double>(n));
  constexpr double e = 2.718281828459045;
  for (unsigned k = 0; k <= cap; ++k) {
    double fk = f_k(xbar, k);
    double ratio = std::sqrt(sigma_tilde_sq(xbar, k)) / (fk * fk * sqrt_n);
    if (ratio <= e) return k;
  }
  return cap;
}

unsigned select_k(const CountSample& sample) {
  return select_k_for(sample.mean(), sample.size());
}

TestResult w_stat(const CountSample& sample, double alpha) {
  TestResult r = z_stat(sample, select_k(sample), alpha);
  r.method = Method::W;
  return r;
}

TestResult fisher_id(const CountSample& sample, double alpha) {
  TestResult r;
  r.method = Method::ID;
  r.alpha = alpha;
  double xbar = sample.mean();
  if (xbar <= 0.0) {
    r.degenerate = true;
    return r;
  }
  long double ss = 0.0L;
  for (long v : sample.values()) {
    long double d = v - static_cast<long double>(xbar);
    ss += d * d;
  }
  r.statistic = static_cast<double>(ss / xbar);
  unsigned df = static_cast<unsigned>(sample.size()) - 1;
  if (df == 0) {
    r.degenerate = true;
    return r;
  }
  double g = chisq_cdf(r.statistic, df);
  r.p_value = 2.0 * std::min(g, 1.0 - g);
  r.reject = r.p_value < alpha;
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");

  // Acklam's rational approximation, then Halley refinement via erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    double err = normal_cdf(x) - p;
    double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const int itmax = 500;
  if (x < a + 1.0) {
    // Series representation.
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < itmax; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
  for (int i = 1; i <= itmax; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

double chisq_cdf(double x, unsigned df) {
  if (df == 0) throw std::domain_error("chisq_cdf: df must be >= 1");
  if (x <= 0.0) return 0.0;
  return gamma_p(df / 2.0, x / 2.0);
}

double chisq_quantile(double p, unsigned df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("chisq_quantile: p must be in (0,1)");
  if (df == 0) throw std::domain_error("chisq_quantile: df must be >= 1");
  double hi = df + 10.0 * std::sqrt(2.0 * df) + 50.0;
  while (chisq_cdf(hi, df) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (chisq_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace poistest
