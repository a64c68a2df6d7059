#include "poistest/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace poistest {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double poisson_pmf(double mu, long x) {
  if (x < 0) return 0.0;
  if (mu == 0.0) return x == 0 ? 1.0 : 0.0;
  return std::exp(x * std::log(mu) - mu - std::lgamma(x + 1.0));
}

// Shortest decimal form that round-trips a double.
std::string num_string(double v) {
  if (v == static_cast<long long>(v) && std::fabs(v) < 1e15)
    return std::to_string(static_cast<long long>(v));
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return "0";
}

}  // namespace

DistSpec DistSpec::poisson(double mu) { return {Family::Poisson, {mu}, nullptr}; }
DistSpec DistSpec::binomial(long k, double p) {
  return {Family::Binomial, {static_cast<double>(k), p}, nullptr};
}
DistSpec DistSpec::neg_binomial(double k, double p) {
  return {Family::NegBinomial, {k, p}, nullptr};
}
DistSpec DistSpec::gen_hermite(double a, double b, long k) {
  return {Family::GenHermite, {a, b, static_cast<double>(k)}, nullptr};
}
DistSpec DistSpec::discrete_uniform(long nu) {
  return {Family::DiscreteUniform, {static_cast<double>(nu)}, nullptr};
}
DistSpec DistSpec::discrete_weibull(double q, double beta) {
  return {Family::DiscreteWeibull, {q, beta}, nullptr};
}
DistSpec DistSpec::log_series(double theta) {
  return {Family::LogSeries, {theta}, nullptr};
}
DistSpec DistSpec::log_series_shifted(double theta) {
  return {Family::LogSeriesShifted, {theta}, nullptr};
}
DistSpec DistSpec::gen_poisson(double mu1, double mu2) {
  return {Family::GenPoisson, {mu1, mu2}, nullptr};
}
DistSpec DistSpec::poisson_mixture(double mu1, double mu2) {
  return {Family::PoissonMixture, {mu1, mu2}, nullptr};
}
DistSpec DistSpec::zero_inflated(DistSpec inner_spec, double w) {
  DistSpec s;
  s.family = Family::ZeroInflated;
  s.params = {w};
  s.inner = std::make_shared<const DistSpec>(std::move(inner_spec));
  return s;
}

void DistSpec::validate() const {
  switch (family) {
    case Family::Poisson:
      require(params.size() == 1 && params[0] > 0.0, "Poisson: mu must be > 0");
      break;
    case Family::Binomial:
      require(params.size() == 2 && params[0] >= 1.0 &&
                  params[0] == std::floor(params[0]) && params[1] > 0.0 &&
                  params[1] < 1.0,
              "Binomial: need integer k >= 1 and p in (0,1)");
      break;
    case Family::NegBinomial:
      require(params.size() == 2 && params[0] > 0.0 && params[1] > 0.0 &&
                  params[1] < 1.0,
              "NegBinomial: need k > 0 and p in (0,1)");
      break;
    case Family::GenHermite:
      require(params.size() == 3 && params[0] > 0.0 && params[1] > 0.0 &&
                  params[2] >= 1.0 && params[2] == std::floor(params[2]),
              "GenHermite: need a > 0, b > 0, integer k >= 1");
      break;
    case Family::DiscreteUniform:
      require(params.size() == 1 && params[0] >= 1.0 &&
                  params[0] == std::floor(params[0]),
              "DiscreteUniform: need integer nu >= 1");
      break;
    case Family::DiscreteWeibull:
      require(params.size() == 2 && params[0] > 0.0 && params[0] < 1.0 &&
                  params[1] > 0.0,
              "DiscreteWeibull: need q in (0,1) and beta > 0");
      break;
    case Family::LogSeries:
    case Family::LogSeriesShifted:
      require(params.size() == 1 && params[0] > 0.0 && params[0] < 1.0,
              "LogSeries: need theta in (0,1)");
      break;
    case Family::GenPoisson:
      require(params.size() == 2 && params[0] > 0.0 && params[1] >= 0.0 &&
                  params[1] < 1.0,
              "GenPoisson: need mu1 > 0 and mu2 in [0,1)");
      break;
    case Family::PoissonMixture:
      require(params.size() == 2 && params[0] > 0.0 && params[1] > 0.0,
              "PoissonMixture: need mu1 > 0 and mu2 > 0");
      break;
    case Family::ZeroInflated:
      require(params.size() == 1 && params[0] > 0.0 && params[0] < 1.0 && inner,
              "ZeroInflated: need inner spec and w in (0,1)");
      inner->validate();
      break;
  }
}

bool DistSpec::operator==(const DistSpec& other) const {
  if (family != other.family || params != other.params) return false;
  if (!inner != !other.inner) return false;
  return !inner || *inner == *other.inner;
}

namespace {

const char* family_name(Family f) {
  switch (f) {
    case Family::Poisson: return "Poisson";
    case Family::Binomial: return "Binomial";
    case Family::NegBinomial: return "NegBinomial";
    case Family::GenHermite: return "GenHermite";
    case Family::DiscreteUniform: return "DiscreteUniform";
    case Family::DiscreteWeibull: return "DiscreteWeibull";
    case Family::LogSeries: return "LogSeries";
    case Family::LogSeriesShifted: return "LogSeriesShifted";
    case Family::GenPoisson: return "GenPoisson";
    case Family::PoissonMixture: return "PoissonMixture";
    case Family::ZeroInflated: return "ZeroInflated";
  }
  return "?";
}

const char* short_name(Family f) {
  switch (f) {
    case Family::Poisson: return "Poisson";
    case Family::Binomial: return "B";
    case Family::NegBinomial: return "NB";
    case Family::GenHermite: return "GH";
    case Family::DiscreteUniform: return "DU";
    case Family::DiscreteWeibull: return "DW";
    case Family::LogSeries: return "LS";
    case Family::LogSeriesShifted: return "LS-";
    case Family::GenPoisson: return "GP";
    case Family::PoissonMixture: return "MP";
    case Family::ZeroInflated: return "ZI";
  }
  return "?";
}

std::string join_params(const std::vector<double>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += num_string(params[i]);
  }
  return out;
}

}  // namespace

std::string DistSpec::label() const {
  if (family == Family::ZeroInflated) {
    // Z-prefixed shorthand for zero-inflated standard families.
    switch (inner->family) {
      case Family::Binomial:
        return "ZB(" + join_params(inner->params) + "," + num_string(params[0]) + ")";
      case Family::NegBinomial:
        return "ZNB(" + join_params(inner->params) + "," + num_string(params[0]) + ")";
      case Family::Poisson:
        return "ZP(" + join_params(inner->params) + "," + num_string(params[0]) + ")";
      default:
        return "ZI(" + inner->label() + "," + num_string(params[0]) + ")";
    }
  }
  return std::string(short_name(family)) + "(" + join_params(params) + ")";
}

std::string spec_string(const DistSpec& spec) {
  if (spec.family == Family::ZeroInflated) {
    return "ZeroInflated(" + spec_string(*spec.inner) + "):" +
           num_string(spec.params[0]);
  }
  return std::string(family_name(spec.family)) + ":" + join_params(spec.params);
}

namespace {

std::vector<double> parse_params(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok(text.substr(pos, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - pos));
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad numeric parameter '" + tok + "'");
    }
    if (used != tok.size())
      throw std::invalid_argument("bad numeric parameter '" + tok + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

DistSpec parse_spec(std::string_view text) {
  if (text.rfind("ZeroInflated(", 0) == 0) {
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = 12; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) { close = i; break; }
    }
    if (close == std::string_view::npos || close + 1 >= text.size() ||
        text[close + 1] != ':')
      throw std::invalid_argument("malformed zero-inflated spec '" +
                                  std::string(text) + "'");
    DistSpec inner = parse_spec(text.substr(13, close - 13));
    auto params = parse_params(text.substr(close + 2));
    if (params.size() != 1)
      throw std::invalid_argument("zero-inflated spec needs exactly one weight");
    DistSpec s = DistSpec::zero_inflated(std::move(inner), params[0]);
    s.validate();
    return s;
  }

  std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= text.size())
    throw std::invalid_argument("malformed spec '" + std::string(text) +
                                "', expected family:p1,p2,...");
  std::string name(text.substr(0, colon));
  auto params = parse_params(text.substr(colon + 1));

  auto make = [&](Family f) {
    DistSpec s;
    s.family = f;
    s.params = std::move(params);
    s.validate();
    return s;
  };

  if (name == "Poisson") return make(Family::Poisson);
  if (name == "Binomial") return make(Family::Binomial);
  if (name == "NegBinomial") return make(Family::NegBinomial);
  if (name == "GenHermite") return make(Family::GenHermite);
  if (name == "DiscreteUniform") return make(Family::DiscreteUniform);
  if (name == "DiscreteWeibull") return make(Family::DiscreteWeibull);
  if (name == "LogSeries") return make(Family::LogSeries);
  if (name == "LogSeriesShifted") return make(Family::LogSeriesShifted);
  if (name == "GenPoisson") return make(Family::GenPoisson);
  if (name == "PoissonMixture") return make(Family::PoissonMixture);

  // Convenience aliases; the last parameter is the zero-inflation weight.
  auto make_zi = [&](Family inner_family, std::size_t inner_np) {
    if (params.size() != inner_np + 1)
      throw std::invalid_argument("wrong parameter count for '" + name + "'");
    DistSpec inner;
    inner.family = inner_family;
    inner.params.assign(params.begin(), params.end() - 1);
    DistSpec s = DistSpec::zero_inflated(std::move(inner), params.back());
    s.validate();
    return s;
  };
  if (name == "ZB") return make_zi(Family::Binomial, 2);
  if (name == "ZNB") return make_zi(Family::NegBinomial, 2);
  if (name == "ZP") return make_zi(Family::Poisson, 1);

  throw std::invalid_argument("unknown distribution family '" + name + "'");
}

long support_min(const DistSpec& spec) {
  return spec.family == Family::LogSeries ? 1 : 0;
}

double pmf(const DistSpec& spec, long x) {
  spec.validate();
  if (x < 0) return 0.0;
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::Poisson:
      return poisson_pmf(p[0], x);
    case Family::Binomial: {
      long k = static_cast<long>(p[0]);
      if (x > k) return 0.0;
      return std::exp(std::lgamma(k + 1.0) - std::lgamma(x + 1.0) -
                      std::lgamma(k - x + 1.0) + x * std::log(p[1]) +
                      (k - x) * std::log1p(-p[1]));
    }
    case Family::NegBinomial:
      return std::exp(std::lgamma(x + p[0]) - std::lgamma(p[0]) -
                      std::lgamma(x + 1.0) + p[0] * std::log(p[1]) +
                      x * std::log1p(-p[1]));
    case Family::GenHermite: {
      long k = static_cast<long>(p[2]);
      double total = 0.0;
      for (long j = 0; j * k <= x; ++j)
        total += poisson_pmf(p[0], x - j * k) * poisson_pmf(p[1] / k, j);
      return total;
    }
    case Family::DiscreteUniform: {
      long nu = static_cast<long>(p[0]);
      return x <= nu ? 1.0 / (nu + 1.0) : 0.0;
    }
    case Family::DiscreteWeibull: {
      auto survival = [&](long v) {
        return v == 0 ? 1.0 : std::pow(p[0], std::pow(static_cast<double>(v), p[1]));
      };
      return survival(x) - survival(x + 1);
    }
    case Family::LogSeries: {
      if (x < 1) return 0.0;
      return -std::exp(x * std::log(p[0]) - std::log(static_cast<double>(x))) /
             std::log1p(-p[0]);
    }
    case Family::LogSeriesShifted: {
      DistSpec base = DistSpec::log_series(p[0]);
      return pmf(base, x + 1);
    }
    case Family::GenPoisson: {
      if (x == 0) return std::exp(-p[0]);
      return std::exp(std::log(p[0]) + (x - 1) * std::log(p[0] + p[1] * x) -
                      p[0] - p[1] * x - std::lgamma(x + 1.0));
    }
    case Family::PoissonMixture:
      return 0.5 * (poisson_pmf(p[0], x) + poisson_pmf(p[1], x));
    case Family::ZeroInflated: {
      double w = p[0];
      double base = (1.0 - w) * pmf(*spec.inner, x);
      return x == 0 ? w + base : base;
    }
  }
  return 0.0;
}

double cdf(const DistSpec& spec, long k) {
  if (k < 0) return 0.0;
  double total = 0.0;
  for (long x = 0; x <= k; ++x) total += pmf(spec, x);
  return std::min(total, 1.0);
}

double mean(const DistSpec& spec) {
  spec.validate();
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::Poisson: return p[0];
    case Family::Binomial: return p[0] * p[1];
    case Family::NegBinomial: return p[0] * (1.0 - p[1]) / p[1];
    case Family::GenHermite: return p[0] + p[1];
    case Family::DiscreteUniform: return p[0] / 2.0;
    case Family::DiscreteWeibull: {
      // E[X] = sum_{x>=1} P(X >= x)
      double total = 0.0;
      for (long x = 1;; ++x) {
        double s = std::pow(p[0], std::pow(static_cast<double>(x), p[1]));
        total += s;
        if (s < kTailTolerance && x > 1) break;
      }
      return total;
    }
    case Family::LogSeries:
      return -p[0] / ((1.0 - p[0]) * std::log1p(-p[0]));
    case Family::LogSeriesShifted:
      return mean(DistSpec::log_series(p[0])) - 1.0;
    case Family::GenPoisson: return p[0] / (1.0 - p[1]);
    case Family::PoissonMixture: return 0.5 * (p[0] + p[1]);
    case Family::ZeroInflated: return (1.0 - p[0]) * mean(*spec.inner);
  }
  return 0.0;
}

namespace {

// Series fallbacks, truncated when the remaining pmf mass drops below
// kTailTolerance; since t <= 1 the truncation error is bounded by it.
double pgf_series(const DistSpec& spec, double t) {
  double total = 0.0, mass = 0.0;
  long x0 = support_min(spec);
  double t_pow = std::pow(t, static_cast<double>(x0));
  for (long x = x0; x < 1000000; ++x) {
    double px = pmf(spec, x);
    mass += px;
    total += px * t_pow;
    t_pow *= t;
    if (1.0 - mass < kTailTolerance) break;
  }
  return total;
}

double pgf_deriv_series(const DistSpec& spec, double t) {
  double total = 0.0, mass = 0.0;
  long x0 = support_min(spec);
  for (long x = x0; x < 1000000; ++x) {
    double px = pmf(spec, x);
    mass += px;
    if (x >= 1) total += x * px * std::pow(t, static_cast<double>(x - 1));
    if (1.0 - mass < kTailTolerance) break;
  }
  return total;
}

}  // namespace

double pgf(const DistSpec& spec, double t) {
  spec.validate();
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::Poisson: return std::exp(p[0] * (t - 1.0));
    case Family::Binomial: return std::pow(1.0 - p[1] + p[1] * t, p[0]);
    case Family::NegBinomial:
      return std::pow(p[1] / (1.0 - (1.0 - p[1]) * t), p[0]);
    case Family::GenHermite: {
      double k = p[2];
      return std::exp(p[0] * (t - 1.0) + (p[1] / k) * (std::pow(t, k) - 1.0));
    }
    case Family::LogSeries:
      return std::log1p(-p[0] * t) / std::log1p(-p[0]);
    case Family::PoissonMixture:
      return 0.5 * (std::exp(p[0] * (t - 1.0)) + std::exp(p[1] * (t - 1.0)));
    case Family::ZeroInflated:
      return p[0] + (1.0 - p[0]) * pgf(*spec.inner, t);
    default:
      return pgf_series(spec, t);
  }
}

double pgf_deriv(const DistSpec& spec, double t) {
  spec.validate();
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::Poisson: return p[0] * std::exp(p[0] * (t - 1.0));
    case Family::Binomial:
      return p[0] * p[1] * std::pow(1.0 - p[1] + p[1] * t, p[0] - 1.0);
    case Family::NegBinomial: {
      double q = 1.0 - p[1];
      return p[0] * q * std::pow(p[1], p[0]) *
             std::pow(1.0 - q * t, -(p[0] + 1.0));
    }
    case Family::GenHermite: {
      double k = p[2];
      return pgf(spec, t) * (p[0] + p[1] * std::pow(t, k - 1.0));
    }
    case Family::LogSeries:
      return -p[0] / ((1.0 - p[0] * t) * std::log1p(-p[0]));
    case Family::PoissonMixture:
      return 0.5 * (p[0] * std::exp(p[0] * (t - 1.0)) +
                    p[1] * std::exp(p[1] * (t - 1.0)));
    case Family::ZeroInflated:
      return (1.0 - p[0]) * pgf_deriv(*spec.inner, t);
    default:
      return pgf_deriv_series(spec, t);
  }
}

Sampler::Sampler(const DistSpec& spec) {
  spec.validate();
  support_min_ = support_min(spec);
  double mass = 0.0;
  for (long x = support_min_; x < 1000000; ++x) {
    mass += pmf(spec, x);
    cdf_.push_back(std::min(mass, 1.0));
    if (1.0 - mass < kTailTolerance) break;
  }
}

long Sampler::draw_from(double u) const {
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;  // u beyond the truncated tail
  return support_min_ + static_cast<long>(it - cdf_.begin());
}

CountSample::CountSample(std::vector<long> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("empty sample");
  long double total = 0.0L;
  for (long v : values_) {
    if (v < 0) throw std::invalid_argument("negative count in sample");
    total += v;
  }
  mean_ = static_cast<double>(total / values_.size());
}

double CountSample::ecdf(long k) const {
  std::size_t count = 0;
  for (long v : values_)
    if (v <= k) ++count;
  return static_cast<double>(count) / static_cast<double>(values_.size());
}

CountSample sample(const DistSpec& spec, std::size_t n, RngStream& stream) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  Sampler sampler(spec);
  std::vector<long> values(n);
  for (auto& v : values) v = sampler.draw(stream);
  return CountSample(std::move(values));
}

}  // namespace poistest
