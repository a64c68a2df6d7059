#include "poistest/oracle.hpp"

#include <cmath>

#include "poistest/gof.hpp"

namespace poistest {

namespace {

double simpson(double h, double fa, double fc, double fb) {
  return (fa + 4.0 * fc + fb) * h / 6.0;
}

double simpson_rec(const std::function<double(double)>& f, double a, double c,
                   double b, double fa, double fc, double fb, double whole,
                   double tol, int depth) {
  double ca = 0.5 * (a + c), cb = 0.5 * (c + b);
  double fca = f(ca), fcb = f(cb);
  double left = simpson(c - a, fa, fca, fc);
  double right = simpson(b - c, fc, fcb, fb);
  double err = (left + right - whole) / 15.0;
  if (std::fabs(err) <= tol || depth >= 50) return left + right + err;
  return simpson_rec(f, a, ca, c, fa, fca, fc, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, c, cb, b, fc, fcb, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  double c = 0.5 * (a + b);
  double fa = f(a), fc = f(c), fb = f(b);
  double whole = simpson(b - a, fa, fc, fb);
  return simpson_rec(f, a, c, b, fa, fc, fb, whole, tol, 0);
}

double d_func(const DistSpec& spec, double t) {
  double mu = mean(spec);
  return pgf_deriv(spec, t) - mu * pgf(spec, t);
}

double l1_distance(const DistSpec& spec) {
  return adaptive_simpson([&](double t) { return std::fabs(d_func(spec, t)); },
                          0.0, 1.0, 1e-8);
}

BoundsReport check_bounds(const DistSpec& spec, unsigned k) {
  BoundsReport r;
  r.spec = spec;
  r.k = k;
  r.mu = mean(spec);
  double s = f_k(r.mu, k) * std::exp(r.mu);  // 1 + mu + ... + mu^k/k!
  r.t_abs_k = std::fabs(f_k(r.mu, k) - pmf(spec, 0) * s);
  r.l1 = l1_distance(spec);
  r.lower = r.t_abs_k / s;
  r.upper = std::exp(r.mu) * r.t_abs_k;
  const double tol = 1e-7;
  r.holds = r.lower - tol <= r.l1 && r.l1 <= r.upper + tol;
  return r;
}

SignReport membership_check(const DistSpec& spec, std::size_t grid_size) {
  const double band = 1e-10;
  SignReport r;
  bool has_pos = false, has_neg = false;
  double first_pos = 0.0, first_neg = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    double t = grid_size > 1
                   ? static_cast<double>(i) / static_cast<double>(grid_size - 1)
                   : 0.0;
    double v = d_func(spec, t);
    if (v > band && !has_pos) { has_pos = true; first_pos = t; }
    if (v < -band && !has_neg) { has_neg = true; first_neg = t; }
  }
  if (has_pos && has_neg) {
    r.cls = SignClass::MixedSign;
    r.t_witness = std::max(first_pos, first_neg);
  } else if (has_neg) {
    r.cls = SignClass::AllNonPositive;
  } else {
    r.cls = SignClass::AllNonNegative;
  }
  return r;
}

const char* sign_class_name(SignClass cls) {
  switch (cls) {
    case SignClass::AllNonNegative: return "AllNonNegative";
    case SignClass::AllNonPositive: return "AllNonPositive";
    case SignClass::MixedSign: return "MixedSign";
  }
  return "?";
}

}  // namespace poistest
