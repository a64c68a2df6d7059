#ifndef POISTEST_ORACLE_HPP
#define POISTEST_ORACLE_HPP

#include <functional>

#include "poistest/dist.hpp"

namespace poistest {

// Adaptive Simpson with interval bisection, absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

// D(t, mu) = pgf'(t) - mu * pgf(t) with mu the spec's own mean.
// Identically zero exactly when the distribution is Poisson.
double d_func(const DistSpec& spec, double t);

// Integral of |D(t, mu)| over [0, 1].
double l1_distance(const DistSpec& spec);

struct BoundsReport {
  DistSpec spec;
  unsigned k = 0;
  double mu = 0.0;
  double t_abs_k = 0.0;  // |f_k(mu) - p(0) (1 + ... + mu^k/k!)|
  double l1 = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool holds = false;
};

// Evaluates both sides of the L1 sandwich around |T^(k)|.
BoundsReport check_bounds(const DistSpec& spec, unsigned k);

enum class SignClass { AllNonNegative, AllNonPositive, MixedSign };

struct SignReport {
  SignClass cls = SignClass::AllNonNegative;
  double t_witness = 0.0;  // a sign-change witness when MixedSign
};

// Grid test of whether D(t, mu) keeps a constant sign on [0, 1].
// Values within 1e-10 of zero count as zero; the all-zero function
// reports AllNonNegative.
SignReport membership_check(const DistSpec& spec, std::size_t grid_size);

const char* sign_class_name(SignClass cls);

}  // namespace poistest

#endif
