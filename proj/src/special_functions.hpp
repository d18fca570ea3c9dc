#pragma once

#include <stdexcept>

// Gamma-family special functions on the positive real axis, accurate enough
// to drive the bound coefficients: Gamma to ~1e-13 relative, digamma and the
// harmonic-difference series phi to 1e-10 absolute.  Complex arguments and
// the negative axis are out of scope.

namespace varbound {

// Euler-Mascheroni constant (mpmath, 50 digits).
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243104215933593992;

// Controls truncation of the series behind phi() and digamma().
// rel_tol must lie in (0, 1e-3); max_terms must be >= 1000.
struct SeriesTolerance {
    double rel_tol = 1e-12;
    int max_terms = 1000000;
};

// Gamma(t), t > 0.  Relative error <= 1e-12 on [1e-3, 170]; overflows to
// +inf past ~171.62 (use log_gamma there).  Throws std::domain_error for
// t <= 0 or non-finite t.
double gamma_fn(double t);

// ln Gamma(t), t > 0, evaluated in log space for every magnitude (no
// overflow for large t).  Relative error <= 1e-12.
double log_gamma(double t);

// psi_0(z) = -[1/z + euler_gamma + sum_{n>=1} (1/(n+z) - 1/n)], z > 0.
// Absolute error <= 1e-10.
double digamma(double z, const SeriesTolerance& tol = {});

// phi(x) = sum_{n>=1} (1/n - 1/(n+x)) = sum_{n>=1} x/(n(n+x)), x >= 0.
// Satisfies phi(x) = digamma(x+1) + euler_gamma.  Absolute error <= 1e-10.
double phi(double x, const SeriesTolerance& tol = {});

// Truncated series sum_{n=1}^{terms} x/(n(n+x)) with no tail correction.
// All terms are positive, so the partial sums increase toward phi(x).
double phi_partial_sum(double x, int terms);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a),
// a > 0, x >= 0.  Used to bound discarded density tails analytically.
double gamma_q(double a, double x);

}  // namespace varbound
