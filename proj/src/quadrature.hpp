#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "density.hpp"

// Adaptive Gauss-Kronrod (7-15) integration with an embedded error estimate,
// plus the moment/entropy functionals over Density objects.  Panels are
// seeded at density breakpoints so kinks and jumps never straddle a rule.

namespace varbound {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    // Convergence when err <= max(abs_tol, rel_tol * |value|); the relative
    // floor keeps large-magnitude integrals (variances ~ 1e5) reachable
    // despite the per-panel roundoff floor.
    double rel_tol = 1e-12;
    int max_subdivisions = 20000;
};

// Raised when the subdivision budget is exhausted before the error estimate
// reaches abs_tol; carries the best estimate so far.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double best, double err)
        : std::runtime_error(msg), best_value(best), abs_error_estimate(err) {}
    double best_value;
    double abs_error_estimate;
};

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

// Same, but with prescribed initial panel edges (ascending, >= 2 entries).
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& edges,
                                  const QuadratureOptions& opts = {});

// Initial panel edges for a density: integration window clipped around its
// interior breakpoints.
std::vector<double> panel_edges(const Density& d);

// First moment int x p(x) dx over the effective window.
double mean_of(const Density& d, double abs_tol = 1e-10);

// Second central moment.  The mean is integrated first unless the family is
// symmetric, in which case the declared center is exact by construction.
double variance_of(const Density& d, double abs_tol = 1e-10);

// Differential entropy -int p ln p in nats; integrand clamped to zero where
// the pdf underflows (p < 1e-300).
double entropy_of(const Density& d, double abs_tol = 1e-9);

// int p over the window; used to verify normalization before certifying.
double total_mass(const Density& d, double abs_tol = 1e-10);

}  // namespace varbound
