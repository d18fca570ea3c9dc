#include "doctest.h"
#include "quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace varbound;

namespace {

// Minimal local density so these tests do not depend on the family classes.
class TestGaussian final : public Density {
public:
    explicit TestGaussian(double mu, double sigma) : mu_(mu), sigma_(sigma) {}
    double pdf(double x) const override { return std::exp(log_pdf(x)); }
    double log_pdf(double x) const override {
        const double z = (x - mu_) / sigma_;
        return -0.5 * z * z - std::log(sigma_ * std::sqrt(2.0 * std::numbers::pi));
    }
    Support support() const override { return Support::real_line(); }
    std::pair<double, double> integration_window() const override {
        return {mu_ - 12.0 * sigma_, mu_ + 12.0 * sigma_};
    }
    std::vector<double> breakpoints() const override { return {mu_}; }
    std::optional<double> mean_hint() const override { return mu_; }
    std::optional<double> mode_hint() const override { return mu_; }
    bool symmetric() const override { return true; }

private:
    double mu_, sigma_;
};

}  // namespace

TEST_CASE("single Kronrod panel integrates low-degree polynomials exactly") {
    auto r = integrate([](double x) { return x * x * x * x; }, -1.0, 1.0);
    CHECK(r.value == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(r.subdivisions == 0);
    auto r2 = integrate([](double) { return 5.0; }, 2.0, 9.0);
    CHECK(r2.value == doctest::Approx(35.0).epsilon(1e-15));
}

TEST_CASE("smooth integrands reach tight tolerances") {
    auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, QuadratureOptions{.abs_tol = 1e-12, .max_subdivisions = 20000});
    CHECK(std::fabs(r.value - (std::numbers::e - 1.0)) < 1e-12);
    auto osc = integrate([](double x) { return std::sin(10.0 * x); }, 0.0,
                         std::numbers::pi / 10.0 * 7.0, QuadratureOptions{.abs_tol = 1e-11, .max_subdivisions = 20000});
    CHECK(std::fabs(osc.value - (1.0 - std::cos(7.0 * std::numbers::pi)) / 10.0) < 1e-10);
}

TEST_CASE("kinked integrand converges; prescribed edges help") {
    auto f = [](double x) { return 0.5 * std::exp(-std::fabs(x)); };
    auto blind = integrate(f, -45.0, 45.0, QuadratureOptions{.abs_tol = 1e-11, .max_subdivisions = 20000});
    CHECK(std::fabs(blind.value - (1.0 - std::exp(-45.0))) < 1e-10);
    auto seeded = integrate_panels(f, {-45.0, 0.0, 45.0}, QuadratureOptions{.abs_tol = 1e-11, .max_subdivisions = 20000});
    CHECK(std::fabs(seeded.value - (1.0 - std::exp(-45.0))) < 1e-11);
    CHECK(seeded.subdivisions <= blind.subdivisions);
}

TEST_CASE("error estimate is honest on a battery of integrands") {
    struct Case {
        std::function<double(double)> f;
        double lo, hi, truth;
    };
    const std::vector<Case> cases = {
        {[](double x) { return std::exp(-x * x); }, -6.0, 6.0,
         std::sqrt(std::numbers::pi) * std::erf(6.0)},
        {[](double x) { return 1.0 / (1.0 + x * x); }, -8.0, 8.0, 2.0 * std::atan(8.0)},
        {[](double x) { return std::sqrt(std::fabs(x)); }, -1.0, 1.0, 4.0 / 3.0},
        {[](double x) { return std::log(x); }, 1e-6, 1.0, -1.0 + 1e-6 - 1e-6 * std::log(1e-6)},
    };
    for (const auto& c : cases) {
        auto r = integrate(c.f, c.lo, c.hi, QuadratureOptions{.abs_tol = 1e-9, .max_subdivisions = 20000});
        CHECK(std::fabs(r.value - c.truth) <= std::max(r.abs_error_estimate, 1e-9));
    }
}

TEST_CASE("interval additivity: random split points agree within 1e-9") {
    std::mt19937_64 rng(20260816);
    std::uniform_real_distribution<double> cut(-0.8, 0.8);
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x) + x * x; };
    const double whole = integrate(f, -1.0, 1.0, QuadratureOptions{.abs_tol = 1e-12, .max_subdivisions = 20000}).value;
    for (int i = 0; i < 100; ++i) {
        const double c = cut(rng);
        const double parts = integrate(f, -1.0, c, QuadratureOptions{.abs_tol = 5e-13, .max_subdivisions = 20000}).value +
                             integrate(f, c, 1.0, QuadratureOptions{.abs_tol = 5e-13, .max_subdivisions = 20000}).value;
        CHECK(std::fabs(whole - parts) < 1e-9);
    }
}

TEST_CASE("budget exhaustion raises convergence_error with the best estimate") {
    // Too few subdivisions for a hard cusp at an impossible tolerance.
    auto f = [](double x) { return 1.0 / std::sqrt(std::fabs(x) + 1e-14); };
    bool threw = false;
    try {
        integrate(f, -1.0, 1.0, QuadratureOptions{.abs_tol = 1e-14, .max_subdivisions = 8});
    } catch (const convergence_error& e) {
        threw = true;
        CHECK(e.best_value > 3.0);  // true integral ~ 4
        CHECK(e.best_value < 5.0);
        CHECK(e.abs_error_estimate > 1e-14);
    }
    CHECK(threw);
}

TEST_CASE("bad panel edges are rejected") {
    auto f = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate(f, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(f, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_panels(f, {0.0}, {}), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(integrate(f, 0.0, inf), std::invalid_argument);
}

TEST_CASE("moment and entropy functionals match Gaussian closed forms") {
    const double sigma = 1.7, mu = -2.3;
    TestGaussian g(mu, sigma);
    CHECK(std::fabs(total_mass(g) - 1.0) < 1e-10);
    CHECK(std::fabs(mean_of(g) - mu) < 1e-9);
    CHECK(std::fabs(variance_of(g) - sigma * sigma) < 1e-8);
    const double h_closed = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
    CHECK(std::fabs(entropy_of(g) - h_closed) < 1e-8);
}

TEST_CASE("entropy is translation invariant") {
    TestGaussian a(0.0, 0.9), b(57.0, 0.9);
    CHECK(std::fabs(entropy_of(a) - entropy_of(b)) < 1e-9);
}

TEST_CASE("entropy integrand guard: hard zero regions contribute nothing") {
    // Density with an exact-zero plateau inside the window.
    class Gapped final : public Density {
    public:
        double pdf(double x) const override {
            return (std::fabs(x) >= 1.0 && std::fabs(x) <= 2.0) ? 0.5 : 0.0;
        }
        Support support() const override { return {-2.0, 2.0}; }
        std::vector<double> breakpoints() const override { return {-1.0, 1.0}; }
    } d;
    CHECK(std::fabs(entropy_of(d) - std::log(2.0)) < 1e-9);
}
