#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bounds.hpp"
#include "density.hpp"
#include "quadrature.hpp"

using namespace varbound;

namespace {

double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

Mixture two_comp(double a1, GenGaussian g1, GenGaussian g2) {
    return Mixture({{a1, std::move(g1)}, {1.0 - a1, std::move(g2)}});
}

// Universal-lower-bound spot check used on several densities in this file.
void check_universal_lower(const Density& d) {
    const double var = variance_of(d);
    const double h = entropy_of(d);
    CHECK(var >= std::exp(2.0 * h) / kTwoPiE - 1e-8);
}

}  // namespace

TEST_CASE("a_theta: frozen values") {
    // Reference values computed with mpmath at 30 digits.
    CHECK(rel_err(1.0 / a_theta(2.0), 0.05854983152431916069) < 1e-12);  // 1/(2 pi e)
    CHECK(rel_err(a_theta(2.0), kTwoPiE) < 1e-12);
    CHECK(rel_err(1.0 / a_theta(1.0), 0.067667641618306345947) < 1e-12);  // 1/(2 e^2)
    CHECK(rel_err(1.0 / a_theta(1.0), std::exp(-2.0) / 2.0) < 1e-12);
    CHECK(rel_err(1.0 / a_theta(0.5), 0.1373672916655063522) < 1e-12);
    CHECK(rel_err(1.0 / a_theta(50.0), 0.080218073392443275183) < 1e-12);
    CHECK(rel_err(a_theta(0.3), 2.0635834897483263726) < 1e-12);
    CHECK(std::fabs(1.0 / a_theta(1e6) - 1.0 / 12.0) < 1e-4);  // uniform limit
    CHECK_THROWS_AS(a_theta(0.0), std::domain_error);
    CHECK_THROWS_AS(a_theta(-1.0), std::domain_error);
    // Far below the guarded range the log stays finite even when exp overflows.
    CHECK(std::isfinite(log_a_theta(1e-6)));
}

TEST_CASE("1/a_theta: monotone structure with minimum at theta = 2") {
    // Non-increasing on (0.05, 2], non-decreasing on [2, 50], 200 points each.
    double prev = 1.0 / a_theta(0.05);
    for (int i = 1; i < 200; ++i) {
        const double t = 0.05 + (2.0 - 0.05) * i / 199.0;
        const double v = 1.0 / a_theta(t);
        CHECK(v <= prev * (1.0 + 1e-14));
        prev = v;
    }
    prev = 1.0 / a_theta(2.0);
    for (int i = 1; i < 200; ++i) {
        const double t = 2.0 + (50.0 - 2.0) * i / 199.0;
        const double v = 1.0 / a_theta(t);
        CHECK(v >= prev * (1.0 - 1e-14));
        prev = v;
    }
    CHECK(std::fabs(1.0 / a_theta(2.0) - 1.0 / kTwoPiE) < 1e-10);
}

TEST_CASE("m_ratio: frozen values, continuity at 1, monotonicity") {
    CHECK(m_ratio(1.0) == 1.0);
    CHECK(rel_err(m_ratio(2.0), 1.0614756908460859771) < 1e-12);
    CHECK(rel_err(m_ratio(4.0), 1.2637407212158111242) < 1e-12);
    CHECK(rel_err(m_ratio(10.0), 1.8571348933459846107) < 1e-12);
    CHECK(rel_err(m_ratio(std::numbers::e), 1.1312255035558211493) < 1e-12);
    CHECK(std::fabs(m_ratio(10.0) - 1.86) < 0.005);

    // Stable through the removable singularity at r = 1.
    CHECK(std::fabs(m_ratio(1.0 + 1e-9) - 1.0) < 1e-15);
    CHECK(std::fabs(m_ratio(1.0 + 1e-12) - 1.0) < 1e-15);
    CHECK(m_ratio(1.0 + 1e-6) > 1.0);
    CHECK(m_ratio(1.0 + 1e-6) < m_ratio(1.0 + 1e-3));
    // Series and direct branches agree where they meet.
    CHECK(rel_err(m_ratio(1.0 + 0.999e-3), m_ratio(1.0 + 1.001e-3)) < 1e-9);

    // Strictly increasing and >= 1 on a log grid up to 1e4.
    double prev = m_ratio(1.0 + 1e-6);
    for (double r = 1.0 + 1e-5; r <= 1e4; r *= 1.25) {
        const double v = m_ratio(r);
        CHECK(v >= 1.0);
        CHECK(v > prev);
        prev = v;
    }

    CHECK_THROWS_AS(m_ratio(0.999), std::domain_error);
    CHECK_THROWS_AS(m_ratio(-3.0), std::domain_error);
}

TEST_CASE("b_factor: frozen values and floor") {
    CHECK(rel_err(b_factor({2.0}, {1.0}, 1.0), 1.0 / kTwoPiE) < 1e-12);
    CHECK(rel_err(b_factor({2.0, 2.0}, {0.5, 0.5}, 1.0), 1.0 / kTwoPiE) < 1e-12);
    // Gaussian (variance 1) + Laplace (variance 2) mixture factor at r = 2,
    // mpmath reference.
    CHECK(rel_err(b_factor({2.0, 1.0}, {0.5, 0.5}, 2.0), 0.066813373101689275093) < 1e-12);
    // Composition identity at r = 10.
    const double want = m_ratio(10.0) * std::exp(-0.5 * (log_a_theta(2.0) + log_a_theta(1.0)));
    CHECK(rel_err(b_factor({2.0, 1.0}, {0.5, 0.5}, 10.0), want) < 1e-13);

    // B >= 1/(2 pi e) on random admissible draws.
    std::mt19937_64 rng(20260816u);
    std::uniform_real_distribution<double> utheta(0.2, 8.0), uw(0.05, 1.0), ur(1.0, 50.0);
    for (int it = 0; it < 200; ++it) {
        const int n = 1 + static_cast<int>(rng() % 5);
        std::vector<double> thetas, alphas;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            thetas.push_back(utheta(rng));
            alphas.push_back(uw(rng));
            sum += alphas.back();
        }
        for (double& a : alphas) a /= sum;
        CHECK(b_factor(thetas, alphas, ur(rng)) >= 1.0 / kTwoPiE * (1.0 - 1e-12));
    }

    CHECK_THROWS_AS(b_factor({2.0}, {0.5, 0.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(b_factor({2.0, 1.0}, {0.6, 0.6}, 1.0), std::invalid_argument);
}

TEST_CASE("variance times a_theta equals entropy power across the shape grid") {
    for (double theta : {0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
        for (double beta : {0.25, 1.0, 4.0}) {
            const double lhs = gg_variance(theta, beta) * a_theta(theta);
            const double rhs = std::exp(2.0 * gg_entropy(theta, beta));
            CHECK(rel_err(lhs, rhs) < 1e-10);
        }
    }
}

TEST_CASE("reverse power-mean inequality on 1000 random weighted tuples") {
    std::mt19937_64 rng(77001u);
    std::uniform_real_distribution<double> uvar(0.02, 50.0), uw(0.05, 1.0);
    for (int it = 0; it < 1000; ++it) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::vector<double> v, a;
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            v.push_back(uvar(rng));
            a.push_back(uw(rng));
            wsum += a.back();
        }
        for (double& w : a) w /= wsum;
        double arith = 0.0, log_geo = 0.0, vmin = v[0], vmax = v[0];
        for (int i = 0; i < n; ++i) {
            arith += a[i] * v[i];
            log_geo += a[i] * std::log(v[i]);
            vmin = std::min(vmin, v[i]);
            vmax = std::max(vmax, v[i]);
        }
        const double r = vmax / vmin;
        CHECK(arith <= m_ratio(r) * std::exp(log_geo) * (1.0 + 1e-12));
    }
}

TEST_CASE("theorem 1 certificate: Gaussian and Laplace equality cases") {
    // Standard Gaussian: theta = 2, beta = 1/2 gives variance exactly 1.
    const Mixture gauss({{1.0, GenGaussian(0.0, 2.0, 0.5)}});
    const auto cg = certify_theorem1(gauss);
    CHECK(cg.tag == TheoremTag::thm1);
    CHECK(cg.passed());
    CHECK(rel_err(cg.variance, 1.0) < 1e-12);
    CHECK(rel_err(cg.entropy_power, kTwoPiE) < 1e-7);
    CHECK(std::fabs(cg.slack_lower) < 1e-7);
    CHECK(std::fabs(cg.slack_upper) < 1e-7);

    // Laplace: theta = 1, beta = 1; variance 2 and both ends of the sandwich
    // computable in closed form (entropy power 4 e^2).
    const Mixture lap({{1.0, GenGaussian(0.0, 1.0, 1.0)}});
    const auto cl = certify_theorem1(lap);
    CHECK(cl.passed());
    CHECK(rel_err(cl.variance, 2.0) < 1e-12);
    CHECK(rel_err(cl.entropy_power, 29.556224395722600909) < 1e-7);
    CHECK(rel_err(cl.upper, 2.0) < 1e-7);
    CHECK(std::fabs(cl.slack_upper) < 1e-6);
    CHECK(cl.slack_lower > 0.1);  // lower bound is strict off the Gaussian

    check_universal_lower(gauss);
    check_universal_lower(lap);
}

TEST_CASE("theorem 1 certificate: Gaussian + Laplace mixture, frozen pipeline values") {
    const auto mix = two_comp(0.5, GenGaussian(0.0, 2.0, 0.5), GenGaussian(0.0, 1.0, 1.0));
    const auto c = certify_theorem1(mix);
    CHECK(c.passed());
    CHECK(c.hypotheses_ok());
    CHECK(rel_err(c.variance, 1.5) < 1e-12);
    // mpmath quadrature reference for the mixture entropy.
    CHECK(std::fabs(c.entropy - 1.5779732527658150599) < 1e-7);
    CHECK(rel_err(c.entropy_power, 23.475246029554946415) < 1e-6);
    CHECK(rel_err(c.upper, 1.5684603716266044102) < 1e-6);
    CHECK(c.slack_upper > 0.0);
    CHECK(c.slack_lower > 0.0);
    check_universal_lower(mix);
}

TEST_CASE("theorem 1 certificate: random mixtures all pass") {
    std::mt19937_64 rng(31415u);
    std::uniform_real_distribution<double> utheta(0.5, 5.0), uw(0.1, 1.0), uv(0.1, 10.0);
    for (int it = 0; it < 30; ++it) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<MixtureComponent> comps;
        double wsum = 0.0;
        std::vector<double> ws;
        for (int i = 0; i < n; ++i) {
            ws.push_back(uw(rng));
            wsum += ws.back();
        }
        for (int i = 0; i < n; ++i) {
            const double theta = utheta(rng);
            // Choose beta to hit a target variance in [0.1, 10]:
            // var = beta^{-2/theta} * G, so beta = (G / var)^{theta/2}.
            const double g = gg_variance(theta, 1.0);
            const double beta = std::pow(g / uv(rng), theta / 2.0);
            comps.push_back({ws[i] / wsum, GenGaussian(0.0, theta, beta)});
        }
        const Mixture mix(std::move(comps));
        CHECK(mix.variance_ratio() <= 100.0 + 1e-9);
        const auto c = certify_theorem1(mix);
        CHECK(c.passed());
        CHECK(c.slack_lower >= -1e-7);
        CHECK(c.slack_upper >= -1e-7);
    }
}

TEST_CASE("theorem 1 certificate: scale covariance of the whole sandwich") {
    // Rescaling x -> x/gamma maps (theta, beta) -> (theta, beta gamma^theta).
    // Every variance-like quantity in the certificate scales by 1/gamma^2
    // while the ratio upper/lower and the pass verdict stay invariant.
    const double gamma = 3.7;
    const auto base = two_comp(0.35, GenGaussian(0.0, 1.5, 0.8), GenGaussian(0.0, 3.0, 2.0));
    const auto scaled = two_comp(0.35, GenGaussian(0.0, 1.5, 0.8 * std::pow(gamma, 1.5)),
                                 GenGaussian(0.0, 3.0, 2.0 * std::pow(gamma, 3.0)));
    const auto c0 = certify_theorem1(base);
    const auto c1 = certify_theorem1(scaled);
    const double s = gamma * gamma;
    CHECK(c0.passed());
    CHECK(c1.passed());
    CHECK(rel_err(c1.variance, c0.variance / s) < 1e-12);
    CHECK(rel_err(c1.entropy_power, c0.entropy_power / s) < 1e-7);
    CHECK(rel_err(c1.upper, c0.upper / s) < 1e-7);
    CHECK(rel_err(c1.lower, c0.lower / s) < 1e-7);
    CHECK(rel_err(c1.upper / c1.lower, c0.upper / c0.lower) < 1e-7);
}

TEST_CASE("theorem 1 certificate: combined mixture uses the uniform limit factor") {
    const Mixture mix({{0.5, GenGaussian(0.0, 2.0, 0.5)}, {0.5, Uniform(0.0, 1.0)}});
    const auto c = certify_theorem1(mix);
    CHECK(c.passed());
    bool flagged = false;
    for (const auto& h : c.hypothesis_report)
        flagged = flagged || h.name.find("limit extension") != std::string::npos;
    CHECK(flagged);
    // Coefficient must be M(r) * (1/(2 pi e))^{1/2} * (1/12)^{1/2}.
    const double r = mix.variance_ratio();
    const double factor = m_ratio(r) * std::sqrt(1.0 / kTwoPiE / 12.0);
    CHECK(rel_err(c.upper / c.entropy_power, factor) < 1e-12);
    check_universal_lower(mix);
}

TEST_CASE("corollary 2 certificate: single and identical uniforms achieve equality") {
    const Mixture u({{1.0, Uniform(0.0, 1.0)}});
    const auto c = certify_corollary2(u);
    CHECK(c.tag == TheoremTag::cor2);
    CHECK(c.passed());
    CHECK(rel_err(c.variance, 1.0 / 12.0) < 1e-12);
    CHECK(std::fabs(c.slack_upper) < 1e-8);
    CHECK(rel_err(c.entropy_power, 1.0) < 1e-8);

    const Mixture two({{0.5, Uniform(0.0, 2.0)}, {0.5, Uniform(0.0, 2.0)}});
    const auto c2 = certify_corollary2(two);
    CHECK(c2.passed());
    CHECK(std::fabs(c2.slack_upper) < 1e-8);
}

TEST_CASE("corollary 2 certificate: two-width mixture, frozen pipeline values") {
    const Mixture mix({{0.5, Uniform(0.0, 1.0)}, {0.5, Uniform(0.0, 0.5)}});
    const auto c = certify_corollary2(mix);
    CHECK(c.passed());
    CHECK(rel_err(c.variance, 5.0 / 24.0) < 1e-12);
    CHECK(std::fabs(c.entropy - 0.56233514461880835029) < 1e-8);
    CHECK(rel_err(c.entropy_power, 3.0792014356780040774) < 1e-7);
    CHECK(rel_err(c.upper, 0.32427602025770682667) < 1e-7);
    CHECK(rel_err(c.lower, 0.1802867252883888215) < 1e-7);
    CHECK(c.slack_upper > 0.0);
    check_universal_lower(mix);
}

TEST_CASE("corollary 2 certificate: family hypothesis honest, override informational") {
    const Mixture gg({{1.0, GenGaussian(0.0, 0.5, 1.0)}});
    const auto strict = certify_corollary2(gg);
    CHECK_FALSE(strict.hypotheses_ok());
    CHECK_FALSE(strict.passed());

    // Heavy-tailed shape 1/2 genuinely violates the uniform-mixture factor:
    // 1/A(1/2) = 0.1374 > 1/12, so the bound fails while the lower holds.
    const auto forced = certify_corollary2(gg, 1e-7, /*override_family=*/true);
    CHECK(forced.hypotheses_ok());
    CHECK_FALSE(forced.bounds_hold());
    CHECK_FALSE(forced.passed());
    CHECK(forced.slack_upper < 0.0);
    CHECK(forced.slack_lower > 0.0);
}

TEST_CASE("corollary 1 factor: thresholds, frozen values, relaxation property") {
    CHECK(rel_err(corollary1_factor({2.0}, {1.0}, 1.0), 1.0 / 12.0) < 1e-12);
    CHECK(rel_err(corollary1_factor({0.5}, {1.0}, 1.0), 2.0 * std::exp(4.0) / 15.0) < 1e-12);
    CHECK(rel_err(corollary1_factor({1.0, 2.0}, {0.5, 0.5}, 2.0), m_ratio(2.0) / 12.0) < 1e-12);
    CHECK(rel_err(corollary1_factor({1.0, 2.0}, {0.5, 0.5}, 10.0), 0.15476124111216538) < 1e-12);
    CHECK(rel_err(corollary1_factor({0.5, 2.0}, {0.5, 0.5}, 10.0), 13.519483938492186) < 1e-12);
    CHECK_THROWS_AS(corollary1_factor({0.3}, {1.0}, 1.0), hypothesis_error);

    // The simplification is a relaxation of the exact factor.
    std::mt19937_64 rng(90125u);
    std::uniform_real_distribution<double> utheta(0.5, 8.0), uw(0.05, 1.0), ur(1.0, 40.0);
    for (int it = 0; it < 200; ++it) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<double> thetas, alphas;
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            thetas.push_back(utheta(rng));
            alphas.push_back(uw(rng));
            wsum += alphas.back();
        }
        for (double& a : alphas) a /= wsum;
        const double r = ur(rng);
        CHECK(corollary1_factor(thetas, alphas, r) >=
              b_factor(thetas, alphas, r) * (1.0 - 1e-12));
    }
}

TEST_CASE("corollary 1 certificate on a shape >= 1 mixture") {
    const auto mix = two_comp(0.5, GenGaussian(0.0, 1.0, 1.0), GenGaussian(0.0, 2.0, 0.5));
    const auto c = certify_corollary1(mix);
    CHECK(c.tag == TheoremTag::cor1);
    CHECK(c.passed());
    const auto exact = certify_theorem1(mix);
    CHECK(c.upper >= exact.upper * (1.0 - 1e-12));
    CHECK_THROWS_AS(certify_corollary1(Mixture({{1.0, GenGaussian(0.0, 0.3, 1.0)}})),
                    hypothesis_error);
}

TEST_CASE("lower-only certificate has an infinite upper sentinel") {
    const Mixture gauss({{1.0, GenGaussian(0.0, 2.0, 0.5)}});
    const auto c = certify_lower_only(gauss);
    CHECK(c.tag == TheoremTag::lower_only);
    CHECK(std::isinf(c.upper));
    CHECK(std::isinf(c.slack_upper));
    CHECK(c.passed());
    CHECK(std::fabs(c.slack_lower) < 1e-7);
}

TEST_CASE("counterexample: frozen rows for the half-half mixture") {
    const auto rows = counterexample_report(0.5, 1.0, {1e-1, 1e-2, 1e-3, 1e-4});
    REQUIRE(rows.size() == 4);
    // mpmath references (30 digits) for variance and ratio.
    CHECK(rel_err(rows[0].variance, (0.5 + 50.0) / 12.0) < 1e-13);
    CHECK(rel_err(rows[0].ratio, 0.14708964317692357) < 1e-12);
    CHECK(rel_err(rows[1].ratio, 1.10188629578861) < 1e-12);
    CHECK(rel_err(rows[2].ratio, 10.499381415580566) < 1e-12);
    CHECK(rel_err(rows[3].ratio, 104.27308025886026) < 1e-12);
    // Limit entropy power column: e^{2 ln 2} / eps2 here.
    CHECK(rel_err(rows[0].entropy_power_limit, 40.0) < 1e-12);
    CHECK(rel_err(rows[3].entropy_power_limit, 40000.0) < 1e-12);
    // Ratio strictly increases as eps2 decreases.
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio > rows[i - 1].ratio);

    const double slope = counterexample_slope(rows, 1.0);
    CHECK(std::fabs(slope - (-0.95307972565712661482)) < 1e-9);
    CHECK(slope > -1.1);
    CHECK(slope < -0.9);
}

TEST_CASE("counterexample: degenerate row and steep-weight slope") {
    const auto deg = counterexample_report(0.5, 1.0, {1.0});
    REQUIRE(deg.size() == 1);
    CHECK(rel_err(deg[0].ratio, 1.0 / 12.0) < 1e-13);

    const auto rows = counterexample_report(0.9, 1.0, {1.0, 1e-1, 1e-2, 1e-3});
    // Leading degenerate row is excluded from the fit.
    const double slope = counterexample_slope(rows, 1.0);
    CHECK(std::fabs(slope - (-1.7578181529410515711)) < 1e-9);
    CHECK(slope > -1.9);
    CHECK(slope < -1.7);

    CHECK_THROWS_AS(counterexample_report(1.5, 1.0, {0.5}), std::domain_error);
    CHECK_THROWS_AS(counterexample_report(0.5, 1.0, {2.0}), std::domain_error);
    CHECK_THROWS_AS(counterexample_report(0.5, 1.0, {1e-3, 1e-2}), std::domain_error);
    CHECK_THROWS_AS(counterexample_slope(deg, 1.0), std::domain_error);
}

TEST_CASE("counterexample rows agree with the density machinery") {
    // The closed-form row must match the generic mixture pipeline.
    const Mixture mix({{0.5, Uniform(0.0, 1.0)}, {0.5, Uniform(0.0, 0.1)}});
    const auto rows = counterexample_report(0.5, 1.0, {0.1});
    CHECK(rel_err(mix.variance(), rows[0].variance) < 1e-12);
    const double h = entropy_of(mix);
    CHECK(std::fabs(h - 0.5 * std::log(rows[0].entropy_power)) < 1e-8);
    check_universal_lower(mix);
}

TEST_CASE("product bound: tight Gaussian tuples and mixed marginals") {
    const Mixture gauss({{1.0, GenGaussian(0.0, 2.0, 0.5)}});
    const Mixture lap({{1.0, GenGaussian(0.0, 1.0, 1.0)}});
    const auto cg = certify_theorem1(gauss);
    const auto cl = certify_theorem1(lap);

    const auto two_gauss = product_bound({cg, cg});
    CHECK(two_gauss.holds);
    CHECK(rel_err(two_gauss.det_covariance, 1.0) < 1e-10);
    CHECK(rel_err(two_gauss.c, 0.0034280827715261578) < 1e-6);  // (1/(2 pi e))^2
    CHECK(std::fabs(two_gauss.rel_slack) < 1e-6);

    const auto gl = product_bound({cg, cl});
    CHECK(gl.holds);
    CHECK(rel_err(gl.det_covariance, 2.0) < 1e-10);
    CHECK(std::fabs(gl.rel_slack) < 1e-6);  // both marginals are equalities

    const auto mixed = certify_theorem1(
        two_comp(0.5, GenGaussian(0.0, 2.0, 0.5), GenGaussian(0.0, 1.0, 1.0)));
    const auto three = product_bound({cg, cl, mixed});
    CHECK(three.holds);
    CHECK(three.rel_slack > 0.0);

    // Non-passing or upper-less marginals are rejected as not applicable.
    const auto lower_only = certify_lower_only(gauss);
    CHECK_THROWS_AS(product_bound({cg, lower_only}), hypothesis_error);
    auto broken = cg;
    broken.slack_lower = -1.0;
    CHECK_THROWS_AS(product_bound({broken}), hypothesis_error);
}

TEST_CASE("certificate tag strings round-trip") {
    for (auto tag : {TheoremTag::thm1, TheoremTag::cor1, TheoremTag::cor2, TheoremTag::thm2,
                     TheoremTag::thm3, TheoremTag::lower_only}) {
        CHECK(theorem_tag_from_string(to_string(tag)) == tag);
    }
    CHECK_THROWS_AS(theorem_tag_from_string("thm9"), std::invalid_argument);
}
