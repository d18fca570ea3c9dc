#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "quadrature.hpp"
#include "special_functions.hpp"

namespace varbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_weights(const std::vector<double>& alphas, const char* who) {
    if (alphas.empty()) throw std::invalid_argument(std::string(who) + ": empty weight list");
    double sum = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument(std::string(who) + ": weights must be positive");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": weights must sum to 1");
}

// Per-component log of the inverse upper factor: -ln A(theta) for a
// generalized Gaussian component, ln(1/12) for a uniform one (the
// shape->infinity limit of the same family).
double log_inv_factor(const MixtureComponent& c) {
    if (const auto* g = std::get_if<GenGaussian>(&c.dist)) return -log_a_theta(g->theta());
    return -std::log(12.0);
}

}  // namespace

double log_a_theta(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::domain_error("a_theta: shape must be positive and finite");
    const double inv = 1.0 / theta;
    return std::log(4.0) - 2.0 * std::log(theta) + 3.0 * log_gamma(inv) -
           log_gamma(3.0 * inv) + 2.0 * inv;
}

double a_theta(double theta) { return std::exp(log_a_theta(theta)); }

double m_ratio(double r) {
    if (!(r >= 1.0) || !std::isfinite(r))
        throw std::domain_error("m_ratio: require finite r >= 1");
    const double u = r - 1.0;
    double g;
    if (std::abs(u) <= 1e-3) {
        // g = ln(1+u)/u - 1 = -u/2 + u^2/3 - u^3/4 + u^4/5 - ...
        g = u * (-0.5 + u * (1.0 / 3.0 + u * (-0.25 + u * 0.2)));
    } else {
        g = std::log1p(u) / u - 1.0;
    }
    // M(r) = (r-1) r^{1/(r-1)} / (e ln r) = e^g / (1+g) exactly.
    return std::exp(g) / (1.0 + g);
}

double b_factor(const std::vector<double>& thetas, const std::vector<double>& alphas, double r) {
    if (thetas.size() != alphas.size())
        throw std::invalid_argument("b_factor: shape and weight lists must have equal length");
    validate_weights(alphas, "b_factor");
    double log_b = std::log(m_ratio(r));
    for (std::size_t i = 0; i < thetas.size(); ++i) log_b -= alphas[i] * log_a_theta(thetas[i]);
    return std::exp(log_b);
}

std::string to_string(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::thm1: return "thm1";
        case TheoremTag::cor1: return "cor1";
        case TheoremTag::cor2: return "cor2";
        case TheoremTag::thm2: return "thm2";
        case TheoremTag::thm3: return "thm3";
        case TheoremTag::lower_only: return "lower_only";
    }
    return "lower_only";
}

TheoremTag theorem_tag_from_string(const std::string& name) {
    if (name == "thm1") return TheoremTag::thm1;
    if (name == "cor1") return TheoremTag::cor1;
    if (name == "cor2") return TheoremTag::cor2;
    if (name == "thm2") return TheoremTag::thm2;
    if (name == "thm3") return TheoremTag::thm3;
    if (name == "lower_only") return TheoremTag::lower_only;
    throw std::invalid_argument("unknown bound tag: " + name);
}

bool BoundCertificate::hypotheses_ok() const {
    return std::all_of(hypothesis_report.begin(), hypothesis_report.end(),
                       [](const HypothesisCheck& c) { return c.pass; });
}

bool BoundCertificate::bounds_hold() const {
    if (!(slack_lower >= -tol)) return false;
    if (std::isfinite(upper) && !(upper - variance >= -tol)) return false;
    if (std::isfinite(upper_tight) && !(upper_tight - variance >= -tol)) return false;
    return true;
}

BoundCertificate make_certificate(double variance, double entropy, double upper_factor,
                                  TheoremTag tag, std::vector<HypothesisCheck> checks,
                                  double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("certificate tolerance must be positive");
    BoundCertificate c;
    c.variance = variance;
    c.entropy = entropy;
    c.entropy_power = std::exp(2.0 * entropy);
    c.lower = c.entropy_power / kTwoPiE;
    c.upper = std::isfinite(upper_factor) ? upper_factor * c.entropy_power : kInf;
    c.tag = tag;
    c.hypothesis_report = std::move(checks);
    c.slack_lower = variance - c.lower;
    c.slack_upper = std::isfinite(c.upper) ? c.upper - variance : kInf;
    c.tol = tol;
    return c;
}

BoundCertificate certify_theorem1(const Mixture& mix, double tol) {
    const double r = mix.variance_ratio();
    double log_factor = std::log(m_ratio(r));
    bool pure_gg = true;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        const auto& c = mix.component(i);
        pure_gg = pure_gg && std::holds_alternative<GenGaussian>(c.dist);
        log_factor += c.alpha * log_inv_factor(c);
    }

    std::vector<HypothesisCheck> checks{
        {"common mean", true},
        {"weights normalized", true},
    };
    if (pure_gg) {
        checks.push_back({"component family: generalized Gaussian", true});
    } else {
        checks.push_back({"component family: generalized Gaussian with uniform limit extension "
                          "(uniform components use the limiting factor 1/12)",
                          true});
    }

    const double h = entropy_of(mix);
    return make_certificate(mix.variance(), h, std::exp(log_factor), TheoremTag::thm1,
                            std::move(checks), tol);
}

BoundCertificate certify_corollary2(const Mixture& mix, double tol, bool override_family) {
    const bool uniform = mix.pure_uniform();
    std::vector<HypothesisCheck> checks{
        {"common mean", true},
        {"weights normalized", true},
    };
    if (uniform) {
        checks.push_back({"components uniform", true});
    } else if (override_family) {
        checks.push_back({"components uniform: overridden by explicit bound selection", true});
    } else {
        checks.push_back({"components uniform", false});
    }

    const double factor = m_ratio(mix.variance_ratio()) / 12.0;
    const double h = entropy_of(mix);
    return make_certificate(mix.variance(), h, factor, TheoremTag::cor2, std::move(checks), tol);
}

double corollary1_factor(const std::vector<double>& thetas,
                         const std::vector<double>& alphas, double r) {
    if (thetas.size() != alphas.size())
        throw std::invalid_argument(
            "corollary1_factor: shape and weight lists must have equal length");
    validate_weights(alphas, "corollary1_factor");
    double theta_min = kInf;
    for (double t : thetas) {
        if (!(t > 0.0)) throw std::domain_error("corollary1_factor: shapes must be positive");
        theta_min = std::min(theta_min, t);
    }
    if (theta_min >= 1.0) return m_ratio(r) / 12.0;
    if (theta_min >= 0.5) return 2.0 * std::exp(4.0) / 15.0 * m_ratio(r);
    throw hypothesis_error(
        "simplified mixture factor not applicable: requires every shape >= 1/2");
}

BoundCertificate certify_corollary1(const Mixture& mix, double tol) {
    std::vector<double> thetas, alphas;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        const auto& c = mix.component(i);
        // A uniform component is the shape->infinity limit, so it never
        // constrains the minimum shape.
        thetas.push_back(std::holds_alternative<GenGaussian>(c.dist)
                             ? std::get<GenGaussian>(c.dist).theta()
                             : kInf);
        alphas.push_back(c.alpha);
    }
    const double theta_min = *std::min_element(thetas.begin(), thetas.end());
    const double factor = corollary1_factor(thetas, alphas, mix.variance_ratio());

    std::vector<HypothesisCheck> checks{
        {"common mean", true},
        {"weights normalized", true},
        {theta_min >= 1.0 ? "all shapes >= 1" : "all shapes >= 1/2", true},
    };
    const double h = entropy_of(mix);
    return make_certificate(mix.variance(), h, factor, TheoremTag::cor1, std::move(checks), tol);
}

BoundCertificate certify_lower_only(const Density& d, double tol) {
    const double var = variance_of(d);
    const double h = entropy_of(d);
    std::vector<HypothesisCheck> checks{{"finite second moment", std::isfinite(var)}};
    return make_certificate(var, h, kInf, TheoremTag::lower_only, std::move(checks), tol);
}

std::vector<CounterexampleRow> counterexample_report(double alpha1, double eps1,
                                                     const std::vector<double>& eps2_values) {
    if (!(alpha1 > 0.0) || !(alpha1 < 1.0))
        throw std::domain_error("counterexample: require 0 < alpha1 < 1");
    if (!(eps1 > 0.0) || !std::isfinite(eps1))
        throw std::domain_error("counterexample: require eps1 > 0");
    if (eps2_values.empty()) throw std::domain_error("counterexample: empty eps2 list");
    const double alpha2 = 1.0 - alpha1;
    const double hb = -alpha1 * std::log(alpha1) - alpha2 * std::log(alpha2);

    std::vector<CounterexampleRow> rows;
    double prev = kInf;
    for (double e2 : eps2_values) {
        if (!(e2 > 0.0) || e2 > eps1)
            throw std::domain_error("counterexample: each eps2 must satisfy 0 < eps2 <= eps1");
        if (e2 > prev)
            throw std::domain_error("counterexample: eps2 values must be non-increasing");
        prev = e2;

        CounterexampleRow row;
        row.eps2 = e2;
        row.variance = (alpha1 / (eps1 * eps1) + alpha2 / (e2 * e2)) / 12.0;
        // Two nested centered plateaus: height a1*eps1 + a2*eps2 on the inner
        // interval of length 1/eps1, height a2*eps2 on the remaining length
        // 1/eps2 - 1/eps1.
        const double inner = alpha1 * eps1 + alpha2 * e2;
        double h = -(1.0 / eps1) * inner * std::log(inner);
        if (e2 < eps1) {
            const double outer = alpha2 * e2;
            h -= (1.0 / e2 - 1.0 / eps1) * outer * std::log(outer);
        }
        row.entropy_power = std::exp(2.0 * h);
        row.ratio = row.variance / row.entropy_power;
        row.entropy_power_limit =
            std::exp(2.0 * hb - 2.0 * alpha1 * std::log(eps1) - 2.0 * alpha2 * std::log(e2));
        rows.push_back(row);
    }
    return rows;
}

double counterexample_slope(const std::vector<CounterexampleRow>& rows, double eps1) {
    std::vector<std::pair<double, double>> pts;  // (ln eps2, ln ratio)
    for (const auto& r : rows) {
        if (r.eps2 < eps1) pts.emplace_back(std::log(r.eps2), std::log(r.ratio));
    }
    if (pts.size() < 2)
        throw std::domain_error("counterexample slope: need at least two non-degenerate rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ProductBoundReport product_bound(const std::vector<BoundCertificate>& certs, double rel_tol) {
    if (certs.empty()) throw std::invalid_argument("product_bound: empty certificate list");
    ProductBoundReport rep;
    rep.det_covariance = 1.0;
    rep.entropy_power_k = 1.0;
    rep.c = 1.0;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = certs[i];
        if (!c.passed() || !std::isfinite(c.upper)) {
            std::ostringstream os;
            os << "product bound not applicable: marginal " << i
               << " must pass with a finite upper bound";
            throw hypothesis_error(os.str());
        }
        rep.det_covariance *= c.variance;
        rep.entropy_power_k *= c.entropy_power;
        rep.c *= c.upper / c.entropy_power;
    }
    const double bound = rep.c * rep.entropy_power_k;
    rep.rel_slack = (bound - rep.det_covariance) / rep.det_covariance;
    rep.holds = rep.rel_slack >= -rel_tol;
    return rep;
}

}  // namespace varbound
