#include "spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace varbound {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw spec_parse_error("density spec field \"" + field + "\": " + why);
}

double need_number(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "missing");
    const json& v = j.at(field);
    if (!v.is_number()) bad_field(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad_field(field, "must be finite");
    return x;
}

std::string need_string(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "missing");
    const json& v = j.at(field);
    if (!v.is_string()) bad_field(field, "expected a string");
    return v.get<std::string>();
}

MixtureComponent parse_component(const json& j) {
    if (!j.is_object()) bad_field("components", "each entry must be an object");
    const double alpha = need_number(j, "alpha");
    const std::string family = need_string(j, "family");
    if (family == "gengauss") {
        return {alpha, GenGaussian(need_number(j, "m"), need_number(j, "theta"),
                                   need_number(j, "beta"))};
    }
    if (family == "uniform") {
        return {alpha, Uniform(need_number(j, "m"), need_number(j, "epsilon"))};
    }
    bad_field("family", "unknown component family \"" + family + "\"");
}

json component_json(const MixtureComponent& c) {
    json j;
    j["alpha"] = c.alpha;
    if (const auto* g = std::get_if<GenGaussian>(&c.dist)) {
        j["family"] = "gengauss";
        j["m"] = g->m();
        j["theta"] = g->theta();
        j["beta"] = g->beta();
    } else {
        const auto& u = std::get<Uniform>(c.dist);
        j["family"] = "uniform";
        j["m"] = u.m();
        j["epsilon"] = u.epsilon();
    }
    return j;
}

}  // namespace

const Density& ParsedSpec::as_density() const {
    return std::visit([](const auto& d) -> const Density& { return d; }, density);
}

ParsedSpec parse_density_spec(const nlohmann::json& j) {
    if (!j.is_object()) throw spec_parse_error("density spec must be a JSON object");
    const std::string family = need_string(j, "family");
    if (family == "gengauss") {
        std::vector<MixtureComponent> one;
        one.push_back({1.0, GenGaussian(need_number(j, "m"), need_number(j, "theta"),
                                        need_number(j, "beta"))});
        return {family, Mixture(std::move(one))};
    }
    if (family == "uniform") {
        std::vector<MixtureComponent> one;
        one.push_back({1.0, Uniform(need_number(j, "m"), need_number(j, "epsilon"))});
        return {family, Mixture(std::move(one))};
    }
    if (family == "mixture") {
        if (!j.contains("components")) bad_field("components", "missing");
        const json& comps = j.at("components");
        if (!comps.is_array() || comps.empty()) bad_field("components", "expected a non-empty array");
        std::vector<MixtureComponent> parsed;
        parsed.reserve(comps.size());
        for (const json& c : comps) parsed.push_back(parse_component(c));
        return {family, Mixture(std::move(parsed))};
    }
    if (family == "triangular") {
        return {family, make_triangular(need_number(j, "b"), need_number(j, "s_l"),
                                        need_number(j, "s_r"))};
    }
    if (family == "raised_cosine") {
        return {family, make_raised_cosine(need_number(j, "m"), need_number(j, "s"))};
    }
    bad_field("family", "unknown family \"" + family + "\"");
}

ParsedSpec parse_density_spec_text(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw spec_parse_error("density spec: invalid JSON");
    return parse_density_spec(j);
}

nlohmann::json density_spec_json(const ParsedSpec& spec) {
    json j;
    j["family"] = spec.family;
    if (spec.family == "gengauss" || spec.family == "uniform") {
        json body = component_json(spec.mixture().component(0));
        body.erase("alpha");
        for (auto& [key, value] : body.items()) j[key] = value;
        return j;
    }
    if (spec.family == "mixture") {
        json arr = json::array();
        const Mixture& mix = spec.mixture();
        for (std::size_t i = 0; i < mix.size(); ++i) arr.push_back(component_json(mix.component(i)));
        j["components"] = std::move(arr);
        return j;
    }
    const auto& label = spec.shape().label;
    if (!label) throw std::invalid_argument("density has no specification form");
    j["family"] = label->family;
    for (const auto& [key, value] : label->params) j[key] = value;
    return j;
}

nlohmann::json certificate_json(const BoundCertificate& cert) {
    json j;
    j["theorem_tag"] = to_string(cert.tag);
    j["variance"] = cert.variance;
    j["entropy"] = cert.entropy;
    j["entropy_power"] = cert.entropy_power;
    j["lower"] = cert.lower;
    if (std::isfinite(cert.upper)) {
        j["upper"] = cert.upper;
        j["slack_upper"] = cert.slack_upper;
    } else {
        j["upper"] = nullptr;
        j["slack_upper"] = nullptr;
    }
    if (std::isfinite(cert.upper_tight)) j["upper_tight"] = cert.upper_tight;
    j["slack_lower"] = cert.slack_lower;
    j["tol"] = cert.tol;
    j["passed"] = cert.passed();
    json checks = json::array();
    for (const auto& h : cert.hypothesis_report) {
        checks.push_back(json{{"check", h.name}, {"pass", h.pass}});
    }
    j["hypothesis_report"] = std::move(checks);
    return j;
}

nlohmann::json certificate_json(const BoundCertificate& cert, const nlohmann::json& density_spec) {
    json j = certificate_json(cert);
    j["density"] = density_spec;
    return j;
}

nlohmann::json step_approx_json(const StepApproximation& sa) {
    json j;
    j["n"] = sa.n;
    j["grid_step"] = sa.grid_step;
    j["alphas"] = sa.alphas;
    j["m"] = sa.m;
    return j;
}

StepApproximation step_approx_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw spec_parse_error("step approximation must be a JSON object");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        bad_field("n", "expected an integer");
    StepApproximation sa;
    sa.n = j.at("n").get<int>();
    sa.grid_step = need_number(j, "grid_step");
    sa.m = need_number(j, "m");
    if (!j.contains("alphas") || !j.at("alphas").is_array()) bad_field("alphas", "expected an array");
    for (const json& a : j.at("alphas")) {
        if (!a.is_number()) bad_field("alphas", "expected numbers");
        sa.alphas.push_back(a.get<double>());
    }
    if (sa.n <= 0 || static_cast<int>(sa.alphas.size()) != sa.n)
        bad_field("alphas", "length must equal n");
    if (!(sa.grid_step > 0.0)) bad_field("grid_step", "must be positive");
    return sa;
}

nlohmann::json product_report_json(const ProductBoundReport& rep) {
    json j;
    j["det_covariance"] = rep.det_covariance;
    j["entropy_power_k"] = rep.entropy_power_k;
    j["c"] = rep.c;
    j["holds"] = rep.holds;
    j["rel_slack"] = rep.rel_slack;
    return j;
}

BoundCertificate certify_spec(const ParsedSpec& spec, std::optional<TheoremTag> override_tag,
                              double tol) {
    if (!override_tag) {
        if (spec.is_mixture()) {
            return spec.mixture().pure_uniform() ? certify_corollary2(spec.mixture(), tol)
                                                 : certify_theorem1(spec.mixture(), tol);
        }
        return spec.shape().symmetric() ? certify_theorem2(spec.shape(), tol)
                                        : certify_theorem3(spec.shape(), tol);
    }
    const TheoremTag tag = *override_tag;
    if (tag == TheoremTag::lower_only) return certify_lower_only(spec.as_density(), tol);
    const bool needs_mixture =
        tag == TheoremTag::thm1 || tag == TheoremTag::cor1 || tag == TheoremTag::cor2;
    if (needs_mixture && !spec.is_mixture())
        throw hypothesis_error("bound " + to_string(tag) +
                               " applies to mixture specifications, not \"" + spec.family + "\"");
    if (!needs_mixture && spec.is_mixture())
        throw hypothesis_error("bound " + to_string(tag) +
                               " applies to shape specifications, not \"" + spec.family + "\"");
    switch (tag) {
        case TheoremTag::thm1:
            return certify_theorem1(spec.mixture(), tol);
        case TheoremTag::cor1:
            return certify_corollary1(spec.mixture(), tol);
        case TheoremTag::cor2:
            return certify_corollary2(spec.mixture(), tol,
                                      /*override_family=*/!spec.mixture().pure_uniform());
        case TheoremTag::thm2:
            return certify_theorem2(spec.shape(), tol);
        case TheoremTag::thm3:
            return certify_theorem3(spec.shape(), tol);
        default:
            throw std::logic_error("certify_spec: unhandled tag");
    }
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<SweepRow> sweep_theta(double theta_min, double theta_max, int points, double alpha1,
                                  double theta1) {
    if (!(theta_min > 0.0) || !(theta_max > theta_min))
        throw std::invalid_argument("sweep_theta: need 0 < theta_min < theta_max");
    if (points < 2) throw std::invalid_argument("sweep_theta: need at least 2 points");
    if (!(alpha1 > 0.0) || !(alpha1 < 1.0))
        throw std::invalid_argument("sweep_theta: need 0 < alpha1 < 1");
    std::vector<SweepRow> rows;
    rows.reserve(points);
    const double step = (theta_max - theta_min) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double theta = (i + 1 == points) ? theta_max : theta_min + i * step;
        SweepRow row;
        row.theta = theta;
        row.inv_a = 1.0 / a_theta(theta);
        row.b_r1 = b_factor({theta1, theta}, {alpha1, 1.0 - alpha1}, 1.0);
        row.b_r10 = b_factor({theta1, theta}, {alpha1, 1.0 - alpha1}, 10.0);
        row.floor = 1.0 / kTwoPiE;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_theta_csv(const std::vector<SweepRow>& rows) {
    std::string out = "theta,inv_A,B_r1,B_r10,inv_two_pi_e\n";
    for (const auto& r : rows) {
        out += format_g12(r.theta) + "," + format_g12(r.inv_a) + "," + format_g12(r.b_r1) + "," +
               format_g12(r.b_r10) + "," + format_g12(r.floor) + "\n";
    }
    return out;
}

std::string counterexample_csv(const std::vector<CounterexampleRow>& rows) {
    std::string out = "eps2,variance,entropy_power,ratio\n";
    for (const auto& r : rows) {
        out += format_g12(r.eps2) + "," + format_g12(r.variance) + "," +
               format_g12(r.entropy_power) + "," + format_g12(r.ratio) + "\n";
    }
    return out;
}

std::string convergence_csv(const ConvergenceReport& rep) {
    std::string out = "n,var_gap,ep_ratio_gap\n";
    for (std::size_t i = 0; i < rep.n_values.size(); ++i) {
        out += std::to_string(rep.n_values[i]) + "," + format_g12(rep.var_gap[i]) + "," +
               format_g12(rep.ep_ratio_gap[i]) + "\n";
    }
    return out;
}

}  // namespace varbound
