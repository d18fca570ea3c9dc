#include "density.hpp"

#include <algorithm>
#include <cmath>

#include "special_functions.hpp"

namespace varbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Discarded-tail budget for window truncation; the assertion target is 1e-12,
// the chooser aims one decade lower.
constexpr double kTailBudget = 1e-13;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite parameter");
}

}  // namespace

double Density::log_pdf(double x) const {
    const double p = pdf(x);
    return p > 0.0 ? std::log(p) : -kInf;
}

std::pair<double, double> Density::integration_window() const {
    const Support s = support();
    if (!s.bounded())
        throw std::logic_error("Density: unbounded support requires an integration_window override");
    return {s.lo, s.hi};
}

// ---- generalized Gaussian ----

double gg_log_normalizer(double theta, double beta) {
    if (!std::isfinite(theta) || theta <= 0.0 || !std::isfinite(beta) || beta <= 0.0)
        throw std::domain_error("gg_normalizer: need theta > 0 and beta > 0");
    return std::log(2.0) - std::log(beta) / theta - std::log(theta) + log_gamma(1.0 / theta);
}

double gg_normalizer(double theta, double beta) { return std::exp(gg_log_normalizer(theta, beta)); }

double gg_variance(double theta, double beta) {
    if (!std::isfinite(theta) || theta <= 0.0 || !std::isfinite(beta) || beta <= 0.0)
        throw std::domain_error("gg_variance: need theta > 0 and beta > 0");
    return std::exp(-2.0 / theta * std::log(beta) + log_gamma(3.0 / theta) - log_gamma(1.0 / theta));
}

double gg_entropy(double theta, double beta) {
    return gg_log_normalizer(theta, beta) + 1.0 / theta;
}

GenGaussian::GenGaussian(double m, double theta, double beta) : m_(m), theta_(theta), beta_(beta) {
    check_finite(m, "GenGaussian");
    log_z_ = gg_log_normalizer(theta, beta);  // validates theta, beta
    // Truncate where beta |x-m|^theta >= T.  T starts at 45 and grows until
    // the regularized upper incomplete gamma of the widest moment integrand
    // (shape max(3/theta, 1 + 1/theta)) certifies a sub-1e-12 relative tail.
    const double shape = std::max(3.0 / theta_, 1.0 + 1.0 / theta_);
    double t = 45.0;
    while (gamma_q(shape, t) > kTailBudget && t < 2000.0) t += 15.0;
    radius_ = std::pow(t / beta_, 1.0 / theta_);
}

double GenGaussian::normalizer() const { return std::exp(log_z_); }

double GenGaussian::truncation_tail_bound() const {
    const double shape = std::max(3.0 / theta_, 1.0 + 1.0 / theta_);
    return gamma_q(shape, beta_ * std::pow(radius_, theta_));
}

double GenGaussian::pdf(double x) const { return std::exp(log_pdf(x)); }

double GenGaussian::log_pdf(double x) const {
    return -log_z_ - beta_ * std::pow(std::fabs(x - m_), theta_);
}

std::pair<double, double> GenGaussian::integration_window() const {
    return {m_ - radius_, m_ + radius_};
}

std::vector<double> GenGaussian::breakpoints() const {
    // The mode is a kink for theta < 1 (and a flat spot for theta > 1).
    // For cusp shapes seed panel edges where the exponent beta*|x|^theta
    // crosses a ladder of magnitudes, so the splitter starts with panels
    // matched to the density's own decay scale rather than the (huge)
    // truncation window.
    std::vector<double> pts{m_};
    if (theta_ < 1.0) {
        for (double t : {1e-6, 1e-3, 1e-1, 1.0, 5.0, 20.0}) {
            const double r = std::pow(t / beta_, 1.0 / theta_);
            if (r > 0.0 && r < radius_) {
                pts.push_back(m_ - r);
                pts.push_back(m_ + r);
            }
        }
    }
    return pts;
}

// ---- uniform ----

Uniform::Uniform(double m, double epsilon) : m_(m), eps_(epsilon) {
    check_finite(m, "Uniform");
    if (!std::isfinite(epsilon) || epsilon <= 0.0)
        throw std::domain_error("Uniform: need epsilon > 0");
}

double Uniform::entropy() const { return -std::log(eps_); }

double Uniform::pdf(double x) const {
    return (x >= m_ - half_width() && x <= m_ + half_width()) ? eps_ : 0.0;
}

double Uniform::log_pdf(double x) const {
    return (x >= m_ - half_width() && x <= m_ + half_width()) ? std::log(eps_) : -kInf;
}

Support Uniform::support() const { return {m_ - half_width(), m_ + half_width()}; }

std::vector<double> Uniform::breakpoints() const {
    return {m_ - half_width(), m_, m_ + half_width()};
}

// ---- mixture ----

Mixture::Mixture(std::vector<MixtureComponent> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("Mixture: needs at least one component");
    double weight = 0.0;
    for (const auto& c : comps_) {
        if (!std::isfinite(c.alpha) || c.alpha <= 0.0)
            throw std::invalid_argument("Mixture: weights must be positive");
        weight += c.alpha;
    }
    if (std::fabs(weight - 1.0) > 1e-12)
        throw std::invalid_argument("Mixture: weights must sum to 1");
    m_ = std::visit([](const auto& d) { return d.m(); }, comps_.front().dist);
    for (const auto& c : comps_) {
        const double mi = std::visit([](const auto& d) { return d.m(); }, c.dist);
        if (mi != m_)
            throw std::invalid_argument("Mixture: components must share a common mean");
    }
}

bool Mixture::pure_gengauss() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const MixtureComponent& c) {
        return std::holds_alternative<GenGaussian>(c.dist);
    });
}

bool Mixture::pure_uniform() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const MixtureComponent& c) {
        return std::holds_alternative<Uniform>(c.dist);
    });
}

double Mixture::component_variance(std::size_t i) const {
    return std::visit([](const auto& d) { return d.variance(); }, comps_.at(i).dist);
}

double Mixture::variance() const {
    double v = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) v += comps_[i].alpha * component_variance(i);
    return v;
}

double Mixture::variance_ratio() const {
    double lo = kInf, hi = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        const double v = component_variance(i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

double Mixture::pdf(double x) const {
    double p = 0.0;
    for (const auto& c : comps_)
        p += c.alpha * std::visit([&](const auto& d) { return d.pdf(x); }, c.dist);
    return p;
}

Support Mixture::support() const {
    if (pure_uniform()) {
        double lo = kInf, hi = -kInf;
        for (const auto& c : comps_) {
            const Support s = std::get<Uniform>(c.dist).support();
            lo = std::min(lo, s.lo);
            hi = std::max(hi, s.hi);
        }
        return {lo, hi};
    }
    return Support::real_line();
}

std::pair<double, double> Mixture::integration_window() const {
    double lo = kInf, hi = -kInf;
    for (const auto& c : comps_) {
        const auto w =
            std::visit([](const auto& d) { return d.integration_window(); }, c.dist);
        lo = std::min(lo, w.first);
        hi = std::max(hi, w.second);
    }
    return {lo, hi};
}

std::vector<double> Mixture::breakpoints() const {
    std::vector<double> pts;
    for (const auto& c : comps_) {
        const auto sub = std::visit([](const auto& d) { return d.breakpoints(); }, c.dist);
        pts.insert(pts.end(), sub.begin(), sub.end());
        // A component's window edge is a soft seam inside a wider mixture.
        const auto w = std::visit([](const auto& d) { return d.integration_window(); }, c.dist);
        pts.push_back(w.first);
        pts.push_back(w.second);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// ---- scaled wrapper ----

Scaled::Scaled(DensityPtr base, double gamma) : base_(std::move(base)), gamma_(gamma) {
    if (!base_) throw std::invalid_argument("Scaled: null base density");
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw std::domain_error("Scaled: need gamma > 0");
}

double Scaled::pdf(double x) const { return gamma_ * base_->pdf(gamma_ * x); }

double Scaled::log_pdf(double x) const { return std::log(gamma_) + base_->log_pdf(gamma_ * x); }

Support Scaled::support() const {
    const Support s = base_->support();
    if (!s.bounded()) return s;
    return {s.lo / gamma_, s.hi / gamma_};
}

std::pair<double, double> Scaled::integration_window() const {
    const auto w = base_->integration_window();
    return {w.first / gamma_, w.second / gamma_};
}

std::vector<double> Scaled::breakpoints() const {
    auto pts = base_->breakpoints();
    for (double& p : pts) p /= gamma_;
    return pts;
}

std::optional<double> Scaled::mean_hint() const {
    const auto m = base_->mean_hint();
    return m ? std::optional<double>(*m / gamma_) : std::nullopt;
}

std::optional<double> Scaled::mode_hint() const {
    const auto m = base_->mode_hint();
    return m ? std::optional<double>(*m / gamma_) : std::nullopt;
}

}  // namespace varbound
