#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

// Unimodal density families: generalized Gaussians exp(-beta|x-m|^theta)/Z,
// uniforms parameterized by their height epsilon, and finite mixtures of
// those two families sharing a common center.  Densities are immutable after
// construction and safe to share across threads.

namespace varbound {

struct Support {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    static Support real_line() { return {}; }
};

class Density {
public:
    virtual ~Density() = default;

    virtual double pdf(double x) const = 0;
    // ln pdf, -inf where the density vanishes.
    virtual double log_pdf(double x) const;
    virtual Support support() const = 0;

    // Finite window outside which the discarded mass/variance/entropy tails
    // are below 1e-12 of the total (equal to the support when bounded).
    virtual std::pair<double, double> integration_window() const;

    // Interior points where the pdf has a kink, jump, or mode; quadrature
    // panels are split there.
    virtual std::vector<double> breakpoints() const { return {}; }

    virtual std::optional<double> mean_hint() const { return std::nullopt; }
    virtual std::optional<double> mode_hint() const { return std::nullopt; }
    // True only when the density is known symmetric about mean_hint().
    virtual bool symmetric() const { return false; }
};

using DensityPtr = std::shared_ptr<const Density>;

// ---- generalized Gaussian closed forms ----

// Z(theta, beta) = 2 beta^(-1/theta) Gamma(1/theta) / theta.
double gg_log_normalizer(double theta, double beta);
double gg_normalizer(double theta, double beta);
// Var = beta^(-2/theta) Gamma(3/theta) / Gamma(1/theta).
double gg_variance(double theta, double beta);
// h = ln Z + 1/theta  (nats).
double gg_entropy(double theta, double beta);

class GenGaussian final : public Density {
public:
    GenGaussian(double m, double theta, double beta);

    double m() const { return m_; }
    double theta() const { return theta_; }
    double beta() const { return beta_; }
    double normalizer() const;
    double variance() const { return gg_variance(theta_, beta_); }
    double entropy() const { return gg_entropy(theta_, beta_); }
    // Analytic bound on the relative tails discarded by the window.
    double truncation_tail_bound() const;

    double pdf(double x) const override;
    double log_pdf(double x) const override;
    Support support() const override { return Support::real_line(); }
    std::pair<double, double> integration_window() const override;
    std::vector<double> breakpoints() const override;
    std::optional<double> mean_hint() const override { return m_; }
    std::optional<double> mode_hint() const override { return m_; }
    bool symmetric() const override { return true; }

private:
    double m_, theta_, beta_;
    double log_z_;
    double radius_;  // window half-width
};

class Uniform final : public Density {
public:
    // unif(m - 1/(2 epsilon), m + 1/(2 epsilon)); the height equals epsilon.
    Uniform(double m, double epsilon);

    double m() const { return m_; }
    double epsilon() const { return eps_; }
    double variance() const { return 1.0 / (12.0 * eps_ * eps_); }
    double entropy() const;  // -ln(epsilon)
    double half_width() const { return 0.5 / eps_; }

    double pdf(double x) const override;
    double log_pdf(double x) const override;
    Support support() const override;
    std::vector<double> breakpoints() const override;
    std::optional<double> mean_hint() const override { return m_; }
    std::optional<double> mode_hint() const override { return m_; }
    bool symmetric() const override { return true; }

private:
    double m_, eps_;
};

struct MixtureComponent {
    double alpha;
    std::variant<GenGaussian, Uniform> dist;
};

// Finite mixture with every component centered at the same m (rejected
// otherwise), so the mixture stays symmetric and unimodal and its variance
// is exactly sum_i alpha_i sigma_i^2.
class Mixture final : public Density {
public:
    explicit Mixture(std::vector<MixtureComponent> components);

    std::size_t size() const { return comps_.size(); }
    const MixtureComponent& component(std::size_t i) const { return comps_.at(i); }
    double center() const { return m_; }

    bool pure_gengauss() const;
    bool pure_uniform() const;

    double component_variance(std::size_t i) const;
    double variance() const;        // sum alpha_i sigma_i^2 (exact)
    double variance_ratio() const;  // r = max_{i,j} sigma_i^2 / sigma_j^2

    double pdf(double x) const override;
    Support support() const override;
    std::pair<double, double> integration_window() const override;
    std::vector<double> breakpoints() const override;
    std::optional<double> mean_hint() const override { return m_; }
    std::optional<double> mode_hint() const override { return m_; }
    bool symmetric() const override { return true; }

private:
    std::vector<MixtureComponent> comps_;
    double m_;
};

// p_gamma(x) = gamma * p(gamma * x): variance scales by 1/gamma^2 and the
// entropy shifts by -ln gamma.  Used by the scaling-covariance checks.
class Scaled final : public Density {
public:
    Scaled(DensityPtr base, double gamma);

    double pdf(double x) const override;
    double log_pdf(double x) const override;
    Support support() const override;
    std::pair<double, double> integration_window() const override;
    std::vector<double> breakpoints() const override;
    std::optional<double> mean_hint() const override;
    std::optional<double> mode_hint() const override;
    bool symmetric() const override { return base_->symmetric(); }

private:
    DensityPtr base_;
    double gamma_;
};

}  // namespace varbound
