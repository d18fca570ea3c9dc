#include "approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "quadrature.hpp"

namespace varbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPerSide = 2000;  // validation resolution per support side

// Least-squares slope of ln(gap) vs ln(n) over entries with gap > 1e-15.
double loglog_slope(const std::vector<int>& ns, const std::vector<double>& gaps) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (gaps[i] > 1e-15) pts.emplace_back(std::log(double(ns[i])), std::log(gaps[i]));
    }
    if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
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

}  // namespace

// ---- LipschitzUnimodal ------------------------------------------------------

LipschitzUnimodal::LipschitzUnimodal(std::function<double(double)> pdf_fn, double mode,
                                     double s_l, double s_r, double lipschitz_c)
    : f_(std::move(pdf_fn)), b_(mode), sl_(s_l), sr_(s_r), c_(lipschitz_c) {
    if (!f_) throw std::invalid_argument("unimodal density: missing pdf callable");
    if (!std::isfinite(b_)) throw std::invalid_argument("unimodal density: mode must be finite");
    if (!(sl_ >= 0.0) || !(sr_ >= 0.0) || !std::isfinite(sl_) || !std::isfinite(sr_))
        throw std::invalid_argument("unimodal density: half-widths must be nonnegative");
    if (!(sl_ + sr_ > 0.0))
        throw std::invalid_argument("unimodal density: support must have positive length");
    if (!(c_ > 0.0) || !std::isfinite(c_))
        throw std::invalid_argument("unimodal density: Lipschitz constant must be positive");
    validate();
    detect_symmetry();
}

double LipschitzUnimodal::pdf(double x) const {
    if (x < b_ - sl_ || x > b_ + sr_) return 0.0;
    return std::max(0.0, f_(x));
}

std::vector<double> LipschitzUnimodal::breakpoints() const { return {b_}; }

std::optional<double> LipschitzUnimodal::mean_hint() const {
    if (symmetric_) return b_;
    return std::nullopt;
}

void LipschitzUnimodal::validate() const {
    // Grid sweep per side: nonnegativity, monotonicity toward the mode, and
    // a finite-difference Lipschitz estimate. All checks are interior to the
    // support, so edge discontinuities (one-sided shapes, plateaus) do not
    // trip the slope estimate.
    double pmax = std::max(0.0, f_(b_));
    auto sweep = [&](double lo, double hi, bool increasing) {
        const int n = kGridPerSide;
        std::vector<double> v(n + 1);
        const double dx = (hi - lo) / n;
        for (int i = 0; i <= n; ++i) {
            v[i] = f_(lo + i * dx);
            if (!(v[i] >= -1e-12) || !std::isfinite(v[i]))
                throw std::invalid_argument("unimodal density: pdf must be finite nonnegative");
            pmax = std::max(pmax, v[i]);
        }
        const double mono_slack = 1e-9 * std::max(1.0, pmax);
        const double slope_cap = c_ * (1.0 + 1e-6) + 1e-9 * std::max(1.0, pmax);
        for (int i = 0; i < n; ++i) {
            const double step = increasing ? v[i + 1] - v[i] : v[i] - v[i + 1];
            if (step < -mono_slack)
                throw std::invalid_argument(
                    "unimodal density: pdf is not unimodal about the declared mode");
            if (std::fabs(v[i + 1] - v[i]) > slope_cap * dx)
                throw std::invalid_argument(
                    "unimodal density: declared Lipschitz constant is too small for the pdf");
        }
    };
    if (sl_ > 0.0) sweep(b_ - sl_, b_, /*increasing=*/true);
    if (sr_ > 0.0) sweep(b_, b_ + sr_, /*increasing=*/false);

    // Unit mass by quadrature.
    std::vector<double> edges{b_ - sl_};
    if (sl_ > 0.0 && sr_ > 0.0) edges.push_back(b_);
    edges.push_back(b_ + sr_);
    const double mass =
        integrate_panels([this](double x) { return pdf(x); }, edges,
                         QuadratureOptions{.abs_tol = 1e-9})
            .value;
    if (std::fabs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("unimodal density: pdf does not integrate to 1");
}

void LipschitzUnimodal::detect_symmetry() {
    symmetric_ = false;
    if (sl_ <= 0.0 || sr_ <= 0.0) return;
    if (std::fabs(sl_ - sr_) > 1e-12 * std::max(sl_, sr_)) return;
    double pmax = std::max(f_(b_), 1e-300);
    for (int i = 0; i <= 500; ++i) {
        const double y = sl_ * i / 500.0;
        if (std::fabs(pdf(b_ + y) - pdf(b_ - y)) > 1e-9 * pmax) return;
    }
    symmetric_ = true;
}

LipschitzUnimodal make_triangular(double mode, double s_l, double s_r) {
    if (!(s_l >= 0.0) || !(s_r >= 0.0) || !(s_l + s_r > 0.0))
        throw std::invalid_argument("triangular density: invalid half-bases");
    const double height = 2.0 / (s_l + s_r);
    double steepest = 0.0;
    if (s_l > 0.0) steepest = std::max(steepest, height / s_l);
    if (s_r > 0.0) steepest = std::max(steepest, height / s_r);
    auto pdf = [mode, s_l, s_r, height](double x) {
        if (x < mode) {
            if (s_l <= 0.0) return 0.0;
            return std::max(0.0, height * (1.0 - (mode - x) / s_l));
        }
        if (s_r <= 0.0) return x == mode ? height : 0.0;
        return std::max(0.0, height * (1.0 - (x - mode) / s_r));
    };
    LipschitzUnimodal d(pdf, mode, s_l, s_r, steepest);
    d.label = LipschitzUnimodal::Label{
        "triangular", {{"b", mode}, {"s_l", s_l}, {"s_r", s_r}}};
    return d;
}

LipschitzUnimodal make_raised_cosine(double m, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("raised cosine density: s must be positive");
    auto pdf = [m, s](double x) {
        const double y = (x - m) / s;
        if (y < -1.0 || y > 1.0) return 0.0;
        return (1.0 + std::cos(std::numbers::pi * y)) / (2.0 * s);
    };
    LipschitzUnimodal d(pdf, m, s, s, std::numbers::pi / (2.0 * s * s));
    d.label = LipschitzUnimodal::Label{"raised_cosine", {{"m", m}, {"s", s}}};
    return d;
}

LipschitzUnimodal make_flat_plateau(double m, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("plateau density: s must be positive");
    const double h = 1.0 / (2.0 * s);
    auto pdf = [m, s, h](double x) { return (x >= m - s && x <= m + s) ? h : 0.0; };
    return LipschitzUnimodal(pdf, m, s, s, 1.0 / (s * s));
}

// ---- step approximation -----------------------------------------------------

StepApproximation build_step_approx(const LipschitzUnimodal& p, int n) {
    if (n < 1) throw std::invalid_argument("step approximation: n must be >= 1");
    if (!p.symmetric())
        throw hypothesis_error("step approximation requires a symmetric density");
    const double b = p.mode();
    const double s = p.s_max();
    const double step = s / n;

    // J_t = mass of the t-th cell left of the mode, t = 1..n.
    std::vector<double> cell_mass(static_cast<std::size_t>(n) + 1, 0.0);
    for (int t = 1; t <= n; ++t) {
        cell_mass[t] = integrate([&p](double x) { return p.pdf(x); }, b - t * step,
                                 b - (t - 1) * step, QuadratureOptions{.abs_tol = 1e-13})
                           .value;
    }

    StepApproximation sa;
    sa.n = n;
    sa.grid_step = step;
    sa.m = b;
    sa.alphas.resize(n);
    for (int t = 1; t < n; ++t) sa.alphas[t - 1] = 2.0 * t * (cell_mass[t] - cell_mass[t + 1]);
    sa.alphas[n - 1] = 2.0 * n * cell_mass[n];

    double sum = 0.0;
    for (double& a : sa.alphas) {
        if (a < -1e-9)
            throw hypothesis_error(
                "step approximation: negative weight; input is not unimodal at grid resolution");
        if (a < 0.0) a = 0.0;
        sum += a;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("step approximation: zero total weight");
    for (double& a : sa.alphas) a /= sum;
    return sa;
}

// ---- step density -----------------------------------------------------------

StepDensity::StepDensity(StepApproximation sa) : sa_(std::move(sa)) {
    if (sa_.n < 1 || sa_.alphas.size() != static_cast<std::size_t>(sa_.n))
        throw std::invalid_argument("step density: weight count must equal n");
    if (!(sa_.grid_step > 0.0)) throw std::invalid_argument("step density: grid step must be > 0");
    double sum = 0.0;
    for (double a : sa_.alphas) {
        if (!(a >= 0.0)) throw std::invalid_argument("step density: weights must be nonnegative");
        sum += a;
    }
    if (std::fabs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("step density: weights must sum to 1");

    // H_k = sum_{t > k} alpha_t / (2 t D): suffix sums from the outermost cell.
    heights_.assign(sa_.alphas.size(), 0.0);
    double acc = 0.0;
    for (int k = sa_.n - 1; k >= 0; --k) {
        acc += sa_.alphas[k] / (2.0 * (k + 1) * sa_.grid_step);
        heights_[k] = acc;
    }
}

double StepDensity::pdf(double x) const {
    const double y = std::fabs(x - sa_.m);
    const double s = sa_.s();
    if (y >= s) return 0.0;
    const int k = std::min(static_cast<int>(y / sa_.grid_step), sa_.n - 1);
    return heights_[k];
}

Support StepDensity::support() const { return {sa_.m - sa_.s(), sa_.m + sa_.s()}; }

std::vector<double> StepDensity::breakpoints() const {
    std::vector<double> pts{sa_.m};
    for (int k = 1; k <= sa_.n; ++k) {
        pts.push_back(sa_.m - k * sa_.grid_step);
        pts.push_back(sa_.m + k * sa_.grid_step);
    }
    return pts;
}

double StepDensity::variance() const {
    double v = 0.0;
    for (int t = 1; t <= sa_.n; ++t) {
        const double half = t * sa_.grid_step;
        v += sa_.alphas[t - 1] * half * half / 3.0;
    }
    return v;
}

double StepDensity::entropy() const {
    double h = 0.0;
    for (int k = 0; k < sa_.n; ++k) {
        const double hk = heights_[k];
        if (hk > 0.0) h -= 2.0 * sa_.grid_step * hk * std::log(hk);
    }
    return h;
}

double StepDensity::cdf(double x) const {
    double y = x - sa_.m;
    const double sgn = y < 0.0 ? -1.0 : 1.0;
    y = std::fabs(y);
    if (y >= sa_.s()) return sgn < 0.0 ? 0.0 : 1.0;
    const int k = std::min(static_cast<int>(y / sa_.grid_step), sa_.n - 1);
    double mass = 0.0;
    for (int j = 0; j < k; ++j) mass += heights_[j] * sa_.grid_step;
    mass += heights_[k] * (y - k * sa_.grid_step);
    return 0.5 + sgn * mass;
}

StepDensity step_density(StepApproximation sa) { return StepDensity(std::move(sa)); }

// ---- convergence study ------------------------------------------------------

ConvergenceReport convergence_study(const LipschitzUnimodal& p,
                                    const std::vector<int>& n_values) {
    if (n_values.size() < 4)
        throw std::invalid_argument("convergence study: need at least four grid sizes");
    for (std::size_t i = 0; i + 1 < n_values.size(); ++i) {
        if (!(n_values[i] < n_values[i + 1]))
            throw std::invalid_argument("convergence study: grid sizes must be increasing");
    }
    if (n_values.front() < 1)
        throw std::invalid_argument("convergence study: grid sizes must be positive");

    const double var_p = variance_of(p);
    const double h_p = entropy_of(p);
    const double s = p.s_max();
    const double envelope_c = 2.0 * p.lipschitz_c() * s * s * s * s / 3.0;

    ConvergenceReport rep;
    rep.n_values = n_values;
    rep.envelope_ok = true;
    for (int n : n_values) {
        const StepDensity sd = step_density(build_step_approx(p, n));
        const double vg = std::fabs(var_p - sd.variance());
        const double eg = std::exp(2.0 * (sd.entropy() - h_p)) - 1.0;
        rep.var_gap.push_back(vg);
        rep.ep_ratio_gap.push_back(eg);
        if (vg > envelope_c / n + 1e-9) rep.envelope_ok = false;
    }

    rep.ep_gap_monotone_tail = true;
    for (std::size_t i = 0; i + 1 < n_values.size(); ++i) {
        if (n_values[i] < 16) continue;
        if (rep.ep_ratio_gap[i + 1] > rep.ep_ratio_gap[i] + 1e-12)
            rep.ep_gap_monotone_tail = false;
    }

    rep.fitted_var_slope = loglog_slope(n_values, rep.var_gap);
    rep.fitted_ep_slope = loglog_slope(n_values, rep.ep_ratio_gap);
    return rep;
}

// ---- certificates -----------------------------------------------------------

BoundCertificate certify_theorem2(const LipschitzUnimodal& p, double tol) {
    if (!p.symmetric())
        throw hypothesis_error(
            "symmetric Lipschitz certificate requires a symmetric density (use the asymmetric "
            "certificate instead)");
    const double s = p.s_max();
    const double cs2 = p.lipschitz_c() * s * s;
    if (cs2 < 1.0)
        throw hypothesis_error(
            "c_s s^2 < 1 contradicts unit mass for a symmetric Lipschitz unimodal density; "
            "the declared constants are inconsistent");
    const double factor = cs2 * std::exp(cs2) / 24.0;
    const double var = variance_of(p);
    const double h = entropy_of(p);
    std::vector<HypothesisCheck> checks{
        {"symmetric about the mode", true},
        {"bounded support", true},
        {"Lipschitz constant validated on a dense grid", true},
        {"c_s s^2 >= 1", true},
    };
    return make_certificate(var, h, factor, TheoremTag::thm2, std::move(checks), tol);
}

AsymmetricSplit split_asymmetric(const LipschitzUnimodal& p) {
    const double b = p.mode();
    const double sl = p.s_l();
    const double sr = p.s_r();
    auto side_mass = [&](double lo, double hi) {
        if (!(hi > lo)) return 0.0;
        return integrate([&p](double x) { return p.pdf(x); }, lo, hi,
                         QuadratureOptions{.abs_tol = 1e-12})
            .value;
    };
    const double beta_l = side_mass(b - sl, b);
    const double beta_r = side_mass(b, b + sr);
    if (beta_l < 1e-12 || beta_r < 1e-12)
        throw hypothesis_error("degenerate mode split: one side carries no mass");

    const auto parent = std::make_shared<const LipschitzUnimodal>(p);
    auto mirrored = [parent, b](double beta) {
        return [parent, b, beta](double x) {
            return parent->pdf(b - std::fabs(x - b)) / (2.0 * beta);
        };
    };
    auto mirrored_right = [parent, b](double beta) {
        return [parent, b, beta](double x) {
            return parent->pdf(b + std::fabs(x - b)) / (2.0 * beta);
        };
    };
    LipschitzUnimodal left(mirrored(beta_l), b, sl, sl, p.lipschitz_c() / (2.0 * beta_l));
    LipschitzUnimodal right(mirrored_right(beta_r), b, sr, sr,
                            p.lipschitz_c() / (2.0 * beta_r));
    return {std::move(left), std::move(right), beta_l, beta_r};
}

BoundCertificate certify_theorem3(const LipschitzUnimodal& p, double tol) {
    const double b = p.mode();
    const double s = p.s_max();
    const double cs2 = p.lipschitz_c() * s * s;
    if (cs2 < 1.0)
        throw hypothesis_error(
            "c_s s^2 < 1 contradicts unit mass for a Lipschitz unimodal density; the declared "
            "constants are inconsistent");

    const auto split = split_asymmetric(p);
    const double var = variance_of(p);
    const double h = entropy_of(p);
    const double mean = mean_of(p);
    const double ep = std::exp(2.0 * h);

    const double var_l = variance_of(split.left);
    const double var_r = variance_of(split.right);
    const double h_l = entropy_of(split.left);
    const double h_r = entropy_of(split.right);
    const double r_v = std::max(var_l, var_r) / std::min(var_l, var_r);
    const double hb = -split.beta_l * std::log(split.beta_l) -
                      split.beta_r * std::log(split.beta_r);
    const double shift2 = (mean - b) * (mean - b);

    // Decomposition identities, checked at 1e-6 relative.
    const double var_rhs = split.beta_l * var_l + split.beta_r * var_r - shift2;
    const bool var_identity = std::fabs(var_rhs - var) <= 1e-6 * std::fabs(var);
    const double ep_rhs =
        0.25 * std::exp(2.0 * (split.beta_l * h_l + split.beta_r * h_r + hb));
    const bool ep_identity = std::fabs(ep_rhs - ep) <= 1e-6 * ep;

    const double budget = 128.0 * cs2 * cs2 * cs2 * cs2;
    const bool ratio_ok = r_v <= budget * (1.0 + 1e-9);

    const double coeff_general = cs2 * std::exp(cs2) * m_ratio(budget) / 6.0;
    const double coeff_tight =
        (cs2 * std::exp(cs2) / 24.0) * (4.0 * m_ratio(r_v) / std::exp(2.0 * hb));

    BoundCertificate c;
    c.variance = var;
    c.entropy = h;
    c.entropy_power = ep;
    c.lower = ep / kTwoPiE;
    c.upper = coeff_general * ep - shift2;
    c.upper_tight = coeff_tight * ep - shift2;
    c.tag = TheoremTag::thm3;
    c.hypothesis_report = {
        {"bounded support", true},
        {"mode identified", true},
        {"c_s s^2 >= 1", true},
        {"non-degenerate mode split", true},
        {"variance decomposition identity (1e-6 relative)", var_identity},
        {"entropy-power decomposition identity (1e-6 relative)", ep_identity},
        {"half-variance ratio within 128 (c_s s^2)^4", ratio_ok},
    };
    c.slack_lower = var - c.lower;
    c.slack_upper = c.upper - var;
    c.tol = tol;
    return c;
}

}  // namespace varbound
