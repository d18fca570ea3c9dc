#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace varbound {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half; QUADPACK qk15 data).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi;
    double value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double fv1[7], fv2[7];
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        resk += kWgk[j] * (fv1[j] + fv2[j]);
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    }
    double resg = kWg[3] * fc;
    for (int j = 0; j < 3; ++j) resg += kWg[j] * (fv1[2 * j + 1] + fv2[2 * j + 1]);

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    resasc *= h;
    resabs *= h;

    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (eps50 > std::numeric_limits<double>::min()) err = std::max(err, eps50);
    return {lo, hi, resk * h, err};
}

}  // namespace

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& edges,
                                  const QuadratureOptions& opts) {
    if (edges.size() < 2) throw std::invalid_argument("integrate: need at least two panel edges");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!std::isfinite(edges[i]) || !(edges[i] < edges[i + 1]))
            throw std::invalid_argument("integrate: panel edges must be finite and ascending");
    }
    if (!std::isfinite(edges.back()))
        throw std::invalid_argument("integrate: panel edges must be finite and ascending");

    std::priority_queue<Panel> heap;
    double total_err = 0.0;
    double total_val = 0.0;
    int splits = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = gk15(f, edges[i], edges[i + 1]);
        total_err += p.err;
        total_val += p.value;
        heap.push(p);
    }
    const double span = edges.back() - edges.front();
    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total_val)); };
    while (total_err > target() && splits < opts.max_subdivisions) {
        Panel worst = heap.top();
        if (worst.hi - worst.lo < 1e-15 * span) break;  // cannot refine further
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel a = gk15(f, worst.lo, mid);
        Panel b = gk15(f, mid, worst.hi);
        total_err += a.err + b.err - worst.err;
        total_val += a.value + b.value - worst.value;
        heap.push(a);
        heap.push(b);
        ++splits;
    }

    double value = 0.0, err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().err;
        heap.pop();
    }
    if (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)))
        throw convergence_error("quadrature failed to reach tolerance", value, err);
    return {value, err, splits};
}

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts) {
    return integrate_panels(f, {lo, hi}, opts);
}

std::vector<double> panel_edges(const Density& d) {
    const auto [lo, hi] = d.integration_window();
    std::vector<double> edges{lo};
    auto pts = d.breakpoints();
    std::sort(pts.begin(), pts.end());
    for (double p : pts)
        if (p > lo && p < hi) edges.push_back(p);
    edges.push_back(hi);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

double mean_of(const Density& d, double abs_tol) {
    const auto edges = panel_edges(d);
    return integrate_panels([&](double x) { return x * d.pdf(x); }, edges, QuadratureOptions{.abs_tol = abs_tol})
        .value;
}

double variance_of(const Density& d, double abs_tol) {
    double mu;
    if (d.symmetric() && d.mean_hint())
        mu = *d.mean_hint();
    else
        mu = mean_of(d, abs_tol);
    const auto edges = panel_edges(d);
    return integrate_panels(
               [&](double x) { return (x - mu) * (x - mu) * d.pdf(x); }, edges, QuadratureOptions{.abs_tol = abs_tol})
        .value;
}

double entropy_of(const Density& d, double abs_tol) {
    const auto edges = panel_edges(d);
    auto integrand = [&](double x) {
        const double lp = d.log_pdf(x);
        // exp(-690.7) ~ 1e-300: below that the contribution is defined as 0.
        if (lp < -690.7) return 0.0;
        return -std::exp(lp) * lp;
    };
    return integrate_panels(integrand, edges, QuadratureOptions{.abs_tol = abs_tol}).value;
}

double total_mass(const Density& d, double abs_tol) {
    const auto edges = panel_edges(d);
    return integrate_panels([&](double x) { return d.pdf(x); }, edges, QuadratureOptions{.abs_tol = abs_tol}).value;
}

}  // namespace varbound
