#include "varbound.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "quadrature.hpp"
#include "spec_io.hpp"
#include "special_functions.hpp"

// C ABI shim: every entry point catches all exceptions, stores the message
// in thread-local storage, and maps the exception type to a status code.

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
vb_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return VB_OK;
    } catch (const varbound::spec_parse_error& e) {
        set_error(e.what());
        return VB_ERR_PARSE;
    } catch (const varbound::hypothesis_error& e) {
        set_error(e.what());
        return VB_ERR_HYPOTHESIS;
    } catch (const varbound::convergence_error& e) {
        set_error(e.what());
        return VB_ERR_CONVERGENCE;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return VB_ERR_DOMAIN;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return VB_ERR_DOMAIN;
    } catch (const std::exception& e) {
        set_error(e.what());
        return VB_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return VB_ERR_INTERNAL;
    }
}

[[noreturn]] void require_failed(const char* what) {
    throw std::invalid_argument(std::string("null or invalid argument: ") + what);
}

void require(bool ok, const char* what) {
    if (!ok) require_failed(what);
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct vb_density {
    varbound::ParsedSpec spec;
};

struct vb_certificate {
    varbound::BoundCertificate cert;
    nlohmann::json density_spec;
};

extern "C" {

const char* vb_last_error(void) { return g_last_error.c_str(); }

const char* vb_status_name(vb_status status) {
    switch (status) {
        case VB_OK:
            return "ok";
        case VB_ERR_DOMAIN:
            return "domain_error";
        case VB_ERR_HYPOTHESIS:
            return "hypothesis_error";
        case VB_ERR_CONVERGENCE:
            return "convergence_error";
        case VB_ERR_PARSE:
            return "parse_error";
        case VB_ERR_INTERNAL:
            return "internal_error";
    }
    return "unknown_status";
}

void vb_string_free(char* s) { std::free(s); }

double vb_two_pi_e(void) { return varbound::kTwoPiE; }

vb_status vb_gamma(double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = varbound::gamma_fn(x);
    });
}

vb_status vb_log_gamma(double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = varbound::log_gamma(x);
    });
}

vb_status vb_digamma(double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = varbound::digamma(x);
    });
}

vb_status vb_a_theta(double theta, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = varbound::a_theta(theta);
    });
}

vb_status vb_m_ratio(double r, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = varbound::m_ratio(r);
    });
}

vb_status vb_b_factor(const double* thetas, const double* alphas, int n, double r, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(thetas != nullptr && alphas != nullptr, "thetas/alphas");
        require(n > 0, "n");
        *out = varbound::b_factor(std::vector<double>(thetas, thetas + n),
                                  std::vector<double>(alphas, alphas + n), r);
    });
}

vb_status vb_density_from_spec(const char* spec_json, vb_density** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(spec_json != nullptr, "spec_json");
        *out = new vb_density{varbound::parse_density_spec_text(spec_json)};
    });
}

void vb_density_free(vb_density* d) { delete d; }

vb_status vb_density_pdf(const vb_density* d, double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(d != nullptr, "density");
        require(std::isfinite(x), "x");
        *out = d->spec.as_density().pdf(x);
    });
}

vb_status vb_density_variance(const vb_density* d, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(d != nullptr, "density");
        *out = varbound::variance_of(d->spec.as_density());
    });
}

vb_status vb_density_entropy(const vb_density* d, double* out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(d != nullptr, "density");
        *out = varbound::entropy_of(d->spec.as_density());
    });
}

vb_status vb_certify(const vb_density* d, const char* theorem, double tol, vb_certificate** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(d != nullptr, "density");
        require(tol > 0.0, "tol");
        std::optional<varbound::TheoremTag> tag;
        if (theorem != nullptr && *theorem != '\0')
            tag = varbound::theorem_tag_from_string(theorem);
        auto cert = varbound::certify_spec(d->spec, tag, tol);
        *out = new vb_certificate{std::move(cert), varbound::density_spec_json(d->spec)};
    });
}

void vb_certificate_free(vb_certificate* c) { delete c; }

int vb_certificate_passed(const vb_certificate* c) {
    return (c != nullptr && c->cert.passed()) ? 1 : 0;
}

vb_status vb_certificate_to_json(const vb_certificate* c, char** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(c != nullptr, "certificate");
        *out = copy_string(varbound::certificate_json(c->cert, c->density_spec).dump(2));
    });
}

vb_status vb_sweep_theta_csv(double theta_min, double theta_max, int points, double alpha1,
                             double theta1, char** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        *out = copy_string(varbound::sweep_theta_csv(
            varbound::sweep_theta(theta_min, theta_max, points, alpha1, theta1)));
    });
}

vb_status vb_counterexample_csv(double alpha1, double eps1, const double* eps2_values, int count,
                                char** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(eps2_values != nullptr, "eps2_values");
        require(count > 0, "count");
        *out = copy_string(varbound::counterexample_csv(varbound::counterexample_report(
            alpha1, eps1, std::vector<double>(eps2_values, eps2_values + count))));
    });
}

vb_status vb_convergence_csv(const char* shape_spec_json, const int* n_values, int count,
                             char** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(shape_spec_json != nullptr, "shape_spec_json");
        require(n_values != nullptr, "n_values");
        require(count > 0, "count");
        const auto spec = varbound::parse_density_spec_text(shape_spec_json);
        if (spec.is_mixture())
            throw varbound::hypothesis_error(
                "convergence study requires a shape specification (triangular or raised_cosine)");
        *out = copy_string(varbound::convergence_csv(varbound::convergence_study(
            spec.shape(), std::vector<int>(n_values, n_values + count))));
    });
}

vb_status vb_product_report_json(const char* const* spec_jsons, int count, double tol, char** out) {
    return guarded([&] {
        require(out != nullptr, "out");
        require(spec_jsons != nullptr, "spec_jsons");
        require(count > 0, "count");
        require(tol > 0.0, "tol");
        std::vector<varbound::BoundCertificate> certs;
        certs.reserve(count);
        for (int i = 0; i < count; ++i) {
            require(spec_jsons[i] != nullptr, "spec_jsons[i]");
            const auto spec = varbound::parse_density_spec_text(spec_jsons[i]);
            certs.push_back(varbound::certify_spec(spec, std::nullopt, tol));
        }
        *out = copy_string(varbound::product_report_json(varbound::product_bound(certs)).dump(2));
    });
}

}  // extern "C"
