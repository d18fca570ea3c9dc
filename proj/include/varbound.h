/*
 * varbound — public C interface.
 *
 * A numerical library that computes and certifies two-sided entropy-power
 * bounds on the variance of unimodal densities: for every admissible density
 * the variance is at least e^{2h}/(2 pi e) (h the differential entropy in
 * nats), and for each supported structural class a finite upper bound
 * c * e^{2h} holds with an explicitly computed coefficient.
 *
 * All functions return a vb_status; results are written through out
 * parameters.  On any status other than VB_OK the out values are untouched
 * and vb_last_error() holds a human-readable message (thread-local storage,
 * valid until the calling thread's next varbound call).  Handles returned
 * through vb_*_new/from functions are opaque and must be released with the
 * matching free function; strings returned through char** out parameters
 * must be released with vb_string_free().  All handles are immutable after
 * creation and safe to share across threads.
 */

#ifndef VARBOUND_H
#define VARBOUND_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vb_status {
    VB_OK = 0,
    VB_ERR_DOMAIN = 1,      /* argument outside the mathematical domain */
    VB_ERR_HYPOTHESIS = 2,  /* density violates the requested bound's hypotheses */
    VB_ERR_CONVERGENCE = 3, /* quadrature failed to reach its tolerance */
    VB_ERR_PARSE = 4,       /* malformed specification input */
    VB_ERR_INTERNAL = 5     /* unexpected failure */
} vb_status;

/* Message for the calling thread's most recent failure ("" if none). */
const char* vb_last_error(void);
/* Stable identifier for a status code, e.g. "ok", "domain_error". */
const char* vb_status_name(vb_status status);

/* Releases a string allocated by this library.  NULL is ignored. */
void vb_string_free(char* s);

/* ---- scalar kernels ---- */

/* The constant 2 pi e (the Gaussian entropy-power-to-variance ratio). */
double vb_two_pi_e(void);

vb_status vb_gamma(double x, double* out);
vb_status vb_log_gamma(double x, double* out);
vb_status vb_digamma(double x, double* out);

/*
 * Entropy-power-to-variance ratio of the exponential-power density with
 * shape theta (theta = 2 Gaussian, theta = 1 Laplace).  1/a is minimized at
 * theta = 2 where it equals 1/(2 pi e), and tends to 1/12 as theta grows.
 */
vb_status vb_a_theta(double theta, double* out);

/*
 * Heterogeneity penalty M(r) = (r-1) r^(1/(r-1)) / (e ln r) for a maximum
 * component-variance ratio r >= 1; M(1) = 1 and M is increasing.
 */
vb_status vb_m_ratio(double r, double* out);

/*
 * Mixture upper-bound coefficient B = M(r) * prod_i a(theta_i)^(-alpha_i)
 * for n components with shapes thetas[] and positive weights alphas[]
 * summing to 1.  Always >= 1/(2 pi e).
 */
vb_status vb_b_factor(const double* thetas, const double* alphas, int n, double r, double* out);

/* ---- densities ---- */

/*
 * A density parsed from a JSON specification.  Accepted forms:
 *   {"family":"gengauss","m":0,"theta":2,"beta":0.5}
 *   {"family":"uniform","m":0,"epsilon":1}
 *   {"family":"mixture","components":[{"alpha":0.5,"family":"gengauss",...},...]}
 *   {"family":"triangular","b":0,"s_l":1,"s_r":0.5}
 *   {"family":"raised_cosine","m":0,"s":1}
 * Mixture components must share a common center; weights must be positive
 * and sum to 1.
 */
typedef struct vb_density vb_density;

vb_status vb_density_from_spec(const char* spec_json, vb_density** out);
void vb_density_free(vb_density* d);

vb_status vb_density_pdf(const vb_density* d, double x, double* out);
/* Central second moment by adaptive quadrature. */
vb_status vb_density_variance(const vb_density* d, double* out);
/* Differential entropy (nats) by adaptive quadrature. */
vb_status vb_density_entropy(const vb_density* d, double* out);

/* ---- certificates ---- */

/*
 * A machine-checkable record that lower <= Var <= upper held for a concrete
 * density, carrying the hypothesis checks and the slack on each side.
 */
typedef struct vb_certificate vb_certificate;

/*
 * Certify the density against one bound from the catalog.  Pass NULL to
 * infer the bound from the density's family, or one of:
 *   "thm1"        common-mean exponential-power mixtures (uniform
 *                 components enter through their limiting coefficient)
 *   "cor1"        mixtures with all shapes >= 1/2: simplified coefficient
 *   "cor2"        uniform mixtures: M(r)/12 coefficient
 *   "thm2"        symmetric bounded Lipschitz unimodal shapes
 *   "thm3"        asymmetric bounded Lipschitz unimodal shapes (mode split)
 *   "lower_only"  universal lower bound only (no finite upper bound)
 * A family/bound mismatch or a violated hypothesis yields
 * VB_ERR_HYPOTHESIS.  A certificate is produced even when the bound fails
 * numerically; inspect vb_certificate_passed.
 */
vb_status vb_certify(const vb_density* d, const char* theorem, double tol, vb_certificate** out);
void vb_certificate_free(vb_certificate* c);

/* 1 when every hypothesis passed and the sandwich held within tol. */
int vb_certificate_passed(const vb_certificate* c);

/*
 * Serialize to JSON: theorem_tag, variance, entropy, entropy_power, lower,
 * upper (null when no finite upper bound applies), upper_tight (present for
 * the split-based bound), slacks, tolerance, hypothesis_report, and the
 * originating density spec under "density".
 */
vb_status vb_certificate_to_json(const vb_certificate* c, char** out);

/* ---- tables (CSV strings with fixed 12-significant-digit formatting) ---- */

/*
 * One row per shape value theta on a uniform grid: columns
 * theta,inv_A,B_r1,B_r10,inv_two_pi_e where the B columns use a
 * two-component mixture (first component theta1 with weight alpha1, second
 * component theta) at variance ratios 1 and 10.
 */
vb_status vb_sweep_theta_csv(double theta_min, double theta_max, int points, double alpha1,
                             double theta1, char** out);

/*
 * Two-plateau divergence table: for the common-center mixture of a width
 * 1/eps1 and a width 1/eps2 uniform (weights alpha1, 1-alpha1), columns
 * eps2,variance,entropy_power,ratio.  The ratio column grows without bound
 * as eps2 decreases, demonstrating that no universal constant can cap
 * variance / e^{2h} over all unimodal densities.
 */
vb_status vb_counterexample_csv(double alpha1, double eps1, const double* eps2_values, int count,
                                char** out);

/*
 * Step-approximation convergence table for a shape specification
 * (triangular or raised_cosine, symmetric): columns n,var_gap,ep_ratio_gap
 * for each grid size in n_values (strictly increasing, at least 4 entries).
 */
vb_status vb_convergence_csv(const char* shape_spec_json, const int* n_values, int count,
                             char** out);

/*
 * Product bound for independent marginals: certify each spec (inferred
 * bound), multiply variances and entropy powers, and report JSON with
 * det_covariance, entropy_power_k, c, holds, rel_slack.  Every marginal
 * must pass with a finite upper bound.
 */
vb_status vb_product_report_json(const char* const* spec_jsons, int count, double tol, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VARBOUND_H */
