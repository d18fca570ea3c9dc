#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "approximation.hpp"
#include "bounds.hpp"
#include "density.hpp"

// Density specification files (JSON), certificate/report serialization, and
// the fixed-format CSV tables consumed by the command line tool.  All CSV
// floats are printed with 12 significant digits so identical inputs produce
// byte-identical files.

namespace varbound {

// Malformed specification input; the message names the offending field.
class spec_parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parsed density specification.  Mixture-family specs (gengauss, uniform,
// mixture) become a Mixture; shape-family specs (triangular, raised_cosine)
// become a LipschitzUnimodal.
struct ParsedSpec {
    std::string family;  // as written in the input file
    std::variant<Mixture, LipschitzUnimodal> density;

    const Density& as_density() const;
    bool is_mixture() const { return std::holds_alternative<Mixture>(density); }
    const Mixture& mixture() const { return std::get<Mixture>(density); }
    const LipschitzUnimodal& shape() const { return std::get<LipschitzUnimodal>(density); }
};

// Accepted spec shapes (field names are fixed):
//   {"family":"gengauss","m":0,"theta":2,"beta":0.5}
//   {"family":"uniform","m":0,"epsilon":1}
//   {"family":"mixture","components":[{"alpha":0.5,"family":"gengauss",...},...]}
//   {"family":"triangular","b":0,"s_l":1,"s_r":0.5}
//   {"family":"raised_cosine","m":0,"s":1}
ParsedSpec parse_density_spec(const nlohmann::json& j);
ParsedSpec parse_density_spec_text(const std::string& text);

// Canonical re-emission; parse(emit(spec)) reproduces an identical structure.
nlohmann::json density_spec_json(const ParsedSpec& spec);

// Certificate serialization carrying every certificate field; "upper" and
// "slack_upper" are null when no finite upper bound applies, "upper_tight"
// appears only when the tighter split-based bound was computed.  Pass the
// originating spec to embed it under "density".
nlohmann::json certificate_json(const BoundCertificate& cert);
nlohmann::json certificate_json(const BoundCertificate& cert, const nlohmann::json& density_spec);

nlohmann::json step_approx_json(const StepApproximation& sa);
StepApproximation step_approx_from_json(const nlohmann::json& j);

nlohmann::json product_report_json(const ProductBoundReport& rep);

// Certification dispatch shared by the C API and the CLI: route by explicit
// tag when given, otherwise infer from the family (pure-uniform mixtures get
// the uniform-mixture bound, other mixtures the general mixture bound,
// symmetric shapes the symmetric-shape bound, asymmetric shapes the split
// bound).  Throws hypothesis_error when the requested bound cannot accept
// the density's family.
BoundCertificate certify_spec(const ParsedSpec& spec, std::optional<TheoremTag> override_tag,
                              double tol = 1e-7);

// ---- fixed-format tables ----

std::string format_g12(double v);  // printf "%.12g"

// Ratio-curve sweep: one row per theta with 1/A(theta), the two-component
// mixture upper factor B at r=1 and r=10 (first component theta1 with
// weight alpha1), and the universal floor 1/(2 pi e).
struct SweepRow {
    double theta = 0.0;
    double inv_a = 0.0;
    double b_r1 = 0.0;
    double b_r10 = 0.0;
    double floor = 0.0;
};
std::vector<SweepRow> sweep_theta(double theta_min, double theta_max, int points,
                                  double alpha1 = 0.5, double theta1 = 2.0);

// Headers: "theta,inv_A,B_r1,B_r10,inv_two_pi_e"
std::string sweep_theta_csv(const std::vector<SweepRow>& rows);
// "eps2,variance,entropy_power,ratio"
std::string counterexample_csv(const std::vector<CounterexampleRow>& rows);
// "n,var_gap,ep_ratio_gap"
std::string convergence_csv(const ConvergenceReport& rep);

}  // namespace varbound
