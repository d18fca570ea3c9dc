// varbound — command line front end.
//
// Subcommands:
//   sweep-theta      ratio-curve table over the shape parameter theta (CSV)
//   certify          bound certificate for a density spec file (JSON)
//   approx-converge  step-approximation convergence table for a shape (CSV)
//   counterexample   two-plateau divergence table (CSV)
//   product          product bound across independent marginals (JSON)
//
// Exit status: 0 = pass, 1 = a bound was violated, 2 = usage, parse, or
// hypothesis error (message on stderr).
//
// This binary talks to the library exclusively through the public C API.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "varbound.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

bool read_input(const std::string& path, std::string& out) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        out = ss.str();
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open input file: " << path << "\n";
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file: " << path << "\n";
        return false;
    }
    out << content;
    return static_cast<bool>(out);
}

int report_failure(vb_status status) {
    std::cerr << "error (" << vb_status_name(status) << "): " << vb_last_error() << "\n";
    return kExitUsage;
}

bool check_format(const std::string& format, const std::string& required,
                  const std::string& subcommand) {
    if (format == required) return true;
    std::cerr << "error: subcommand '" << subcommand << "' emits " << required << " only (got --format "
              << format << ")\n";
    return false;
}

std::string owned_string(char* s) {
    std::string out = s ? s : "";
    vb_string_free(s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-power variance bounds: tables and certificates"};
    app.require_subcommand(1);

    std::string input_path;
    std::string output_path;
    double tol = 1e-7;

    // ---- sweep-theta ----
    auto* sweep = app.add_subcommand(
        "sweep-theta", "table of 1/A(theta), mixture upper factors B(r=1), B(r=10), and 1/(2 pi e)");
    double theta_min = 0.3, theta_max = 5.0, alpha1 = 0.5, theta1 = 2.0;
    int points = 100;
    sweep->add_option("--theta-min", theta_min, "grid start (default 0.3)");
    sweep->add_option("--theta-max", theta_max, "grid end (default 5)");
    sweep->add_option("--points", points, "grid size (default 100)");
    sweep->add_option("--alpha1", alpha1, "weight of the fixed mixture component (default 0.5)");
    sweep->add_option("--theta1", theta1, "shape of the fixed mixture component (default 2)");
    std::string sweep_format = "csv";
    sweep->add_option("--output,-o", output_path, "output file (default stdout)");
    sweep->add_option("--format", sweep_format, "csv (the only format for tables)");

    // ---- certify ----
    auto* certify = app.add_subcommand("certify", "produce a bound certificate for a density spec");
    std::string theorem;
    certify->add_option("--input,-i", input_path, "density spec JSON file ('-' for stdin)")
        ->required();
    certify->add_option("--theorem", theorem,
                        "force a bound: thm1|cor1|cor2|thm2|thm3|lower_only (default: infer)");
    certify->add_option("--tol", tol, "certification tolerance (default 1e-7)");
    std::string certify_format = "json";
    certify->add_option("--output,-o", output_path, "output file (default stdout)");
    certify->add_option("--format", certify_format, "json (the only format for certificates)");

    // ---- approx-converge ----
    auto* converge =
        app.add_subcommand("approx-converge", "step-approximation convergence table for a shape");
    std::vector<int> n_values = {4, 8, 16, 32, 64, 128, 256};
    converge->add_option("--input,-i", input_path, "shape spec JSON file ('-' for stdin)")
        ->required();
    converge->add_option("--n", n_values, "grid sizes (default 4 8 16 32 64 128 256)");
    std::string converge_format = "csv";
    converge->add_option("--output,-o", output_path, "output file (default stdout)");
    converge->add_option("--format", converge_format, "csv (the only format for tables)");

    // ---- counterexample ----
    auto* cex = app.add_subcommand(
        "counterexample", "two-plateau mixtures whose variance/entropy-power ratio diverges");
    double cex_alpha1 = 0.5, cex_eps1 = 1.0;
    int decades = 4;
    cex->add_option("--alpha1", cex_alpha1, "weight of the narrow plateau (default 0.5)");
    cex->add_option("--eps1", cex_eps1, "height of the narrow plateau (default 1)");
    cex->add_option("--decades", decades,
                    "rows at eps2 = eps1*10^-j for j = 0..decades (default 4)");
    std::string cex_format = "csv";
    cex->add_option("--output,-o", output_path, "output file (default stdout)");
    cex->add_option("--format", cex_format, "csv (the only format for tables)");

    // ---- product ----
    auto* product = app.add_subcommand(
        "product", "product bound across independent marginals (file: array of density specs)");
    product->add_option("--input,-i", input_path, "JSON array of density specs ('-' for stdin)")
        ->required();
    product->add_option("--tol", tol, "certification tolerance (default 1e-7)");
    std::string product_format = "json";
    product->add_option("--output,-o", output_path, "output file (default stdout)");
    product->add_option("--format", product_format, "json (the only format for reports)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    if (sweep->parsed()) {
        if (!check_format(sweep_format, "csv", "sweep-theta")) return kExitUsage;
        char* raw = nullptr;
        const vb_status st = vb_sweep_theta_csv(theta_min, theta_max, points, alpha1, theta1, &raw);
        if (st != VB_OK) return report_failure(st);
        return write_output(output_path, owned_string(raw)) ? kExitPass : kExitUsage;
    }

    if (certify->parsed()) {
        if (!check_format(certify_format, "json", "certify")) return kExitUsage;
        std::string spec;
        if (!read_input(input_path, spec)) return kExitUsage;
        vb_density* density = nullptr;
        vb_status st = vb_density_from_spec(spec.c_str(), &density);
        if (st != VB_OK) return report_failure(st);
        vb_certificate* cert = nullptr;
        st = vb_certify(density, theorem.empty() ? nullptr : theorem.c_str(), tol, &cert);
        if (st != VB_OK) {
            vb_density_free(density);
            return report_failure(st);
        }
        char* raw = nullptr;
        st = vb_certificate_to_json(cert, &raw);
        const bool passed = vb_certificate_passed(cert) == 1;
        vb_certificate_free(cert);
        vb_density_free(density);
        if (st != VB_OK) return report_failure(st);
        if (!write_output(output_path, owned_string(raw))) return kExitUsage;
        return passed ? kExitPass : kExitViolation;
    }

    if (converge->parsed()) {
        if (!check_format(converge_format, "csv", "approx-converge")) return kExitUsage;
        std::string spec;
        if (!read_input(input_path, spec)) return kExitUsage;
        char* raw = nullptr;
        const vb_status st = vb_convergence_csv(spec.c_str(), n_values.data(),
                                                static_cast<int>(n_values.size()), &raw);
        if (st != VB_OK) return report_failure(st);
        return write_output(output_path, owned_string(raw)) ? kExitPass : kExitUsage;
    }

    if (cex->parsed()) {
        if (!check_format(cex_format, "csv", "counterexample")) return kExitUsage;
        if (decades < 0) {
            std::cerr << "error: --decades must be >= 0\n";
            return kExitUsage;
        }
        std::vector<double> eps2;
        for (int j = 0; j <= decades; ++j) eps2.push_back(cex_eps1 * std::pow(10.0, -j));
        char* raw = nullptr;
        const vb_status st = vb_counterexample_csv(cex_alpha1, cex_eps1, eps2.data(),
                                                   static_cast<int>(eps2.size()), &raw);
        if (st != VB_OK) return report_failure(st);
        return write_output(output_path, owned_string(raw)) ? kExitPass : kExitUsage;
    }

    if (product->parsed()) {
        if (!check_format(product_format, "json", "product")) return kExitUsage;
        std::string text;
        if (!read_input(input_path, text)) return kExitUsage;
        const auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
        const nlohmann::json* specs = &parsed;
        if (parsed.is_object() && parsed.contains("marginals")) specs = &parsed.at("marginals");
        if (parsed.is_discarded() || !specs->is_array() || specs->empty()) {
            std::cerr << "error: product input must be a JSON array of density specs "
                         "(or {\"marginals\": [...]})\n";
            return kExitUsage;
        }
        std::vector<std::string> storage;
        storage.reserve(specs->size());
        for (const auto& s : *specs) storage.push_back(s.dump());
        std::vector<const char*> pointers;
        pointers.reserve(storage.size());
        for (const auto& s : storage) pointers.push_back(s.c_str());
        char* raw = nullptr;
        const vb_status st = vb_product_report_json(pointers.data(),
                                                    static_cast<int>(pointers.size()), tol, &raw);
        if (st != VB_OK) return report_failure(st);
        const std::string report = owned_string(raw);
        if (!write_output(output_path, report)) return kExitUsage;
        // The C API refuses non-passing marginals, so reaching here with
        // holds=false can only mean the product inequality itself failed.
        return report.find("\"holds\": true") != std::string::npos ? kExitPass : kExitViolation;
    }

    std::cerr << "error: no subcommand selected\n";
    return kExitUsage;
}
