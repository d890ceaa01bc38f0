#include "cli.h"

#include "potential_parser.h"

#include "dunham/errors.h"
#include "dunham/oracle.h"
#include "dunham/series_json.h"
#include "dunham/solver.h"
#include "dunham/wkb_series.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace dunham::cli {

namespace {

using nlohmann::json;

constexpr const char* kConvention = "B_0 + sum_{n=1}^{N} B_2n = (K + 1/2) pi";

struct Options {
    std::string potential;
    int n_max = -1;
    int levels = 4;
    std::vector<int> orders;
    std::string order_list;
    std::string format = "plain";
    double margin = 0.5;
    std::optional<double> tol;
    double seed_bracket = 1.5;
    bool include_odd_numeric = false;
    bool numeric_maslov = false;
    std::string mode = "basis";
    int basis_size = 128;
    int grid_points = 1000;
    std::optional<double> half_width;
    std::string manifest_out;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed(double x, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string general(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SolverConfig solver_config(const Options& o) {
    SolverConfig cfg;
    cfg.numeric.margin = o.margin;
    if (o.tol) cfg.numeric.quad_rel_tol = *o.tol;
    cfg.seed_bracket = o.seed_bracket;
    cfg.include_odd_numeric = o.include_odd_numeric;
    cfg.use_analytic_maslov = !o.numeric_maslov;
    return cfg;
}

OracleConfig oracle_config(const Options& o) {
    OracleConfig cfg;
    cfg.mode = o.mode == "fd" ? OracleMode::finite_difference : OracleMode::oscillator_basis;
    cfg.basis_size = o.basis_size;
    cfg.grid_points = o.grid_points;
    cfg.domain_half_width = o.half_width;
    return cfg;
}

json solver_config_json(const SolverConfig& c) {
    const auto& n = c.numeric;
    return {
        {"margin", n.margin},
        {"root_clearance", n.root_clearance},
        {"min_aspect", n.min_aspect},
        {"initial_nodes", n.initial_nodes},
        {"max_nodes", n.max_nodes},
        {"quad_rel_tol", n.quad_rel_tol},
        {"quad_abs_tol", n.quad_abs_tol},
        {"reality_tol", n.reality_tol},
        {"closure_tol", n.closure_tol},
        {"max_phase_step", n.max_phase_step},
        {"branch_tol", n.branch_tol},
        {"real_root_tol", n.real_root_tol},
        {"degeneracy_tol", n.degeneracy_tol},
        {"use_analytic_maslov", c.use_analytic_maslov},
        {"include_odd_numeric", c.include_odd_numeric},
        {"seed_bracket", c.seed_bracket},
        {"bracket_expansion_cap", c.bracket_expansion_cap},
        {"bisection_rel_width", c.bisection_rel_width},
        {"residual_tol", c.residual_tol},
        {"odd_spot_check_tol", c.odd_spot_check_tol},
    };
}

json oracle_config_json(const OracleConfig& c) {
    json j{
        {"mode", c.mode == OracleMode::finite_difference ? "fd" : "basis"},
        {"basis_size", c.basis_size},
        {"grid_points", c.grid_points},
        {"convergence_tol", c.convergence_tol},
    };
    j["domain_half_width"] = c.domain_half_width ? json(*c.domain_half_width) : json(nullptr);
    return j;
}

void write_manifest(const Options& o, const std::string& command, json config, int argc, const char* const* argv) {
    if (o.manifest_out.empty()) return;
    json args = json::array();
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    const json manifest{
        {"tool", "dunham"},
        {"version", kVersion},
        {"command", command},
        {"arguments", args},
        {"format", o.format},
        {"config", std::move(config)},
        {"timestamp", utc_timestamp()},
    };
    std::ofstream f(o.manifest_out);
    if (!f) throw UsageError("cannot write manifest to '" + o.manifest_out + "'");
    f << manifest.dump(2) << '\n';
}

// terms

int cmd_terms(const Options& o, std::ostream& out) {
    const int n_max = o.n_max < 0 ? 3 : o.n_max;
    const WkbSeries s = gen_terms(n_max);
    if (o.format == "json") {
        out << to_json(s).dump(2) << '\n';
    } else if (o.format == "latex") {
        for (int n = 0; n <= n_max; ++n) out << "T_{" << n << "} = " << to_latex(s.term(n)) << '\n';
    } else {
        for (int n = 0; n <= n_max; ++n) out << "T_" << n << " = " << to_plain(s.term(n)) << '\n';
    }
    return kOk;
}

// verify-odd

int cmd_verify_odd(const Options& o, std::ostream& out) {
    const int n_max = o.n_max < 0 ? 7 : o.n_max;
    if (n_max < 1) throw UsageError("--n-max must be >= 1 for verify-odd");
    const WkbSeries s = gen_terms(2 * n_max + 1);
    bool all = true;
    json rows = json::array();
    if (o.format == "plain") {
        out << "   n  term     F_n monomials  Phi_n monomials  verified   seconds\n";
    }
    for (int n = 1; n <= n_max; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const auto cert = certify_total_derivative(s, n);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && cert.verified;
        if (o.format == "json") {
            rows.push_back({{"n", n},
                            {"odd_order", 2 * n + 1},
                            {"verified", cert.verified},
                            {"f_monomials", cert.f_n.size()},
                            {"phi_monomials", cert.phi_n.size()}});
        } else {
            out << pad(std::to_string(n), 4) << "  " << pad("T_" + std::to_string(2 * n + 1), 4)
                << pad(std::to_string(cert.f_n.size()), 18) << pad(std::to_string(cert.phi_n.size()), 17)
                << pad(cert.verified ? "yes" : "NO", 10) << pad(fixed(seconds, 3), 10) << '\n';
        }
    }
    if (o.format == "json") {
        out << json{{"schema", "dunham.verify-odd/1"}, {"n_max", n_max}, {"all_verified", all}, {"certificates", rows}}
                   .dump(2)
            << '\n';
    } else {
        out << (all ? "all odd orders are exact derivatives\n" : "VERIFICATION FAILED\n");
    }
    return all ? kOk : kVerificationFailure;
}

// spectrum

json level_json(const QuantizationResult& r) {
    return {
        {"K", r.k},
        {"order", r.order},
        {"E", r.energy},
        {"residual", r.residual},
        {"actions", r.actions},
        {"optimal_truncation_index", r.optimal_truncation_index},
        {"warnings", r.warnings},
    };
}

std::string spectrum_csv_header(int order) {
    std::string h = "K,E,residual";
    for (int n = 0; n <= order; ++n) h += ",B_" + std::to_string(2 * n);
    return h + ",optimal_truncation_index";
}

void report_level_errors(const std::vector<LevelError>& errors, std::ostream& err) {
    for (const auto& e : errors) err << "error: K = " << e.k << ": " << e.message << '\n';
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.orders.size() != 1) throw UsageError("spectrum takes exactly one --order");
    if (o.levels < 1) throw UsageError("--levels must be >= 1");
    const int order = o.orders.front();
    if (order < 0) throw UsageError("--order must be >= 0");
    const Potential v = parse_potential(o.potential);
    const SpectrumResult s = spectrum(v, o.levels, order, solver_config(o));

    if (o.format == "json") {
        json levels = json::array();
        for (const auto& r : s.levels) levels.push_back(level_json(r));
        json errors = json::array();
        for (const auto& e : s.errors) errors.push_back({{"K", e.k}, {"message", e.message}});
        out << json{{"schema", "dunham.spectrum/1"},
                    {"source", "dunham"},
                    {"potential", v.to_string()},
                    {"order", order},
                    {"convention", kConvention},
                    {"levels", levels},
                    {"errors", errors}}
                   .dump(2)
            << '\n';
    } else if (o.format == "csv") {
        out << spectrum_csv_header(order) << '\n';
        for (const auto& r : s.levels) {
            out << r.k << ',' << csv_number(r.energy) << ',' << csv_number(r.residual);
            for (double b : r.actions) out << ',' << csv_number(b);
            out << ',' << r.optimal_truncation_index << '\n';
        }
    } else {
        out << "# V(x) = " << v.to_string() << ", order N = " << order << ", " << kConvention << '\n';
        out << pad("K", 4) << pad("E", 20) << pad("residual", 11);
        for (int n = 0; n <= order; ++n) out << pad("B_" + std::to_string(2 * n), 20);
        out << pad("opt", 5) << '\n';
        for (const auto& r : s.levels) {
            out << pad(std::to_string(r.k), 4) << pad(fixed(r.energy), 20) << pad(sci(r.residual), 11);
            for (double b : r.actions) out << pad(general(b), 20);
            out << pad(std::to_string(r.optimal_truncation_index), 5) << '\n';
        }
    }
    for (const auto& r : s.levels) {
        for (const auto& w : r.warnings) err << "warning: K = " << r.k << ": " << w << '\n';
    }
    report_level_errors(s.errors, err);
    return s.errors.empty() ? kOk : kNumericFailure;
}

// oracle

int cmd_oracle(const Options& o, std::ostream& out) {
    if (o.levels < 1) throw UsageError("--levels must be >= 1");
    const Potential v = parse_potential(o.potential);
    const OracleConfig cfg = oracle_config(o);
    const OracleSpectrum s = eigensolve(v, o.levels, cfg);
    if (o.format == "json") {
        json levels = json::array();
        for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
            levels.push_back({{"K", k}, {"E", s.eigenvalues[k]}, {"convergence_estimate", s.convergence_estimate[k]}});
        }
        out << json{{"schema", "dunham.spectrum/1"},
                    {"source", "oracle"},
                    {"potential", v.to_string()},
                    {"mode", o.mode},
                    {"levels", levels},
                    {"errors", json::array()}}
                   .dump(2)
            << '\n';
    } else if (o.format == "csv") {
        out << "K,E,convergence_estimate\n";
        for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
            out << k << ',' << csv_number(s.eigenvalues[k]) << ',' << csv_number(s.convergence_estimate[k]) << '\n';
        }
    } else {
        out << "# V(x) = " << v.to_string() << ", " << (o.mode == "fd" ? "finite differences" : "oscillator basis")
            << '\n';
        out << pad("K", 4) << pad("E", 20) << pad("estimate", 11) << '\n';
        for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
            out << pad(std::to_string(k), 4) << pad(fixed(s.eigenvalues[k]), 20)
                << pad(sci(s.convergence_estimate[k]), 11) << '\n';
        }
    }
    return kOk;
}

// compare

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.orders.empty()) throw UsageError("compare needs a non-empty --order list");
    if (o.levels < 1) throw UsageError("--levels must be >= 1");
    for (int n : o.orders) {
        if (n < 0) throw UsageError("--order entries must be >= 0");
    }
    const Potential v = parse_potential(o.potential);
    const OracleSpectrum oracle = eigensolve(v, o.levels, oracle_config(o));

    struct Row {
        int k;
        int order;
        double e;
        double e_oracle;
    };
    std::vector<Row> rows;
    std::vector<LevelError> errors;
    for (int order : o.orders) {
        const SpectrumResult s = spectrum(v, o.levels, order, solver_config(o));
        for (const auto& r : s.levels) rows.push_back({r.k, order, r.energy, oracle.eigenvalues[static_cast<std::size_t>(r.k)]});
        for (const auto& e : s.errors) errors.push_back({e.k, "order " + std::to_string(order) + ": " + e.message});
    }

    if (o.format == "json") {
        json j = json::array();
        for (const auto& r : rows) {
            j.push_back({{"K", r.k},
                         {"order", r.order},
                         {"E_dunham", r.e},
                         {"E_oracle", r.e_oracle},
                         {"abs_error", std::abs(r.e - r.e_oracle)},
                         {"rel_error", std::abs(r.e - r.e_oracle) / std::abs(r.e_oracle)}});
        }
        out << json{{"schema", "dunham.compare/1"}, {"potential", v.to_string()}, {"orders", o.orders}, {"rows", j}}.dump(2)
            << '\n';
    } else if (o.format == "csv") {
        out << "K,order,E_dunham,E_oracle,abs_error,rel_error\n";
        for (const auto& r : rows) {
            const double abs_err = std::abs(r.e - r.e_oracle);
            out << r.k << ',' << r.order << ',' << csv_number(r.e) << ',' << csv_number(r.e_oracle) << ','
                << csv_number(abs_err) << ',' << csv_number(abs_err / std::abs(r.e_oracle)) << '\n';
        }
    } else {
        out << "# V(x) = " << v.to_string() << ", " << kConvention << '\n';
        out << pad("K", 4) << pad("order", 7) << pad("E_dunham", 20) << pad("E_oracle", 20) << pad("abs_error", 11)
            << pad("rel_error", 11) << '\n';
        for (const auto& r : rows) {
            const double abs_err = std::abs(r.e - r.e_oracle);
            out << pad(std::to_string(r.k), 4) << pad(std::to_string(r.order), 7) << pad(fixed(r.e), 20)
                << pad(fixed(r.e_oracle), 20) << pad(sci(abs_err), 11) << pad(sci(abs_err / std::abs(r.e_oracle)), 11)
                << '\n';
        }
    }
    report_level_errors(errors, err);
    return errors.empty() ? kOk : kNumericFailure;
}

std::vector<int> parse_order_list(const std::string& text) {
    std::vector<int> orders;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = text.find(',', start);
        const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw UsageError("--order expects a comma-separated list of integers");
        orders.push_back(value);
        if (end == std::string::npos) return orders;
        start = end + 1;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Higher-order WKB (Dunham) quantization of polynomial potentials"};
    app.name("dunham");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    const auto add_format = [&](CLI::App* sub, std::vector<std::string> choices) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(choices)));
    };
    const auto add_manifest = [&](CLI::App* sub) {
        sub->add_option("--manifest-out", o.manifest_out, "Write a JSON run manifest to this path");
    };
    const auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--margin", o.margin, "Contour margin beyond the turning points")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol", o.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed-bracket", o.seed_bracket, "Initial bracket factor around the leading-order seed")
            ->check(CLI::Range(1.0001, 1e6));
        sub->add_flag("--include-odd-numeric", o.include_odd_numeric, "Integrate B_3, B_5, ... instead of dropping them");
        sub->add_flag("--numeric-maslov", o.numeric_maslov, "Integrate B_1 instead of using -pi/2");
    };
    const auto add_oracle = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "Oracle discretization")->check(CLI::IsMember({"basis", "fd"}));
        sub->add_option("--basis-size", o.basis_size, "Oscillator basis size");
        sub->add_option("--grid-points", o.grid_points, "Interior points of the coarsest finite-difference grid");
        sub->add_option("--half-width", o.half_width, "Finite-difference box half-width L");
    };

    auto* terms = app.add_subcommand("terms", "Print the series terms T_0 .. T_n");
    terms->add_option("--n-max", o.n_max, "Highest order (default 3)")->check(CLI::NonNegativeNumber);
    add_format(terms, {"plain", "latex", "json"});
    add_manifest(terms);

    auto* verify = app.add_subcommand("verify-odd", "Certify that odd terms are exact derivatives");
    verify->add_option("--n-max", o.n_max, "Check T_3 .. T_{2n+1} (default 7)");
    add_format(verify, {"plain", "json"});
    add_manifest(verify);

    auto* spec = app.add_subcommand("spectrum", "Solve the truncated quantization condition for K = 0 .. levels-1");
    spec->add_option("potential", o.potential, "Polynomial in x, e.g. \"0.5*x^2 + 0.1*x^4\"")->required();
    spec->add_option("--levels", o.levels, "Number of levels");
    spec->add_option("--order", o.orders, "Truncation order N (terms up to T_2N)")->expected(1);
    add_format(spec, {"plain", "json", "csv"});
    add_solver(spec);
    add_manifest(spec);

    auto* orc = app.add_subcommand("oracle", "Reference eigenvalues by direct diagonalization");
    orc->add_option("potential", o.potential, "Polynomial in x")->required();
    orc->add_option("--levels,--count", o.levels, "Number of levels");
    add_format(orc, {"plain", "json", "csv"});
    add_oracle(orc);
    add_manifest(orc);

    auto* cmp = app.add_subcommand("compare", "Tabulate WKB levels against the oracle");
    cmp->add_option("potential", o.potential, "Polynomial in x")->required();
    cmp->add_option("--levels", o.levels, "Number of levels");
    cmp->add_option("--order", o.order_list, "Comma-separated truncation orders, e.g. 0,1,2")->required();
    add_format(cmp, {"plain", "json", "csv"});
    add_solver(cmp);
    add_oracle(cmp);
    add_manifest(cmp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (spec->parsed() && o.orders.empty()) o.orders = {2};
        if (cmp->parsed()) o.orders = parse_order_list(o.order_list);
        int code = kOk;
        json config;
        if (terms->parsed()) {
            code = cmd_terms(o, out);
            config = {{"n_max", o.n_max < 0 ? 3 : o.n_max}};
        } else if (verify->parsed()) {
            code = cmd_verify_odd(o, out);
            config = {{"n_max", o.n_max < 0 ? 7 : o.n_max}};
        } else if (spec->parsed()) {
            code = cmd_spectrum(o, out, err);
            config = {{"potential", o.potential}, {"levels", o.levels}, {"order", o.orders.front()},
                      {"solver", solver_config_json(solver_config(o))}};
        } else if (orc->parsed()) {
            code = cmd_oracle(o, out);
            config = {{"potential", o.potential}, {"levels", o.levels}, {"oracle", oracle_config_json(oracle_config(o))}};
        } else {
            code = cmd_compare(o, out, err);
            config = {{"potential", o.potential},
                      {"levels", o.levels},
                      {"orders", o.orders},
                      {"solver", solver_config_json(solver_config(o))},
                      {"oracle", oracle_config_json(oracle_config(o))}};
        }
        const std::string command = app.get_subcommands().front()->get_name();
        write_manifest(o, command, std::move(config), argc, argv);
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const VerificationError& e) {
        err << "verification failure: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
}

}  // namespace dunham::cli
