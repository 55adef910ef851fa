#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "portkit/config.hpp"

namespace {

using namespace portkit;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, bool wide) {
    if (!v) return "singular";
    return wide ? fmt17(*v) : fmt6(*v);
}

struct CommonOpts {
    std::string config_path;
    std::string backend_override;
    std::string csv_path;
    std::string json_path;
    unsigned seed = 0;
};

RunConfig load(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.config_path);
    if (!opts.backend_override.empty()) {
        if (opts.backend_override == "choquet")
            cfg.backend = BackendSelection::choquet;
        else if (opts.backend_override == "distributional")
            cfg.backend = BackendSelection::distributional;
        else if (opts.backend_override == "both")
            cfg.backend = BackendSelection::both;
        else
            throw ConfigError("--backend must be choquet, distributional, or both");
    }
    if (const char* env = std::getenv("PORTKIT_QUAD_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end == env || !(tol > 0.0))
            throw ConfigError("PORTKIT_QUAD_TOL must be a positive number");
        cfg.quadrature.abs_tol = tol;
        cfg.quadrature.rel_tol = tol;
    }
    return cfg;
}

std::vector<Backend> selected_backends(BackendSelection sel) {
    switch (sel) {
        case BackendSelection::choquet: return {Backend::choquet};
        case BackendSelection::distributional: return {Backend::distributional};
        default: return {Backend::choquet, Backend::distributional};
    }
}

int cmd_moments(const CommonOpts& opts) {
    const RunConfig cfg = load(opts);
    const FuzzyNumber zeta = PortfolioProblem{cfg.w0, cfg.r, cfg.risky}
                                 .excess_return();
    const auto tri = as_triangular(zeta);
    nlohmann::json out = nlohmann::json::array();
    std::printf("%-16s %12s %12s %12s %12s\n", "backend", "q", "v", "sk", "ku");
    for (Backend b : selected_backends(cfg.backend)) {
        const MomentSet m = moment_set(zeta, b, cfg.quadrature);
        std::printf("%-16s %12s %12s %12s %12s\n", to_string(b).c_str(),
                    fmt6(m.q).c_str(), fmt6(m.v).c_str(), fmt6(m.sk).c_str(),
                    fmt6(m.ku).c_str());
        out.push_back(moment_set_to_json(m));
        if (tri && b == Backend::choquet) {
            const MomentSet cf =
                triangular_closed_moments((*tri)[0], (*tri)[1], (*tri)[2]);
            std::printf("%-16s %12s %12s %12s %12s\n", "closed-form",
                        fmt6(cf.q).c_str(), fmt6(cf.v).c_str(),
                        fmt6(cf.sk).c_str(), fmt6(cf.ku).c_str());
            std::printf("%-16s %12s %12s %12s %12s\n", "discrepancy",
                        fmt6(m.q - cf.q).c_str(), fmt6(m.v - cf.v).c_str(),
                        fmt6(m.sk - cf.sk).c_str(), fmt6(m.ku - cf.ku).c_str());
            std::printf("%-16s %12s %12s %12s %12s\n", "printed-skew", "-",
                        "-",
                        fmt6(triangular_skewness_printed((*tri)[0], (*tri)[1],
                                                         (*tri)[2]))
                            .c_str(),
                        "-");
            nlohmann::json cj = moment_set_to_json(cf);
            cj["backend"] = "closed-form";
            out.push_back(cj);
        }
    }
    if (!opts.json_path.empty()) {
        std::ofstream f(opts.json_path);
        f << out.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_indices(const CommonOpts& opts) {
    const RunConfig cfg = load(opts);
    if (!cfg.utility) throw ConfigError("missing key \"utility\"");
    const double w = cfg.w0 * (1.0 + cfg.r);
    const UtilityFunction& u = *cfg.utility;
    auto index = [&](const char* name, auto&& get) -> std::optional<double> {
        try {
            const double v = get();
            std::printf("%-8s %s\n", name, fmt6(v).c_str());
            return v;
        } catch (const SingularityError&) {
            std::printf("%-8s singular\n", name);
            return std::nullopt;
        }
    };
    std::printf("family %s, w = %s\n", to_string(u.family()).c_str(),
                fmt6(w).c_str());
    const auto r = index("r", [&] { return u.arrow_pratt(w); });
    const auto p = index("p", [&] { return u.prudence(w); });
    const auto t = index("t", [&] { return u.temperance(w); });
    if (r && p && *r != 0.0) {
        std::printf("%-8s %s\n", "p/r", fmt6(*p / *r).c_str());
        std::printf("%-8s %s\n", "p/r^2", fmt6(*p / (*r * *r)).c_str());
        std::printf("%-8s %s\n", "p^2/r^3",
                    fmt6(*p * *p / (*r * *r * *r)).c_str());
        if (t && *p != 0.0)
            std::printf("%-8s %s\n", "t/p", fmt6(*t / *p).c_str());
    }
    return kExitOk;
}

int cmd_solve(const CommonOpts& opts) {
    const RunConfig cfg = load(opts);
    if (!cfg.utility) throw ConfigError("missing key \"utility\"");
    const PortfolioProblem problem{cfg.w0, cfg.r, cfg.risky};
    const AllocationReport rep = solve_report(
        *cfg.utility, problem.wealth(), problem.excess_return(), cfg.quadrature);
    std::printf("w            %s\n", fmt6(rep.w).c_str());
    std::printf("Q(zeta)      %s\n", fmt6(rep.kmu).c_str());
    std::printf("alpha_exact  %s%s  (|V'| = %s)\n", fmt6(rep.exact.alpha).c_str(),
                rep.exact.boundary ? " [boundary]" : "",
                fmt6(std::abs(rep.exact.v_prime)).c_str());
    for (int n : {1, 2, 3}) {
        std::printf("alpha_%d      %-12s (distributional)  %-12s (choquet)\n", n,
                    fmt_opt(rep.alpha_order_distributional.at(n), false).c_str(),
                    fmt_opt(rep.alpha_order_choquet.at(n), false).c_str());
    }
    for (const auto& [n, root] : rep.foc_roots)
        std::printf("foc_root_%d   %s\n", n, fmt6(root).c_str());
    const nlohmann::json j = report_to_json(rep);
    if (!opts.json_path.empty()) {
        std::ofstream f(opts.json_path);
        f << j.dump(2) << "\n";
    } else {
        std::printf("%s\n", j.dump(2).c_str());
    }
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
    const RunConfig cfg = load(opts);
    if (!cfg.utility) throw ConfigError("missing key \"utility\"");
    if (cfg.sweep_k.empty()) throw ConfigError("\"sweep.k\" must be non-empty");
    const PortfolioProblem problem{cfg.w0, cfg.r, cfg.risky};
    const FuzzyNumber zeta = problem.excess_return();
    const double w = problem.wealth();

    std::ofstream csv;
    std::ostream* out = &std::cout;
    if (!opts.csv_path.empty()) {
        csv.open(opts.csv_path);
        if (!csv) throw ConfigError("cannot open CSV output: " + opts.csv_path);
        out = &csv;
    }
    *out << "k,kmu,alpha_exact,alpha_1,alpha_2,alpha_3,err_1,err_2,err_3,"
            "backend,foc_root_3\n";
    try {
        for (Backend b : selected_backends(cfg.backend)) {
            const auto rows =
                run_sweep(*cfg.utility, w, zeta, cfg.sweep_k, b, cfg.quadrature);
            std::vector<double> ks, e1, e2;
            for (const auto& row : rows) {
                *out << fmt17(row.k) << ',' << fmt17(row.kmu) << ','
                     << fmt17(row.alpha_exact) << ','
                     << fmt_opt(row.alpha_1, true) << ','
                     << fmt_opt(row.alpha_2, true) << ','
                     << fmt_opt(row.alpha_3, true) << ','
                     << fmt_opt(row.err_1, true) << ','
                     << fmt_opt(row.err_2, true) << ','
                     << fmt_opt(row.err_3, true) << ','
                     << to_string(row.backend) << ','
                     << fmt17(row.foc_root_3) << '\n';
                if (row.err_1 && row.err_2 && *row.err_1 > 0 && *row.err_2 > 0) {
                    ks.push_back(row.k);
                    e1.push_back(*row.err_1);
                    e2.push_back(*row.err_2);
                }
            }
            if (ks.size() >= 2) {
                std::printf("[%s] log-log error slope order1: %s\n",
                            to_string(b).c_str(),
                            fmt6(log_log_slope(ks, e1)).c_str());
                std::printf("[%s] log-log error slope order2: %s\n",
                            to_string(b).c_str(),
                            fmt6(log_log_slope(ks, e2)).c_str());
            }
        }
    } catch (const std::exception& e) {
        *out << "# aborted\n";
        out->flush();
        throw;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"credibilistic portfolio toolkit"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "problem config JSON")
            ->required();
        sub->add_option("--backend", opts.backend_override,
                        "choquet|distributional|both");
        sub->add_option("--seed", opts.seed, "RNG seed (reproducibility)");
        sub->add_option("--json", opts.json_path, "machine-readable output path");
        return sub;
    };
    auto* moments = add_common(app.add_subcommand("moments", "credibilistic moments"));
    auto* indices = add_common(app.add_subcommand("indices", "risk attitude indices"));
    auto* solve = add_common(app.add_subcommand("solve", "optimal allocation"));
    auto* sweep = add_common(app.add_subcommand("sweep", "k-sweep to CSV"));
    sweep->add_option("--csv", opts.csv_path, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (moments->parsed()) return cmd_moments(opts);
        if (indices->parsed()) return cmd_indices(opts);
        if (solve->parsed()) return cmd_solve(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
