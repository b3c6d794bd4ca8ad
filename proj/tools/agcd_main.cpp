// Command-line front end: single runs, exact extraction, noise sweeps,
// iteration traces, and controllability distance. Exit codes: 0 converged,
// 2 finished without convergence, 1 error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agcd/agcd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct OdeFlags {
    double tol = 1e-8;
    double eps0 = 1e-2;
    double delta = 1e-2;
    double h0 = 0.1;
    double gamma = 1.2;
    int max_inner = 5000;
    int max_outer = 200;
    int ell = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "stopping tolerance, relative to sigma_max");
        cmd->add_option("--eps0", eps0, "initial perturbation size");
        cmd->add_option("--delta", delta, "initial continuation increment");
        cmd->add_option("--h0", h0, "initial integrator step");
        cmd->add_option("--gamma", gamma, "step adaptation factor");
        cmd->add_option("--max-inner", max_inner, "iteration cap per phase");
        cmd->add_option("--max-outer", max_outer, "continuation phase cap");
        cmd->add_option("--ell", ell, "resultant window override (0: automatic)");
    }

    agcd::OdeParams params() const {
        agcd::OdeParams p;
        p.tol = tol;
        p.eps0 = eps0;
        p.delta = delta;
        p.h0 = h0;
        p.gamma = gamma;
        p.max_inner = max_inner;
        p.max_outer = max_outer;
        p.ell = ell;
        return p;
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        agcd::write_text_file(out_path, text);
}

int cmd_run(const std::string& a_path, const std::string& b_path, const std::string& method,
            int d, const OdeFlags& flags, const std::string& out_path,
            const std::string& trace_path) {
    const agcd::PolyPair pair(agcd::read_matpoly_file(a_path), agcd::read_matpoly_file(b_path));
    int exit_code = kExitOk;
    std::string body;
    if (method == "subspace" || method == "both") {
        auto [triple, diag] = agcd::subspace_gcd(pair, d, flags.ell);
        body = agcd::subspace_result_json(triple, diag);
    }
    if (method == "ode" || method == "both") {
        auto [result, trace] = agcd::agcd_ode(pair, d, flags.params());
        if (!trace_path.empty()) agcd::write_text_file(trace_path, agcd::trace_csv(trace));
        if (!result.converged) {
            std::cerr << "warning: solver finished without convergence (sigma_final="
                      << agcd::fmt_shortest(result.sigma_final) << ")\n";
            exit_code = kExitNotConverged;
        }
        const std::string ode_json = agcd::to_json(result);
        body = body.empty() ? ode_json : "[" + body + "," + ode_json + "]";
    }
    emit(out_path, body);
    return exit_code;
}

int cmd_exact(const std::string& a_path, const std::string& b_path,
              const std::string& out_path) {
    const agcd::PolyPair pair(agcd::read_matpoly_file(a_path), agcd::read_matpoly_file(b_path));
    agcd::EchelonDiagnostics diag;
    const agcd::MatPoly c = agcd::exact_gcd_echelon(pair, {}, &diag);
    agcd::detail::JsonWriter w;
    w.open('{');
    w.key("method");
    w.string("echelon");
    w.key("factor");
    agcd::detail::write_matpoly(w, c);
    w.key("window");
    w.integer(diag.ell_bar);
    w.close('}');
    emit(out_path, w.out.str());
    return kExitOk;
}

int cmd_sweep(int m, int n, int d, const std::vector<double>& levels, int trials,
              std::uint64_t seed, const std::string& method, const OdeFlags& flags, bool timing,
              const std::string& out_path) {
    agcd::SweepConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.d = d;
    cfg.noise_levels = levels;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.run_subspace = method == "subspace" || method == "both";
    cfg.run_ode = method == "ode" || method == "both";
    cfg.ode = flags.params();
    cfg.timing = timing;
    const std::vector<agcd::SweepRecord> records = agcd::run_sweep(cfg);
    const std::string csv = agcd::sweep_csv(records);
    if (out_path.empty()) {
        std::cout << csv;
        std::cout << agcd::sweep_averages_csv(records);
        std::cout << agcd::sweep_metadata_json(cfg) << "\n";
    } else {
        agcd::write_text_file(out_path, csv);
        agcd::write_text_file(out_path + ".averages.csv", agcd::sweep_averages_csv(records));
        agcd::write_text_file(out_path + ".meta.json", agcd::sweep_metadata_json(cfg));
    }
    return kExitOk;
}

int cmd_trace(const std::string& a_path, const std::string& b_path, int d,
              const OdeFlags& flags, const std::string& out_path) {
    const agcd::PolyPair pair(agcd::read_matpoly_file(a_path), agcd::read_matpoly_file(b_path));
    auto [result, trace] = agcd::agcd_ode(pair, d, flags.params());
    emit(out_path, agcd::trace_csv(trace));
    return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_uncontrollability(const std::string& sys_path, const OdeFlags& flags,
                          const std::string& out_path, const std::string& trace_path) {
    const agcd::IoSystem sys = agcd::read_system_file(sys_path);
    const agcd::UncontrollabilityResult r =
        agcd::distance_to_uncontrollability(sys, flags.params());
    if (!trace_path.empty()) agcd::write_text_file(trace_path, agcd::trace_csv(r.trace));
    emit(out_path, agcd::uncontrollability_result_json(r));
    if (!r.converged) {
        std::cerr << "warning: solver finished without convergence\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate GCDs of matrix polynomials and distance to uncontrollability"};
    app.require_subcommand(1);

    std::string a_path, b_path, sys_path, out_path, trace_path;
    std::string method = "both";
    int d = 1;
    OdeFlags flags;

    CLI::App* run = app.add_subcommand("run", "approximate common factor of a pair");
    run->add_option("a", a_path, "first polynomial file")->required();
    run->add_option("b", b_path, "second polynomial file")->required();
    run->add_option("--method", method, "subspace, ode, or both")
        ->check(CLI::IsMember({"subspace", "ode", "both"}));
    run->add_option("-d,--degree", d, "common factor degree")->required();
    run->add_option("--out", out_path, "result file (default: stdout)");
    run->add_option("--trace", trace_path, "iteration trace CSV");
    flags.attach(run);

    CLI::App* exact = app.add_subcommand("exact", "exact common factor by echelon reduction");
    exact->add_option("a", a_path, "first polynomial file")->required();
    exact->add_option("b", b_path, "second polynomial file")->required();
    exact->add_option("--out", out_path, "result file (default: stdout)");

    int m = 2, n = 3, trials = 50;
    std::uint64_t seed = 0;
    std::vector<double> levels;
    bool timing = false;
    CLI::App* sweep = app.add_subcommand("sweep", "planted-instance noise sweep");
    sweep->add_option("-m", m, "matrix size");
    sweep->add_option("-n", n, "pair degree");
    sweep->add_option("-d,--degree", d, "planted factor degree");
    sweep->add_option("--noise-levels", levels, "comma-separated noise levels in [0,1]")
        ->delimiter(',')
        ->required();
    sweep->add_option("--trials", trials, "trials per level");
    sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--method", method, "subspace, ode, or both")
        ->check(CLI::IsMember({"subspace", "ode", "both"}));
    sweep->add_flag("--timing", timing, "measure runtimes (rerun output no longer byte-identical)");
    sweep->add_option("--out", out_path, "records CSV path (default: stdout)");
    flags.attach(sweep);

    CLI::App* trace = app.add_subcommand("trace", "iteration trace of the flow solver");
    trace->add_option("a", a_path, "first polynomial file")->required();
    trace->add_option("b", b_path, "second polynomial file")->required();
    trace->add_option("-d,--degree", d, "common factor degree")->required();
    trace->add_option("--out", out_path, "trace CSV path (default: stdout)");
    flags.attach(trace);

    CLI::App* unc = app.add_subcommand("uncontrollability", "distance to uncontrollability");
    unc->add_option("system", sys_path, "system file {p, q}")->required();
    unc->add_option("--out", out_path, "result file (default: stdout)");
    unc->add_option("--trace", trace_path, "iteration trace CSV");
    flags.attach(unc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(a_path, b_path, method, d, flags, out_path, trace_path);
        if (exact->parsed()) return cmd_exact(a_path, b_path, out_path);
        if (sweep->parsed())
            return cmd_sweep(m, n, d, levels, trials, seed, method, flags, timing, out_path);
        if (trace->parsed()) return cmd_trace(a_path, b_path, d, flags, out_path);
        if (unc->parsed()) return cmd_uncontrollability(sys_path, flags, out_path, trace_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
