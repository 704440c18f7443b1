#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fractime/harness.hpp"

namespace {

using namespace fractime;

const std::map<std::string, SchemeId> kSchemeNames = {
    {"ode2sided", SchemeId::Ode2Sided},
    {"hyperbolic", SchemeId::Hyperbolic},
    {"wave", SchemeId::DiffusionWave},
    {"diffusion", SchemeId::Diffusion},
};

const std::map<std::string, SolveMethod> kMethodNames = {
    {"dense", SolveMethod::Dense},
    {"cg", SolveMethod::Cg},
    {"direct", SolveMethod::Direct},
    {"fast", SolveMethod::Fast},
};

int example_for(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::Ode2Sided: return 1;
        case SchemeId::Hyperbolic: return 2;
        case SchemeId::DiffusionWave: return 3;
        case SchemeId::Diffusion: return 4;
    }
    return 1;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void emit_rows(const std::vector<ConvergenceRow>& rows, const std::string& format,
               const std::string& out_path) {
    auto write = [&](std::ostream& os) {
        if (format == "md")
            emit_markdown(rows, os);
        else
            emit_csv(rows, os);
    };
    if (out_path.empty()) {
        write(std::cout);
    } else {
        auto f = open_output(out_path);
        write(f);
    }
}

void emit_rows(const std::vector<TimingRow>& rows, const std::string& format,
               const std::string& out_path) {
    auto write = [&](std::ostream& os) {
        if (format == "md")
            emit_markdown(rows, os);
        else
            emit_csv(rows, os);
    };
    if (out_path.empty()) {
        write(std::cout);
    } else {
        auto f = open_output(out_path);
        write(f);
    }
}

int log2_of(std::size_t n) {
    int e = 0;
    while ((std::size_t{1} << (e + 1)) <= n) ++e;
    return e;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractime: fast Toeplitz solvers for time-fractional differential equations"};
    app.require_subcommand(1);

    // --- weights ---
    auto* weights_cmd = app.add_subcommand("weights", "print G_k or M_k weights as CSV");
    std::string kind = "g";
    double gamma = 0.5;
    std::size_t count = 10;
    weights_cmd->add_option("--kind", kind, "weight family")
        ->check(CLI::IsMember({"g", "m"}));
    weights_cmd->add_option("--gamma", gamma, "fractional order")->required();
    weights_cmd->add_option("--count", count, "number of weights")->required();

    // --- solve ---
    auto* solve_cmd =
        app.add_subcommand("solve", "solve the scheme's manufactured example on one mesh");
    std::string scheme_name = "ode2sided", method_name = "fast", out_path, format = "csv";
    std::size_t n_steps = 32, m_cells = 0;
    double tol = 0.0;
    std::size_t restart = 0;
    solve_cmd->add_option("--scheme", scheme_name, "scheme to solve")
        ->required()
        ->check(CLI::IsMember({"ode2sided", "hyperbolic", "wave", "diffusion"}));
    solve_cmd->add_option("--gamma", gamma, "fractional order")->required();
    solve_cmd->add_option("--n", n_steps, "time steps N")->required();
    solve_cmd->add_option("--m", m_cells, "space cells M (PDE schemes; defaults to N)");
    solve_cmd->add_option("--method", method_name, "solution method")
        ->check(CLI::IsMember({"dense", "cg", "direct", "fast"}));
    solve_cmd->add_option("--tol", tol, "Krylov relative residual tolerance");
    solve_cmd->add_option("--restart", restart, "GMRES restart length");
    solve_cmd->add_option("--out", out_path, "write the row to this file instead of stdout");
    solve_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "md"}));

    // --- convergence ---
    auto* conv_cmd = app.add_subcommand("convergence", "mesh-refinement study on an example");
    int example = 1;
    std::string levels = "3..8";
    std::vector<double> gammas;
    std::vector<std::string> methods;
    std::optional<int> fixed_tau_exp;
    int fixed_tau_flag = -1;
    conv_cmd->add_option("--example", example, "manufactured example 1..4")->required();
    conv_cmd->add_option("--gamma", gammas, "fractional order(s)")->required();
    conv_cmd->add_option("--levels", levels, "exponent range A..B (mesh 2^-A .. 2^-B)");
    conv_cmd->add_option("--method", methods, "method(s) to run");
    conv_cmd->add_option("--fixed-tau-exp", fixed_tau_flag,
                         "pin tau = 2^-P while h varies (fixed-tau table style)");
    conv_cmd->add_option("--tol", tol, "Krylov relative residual tolerance");
    conv_cmd->add_option("--restart", restart, "GMRES restart length");
    conv_cmd->add_option("--out", out_path, "output file (default stdout)");
    conv_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "md"}));

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "wall-time comparison across methods");
    bench_cmd->add_option("--example", example, "manufactured example 1..4")->required();
    bench_cmd->add_option("--gamma", gammas, "fractional order(s)")->required();
    bench_cmd->add_option("--levels", levels, "exponent range A..B");
    bench_cmd->add_option("--method", methods, "method(s) to time");
    bench_cmd->add_option("--fixed-tau-exp", fixed_tau_flag, "pin tau = 2^-P while h varies");
    bench_cmd->add_option("--tol", tol, "Krylov relative residual tolerance");
    bench_cmd->add_option("--restart", restart, "GMRES restart length");
    bench_cmd->add_option("--out", out_path, "output file (default stdout)");
    bench_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "md"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (weights_cmd->parsed()) {
            const auto w = kind == "g" ? g_weights(gamma, count) : m_weights(gamma, count);
            std::printf("k,value\n");
            for (std::size_t k = 0; k < w.values.size(); ++k)
                std::printf("%zu,%.17g\n", k, w.values[k]);
            return 0;
        }

        auto parse_levels = [&]() {
            const auto pos = levels.find("..");
            if (pos == std::string::npos)
                throw std::runtime_error("--levels must look like A..B");
            const int from = std::stoi(levels.substr(0, pos));
            const int to = std::stoi(levels.substr(pos + 2));
            std::optional<int> fixed;
            if (fixed_tau_flag >= 0) fixed = fixed_tau_flag;
            return exponent_ladder(from, to, fixed);
        };

        auto solver_override = [&](SchemeId scheme, std::size_t steps) {
            SolverConfig cfg = recommended_config(scheme, steps);
            if (tol > 0.0) cfg.tol = tol;
            if (restart > 0) cfg.restart = restart;
            return cfg;
        };

        if (solve_cmd->parsed()) {
            const SchemeId scheme = kSchemeNames.at(scheme_name);
            const SolveMethod method = kMethodNames.at(method_name);
            if (m_cells == 0) m_cells = n_steps;
            MeshLevel mesh{log2_of(n_steps), n_steps,
                           scheme == SchemeId::Ode2Sided ? 0 : m_cells};
            const auto cfg = solver_override(scheme, n_steps);
            auto row = run_example(example_for(scheme), gamma, mesh, method, cfg);
            emit_rows(std::vector<ConvergenceRow>{row}, format, out_path);
            return 0;
        }

        // convergence / bench share the plan shape
        ExperimentPlan plan;
        plan.example = example;
        plan.gammas = gammas;
        plan.ladder = parse_levels();
        if (methods.empty())
            methods = {example == 1 ? "fast" : "direct", "fast"};
        for (const auto& m : methods) {
            auto it = kMethodNames.find(m);
            if (it == kMethodNames.end()) throw std::runtime_error("unknown method: " + m);
            if (std::find(plan.methods.begin(), plan.methods.end(), it->second) ==
                plan.methods.end())
                plan.methods.push_back(it->second);
        }
        if (tol > 0.0 || restart > 0)
            plan.solver = solver_override(example_scheme(example), plan.ladder.back().time_steps);

        if (conv_cmd->parsed()) {
            emit_rows(run_convergence(plan), format, out_path);
        } else {
            emit_rows(run_timing(plan), format, out_path);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
