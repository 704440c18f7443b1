#include "fractime/schemes.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fractime {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double initial_value(const std::function<double(double)>& f, double x) {
    return f ? f(x) : 0.0;
}

}  // namespace

std::string to_string(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::Ode2Sided: return "ode2sided";
        case SchemeId::Hyperbolic: return "hyperbolic";
        case SchemeId::DiffusionWave: return "wave";
        case SchemeId::Diffusion: return "diffusion";
    }
    return "unknown";
}

std::string to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::Dense: return "dense";
        case SolveMethod::Cg: return "cg";
        case SolveMethod::Direct: return "direct";
        case SolveMethod::Fast: return "fast";
    }
    return "unknown";
}

SchemeConstants SchemeConstants::for_spec(const ProblemSpec& spec) {
    const double tau = spec.tau();
    const double g = spec.gamma;
    SchemeConstants k;
    k.mu = std::pow(tau, -g) / std::tgamma(2.0 - g);
    switch (spec.scheme) {
        case SchemeId::Ode2Sided: k.c = k.mu; break;
        case SchemeId::Hyperbolic: k.c = std::pow(tau, -g) / (2.0 * std::tgamma(2.0 - g)); break;
        case SchemeId::DiffusionWave: k.c = std::pow(tau, -g) / std::tgamma(3.0 - g); break;
        case SchemeId::Diffusion: k.c = std::pow(tau, -g) / std::tgamma(2.0 - g); break;
    }
    return k;
}

void validate(const ProblemSpec& spec) {
    const bool wave = spec.scheme == SchemeId::DiffusionWave;
    if (wave) {
        if (!(spec.gamma > 1.0 && spec.gamma < 2.0))
            throw std::invalid_argument("ProblemSpec: wave scheme needs gamma in (1, 2)");
    } else if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) {
        throw std::invalid_argument("ProblemSpec: scheme needs gamma in (0, 1)");
    }
    if (spec.scheme == SchemeId::Ode2Sided) {
        if (spec.time_steps < 2)
            throw std::invalid_argument("ProblemSpec: ODE scheme needs at least 2 time steps");
    } else {
        if (spec.time_steps < 1)
            throw std::invalid_argument("ProblemSpec: need at least 1 time step");
        if (spec.space_cells < 2)
            throw std::invalid_argument("ProblemSpec: need at least 2 space cells");
    }
    if (!(spec.time_length > 0.0) || !(spec.space_length > 0.0))
        throw std::invalid_argument("ProblemSpec: domain lengths must be positive");
    if (!spec.forcing) throw std::invalid_argument("ProblemSpec: forcing callback is required");
}

// ---------------------------------------------------------------------------
// Scheme 1
// ---------------------------------------------------------------------------

AssembledSystem assemble_scheme1(const ProblemSpec& spec) {
    if (spec.scheme != SchemeId::Ode2Sided)
        throw std::invalid_argument("assemble_scheme1: spec is not the ODE scheme");
    validate(spec);

    const std::size_t n_steps = spec.time_steps;
    const std::size_t dim = n_steps - 1;
    const double tau = spec.tau();
    const auto k = SchemeConstants::for_spec(spec);
    const auto g = g_weights(spec.gamma, n_steps);

    std::vector<double> col(dim);
    col[0] = 1.0 + 2.0 * k.mu;
    for (std::size_t j = 1; j < dim; ++j)
        col[j] = k.mu * (g.values[j] - g.values[j - 1]);

    std::vector<double> rhs(dim);
    for (std::size_t n = 1; n <= dim; ++n)
        rhs[n - 1] = spec.forcing(0.0, static_cast<double>(n) * tau);

    return AssembledSystem{ToeplitzOperator::symmetric(std::move(col)), std::move(rhs)};
}

SchemeSolution solve_scheme1(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg) {
    const auto start = Clock::now();
    auto system = assemble_scheme1(spec);

    SchemeSolution out;
    out.grid.scheme = spec.scheme;
    out.grid.tau = spec.tau();
    out.grid.time_steps = spec.time_steps;
    out.report.method = to_string(method);

    switch (method) {
        case SolveMethod::Dense: {
            out.grid.values = dense_solve(system.op.dense(), system.rhs);
            break;
        }
        case SolveMethod::Cg: {
            auto op = make_dense_operator(system.op.dense());
            auto res = cg_solve(op, system.rhs, cfg);
            out.grid.values = std::move(res.solution);
            out.report.iterations = res.iterations;
            out.report.residual = res.residual;
            break;
        }
        case SolveMethod::Fast: {
            auto op = make_toeplitz_operator(embed_circulant(system.op));
            auto res = cg_solve(op, system.rhs, cfg);
            out.grid.values = std::move(res.solution);
            out.report.iterations = res.iterations;
            out.report.residual = res.residual;
            break;
        }
        default:
            throw std::invalid_argument("solve_scheme1: supported methods are dense, cg, fast");
    }
    out.report.seconds = elapsed_seconds(start);
    return out;
}

// ---------------------------------------------------------------------------
// Scheme 2
// ---------------------------------------------------------------------------

ReorderedHyperbolic assemble_scheme2_reordered(const ProblemSpec& spec) {
    if (spec.scheme != SchemeId::Hyperbolic)
        throw std::invalid_argument("assemble_scheme2_reordered: spec is not the hyperbolic scheme");
    validate(spec);

    const std::size_t n_steps = spec.time_steps;
    const double h = spec.h();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto g = g_weights(spec.gamma, n_steps);

    std::vector<double> a_col(n_steps), b_col(n_steps);
    a_col[0] = 1.0 / h + c * g.values[0];
    b_col[0] = 1.0 / h - c * g.values[0];
    for (std::size_t j = 1; j < n_steps; ++j) {
        a_col[j] = c * (g.values[j] - g.values[j - 1]);
        b_col[j] = c * (g.values[j - 1] - g.values[j]);
    }
    return ReorderedHyperbolic{ToeplitzOperator::lower_triangular(std::move(a_col)),
                               ToeplitzOperator::lower_triangular(std::move(b_col))};
}

namespace {

// F entry shared by both scheme 2 paths: forcing at the staggered space point
// plus the initial-data contribution of nodes i and i-1.
struct Scheme2Rhs {
    const ProblemSpec& spec;
    const std::vector<double>& g;
    double c, h, tau;
    std::vector<double> u0;  // u0 at x_0..x_M

    explicit Scheme2Rhs(const ProblemSpec& s, const std::vector<double>& gw)
        : spec(s), g(gw), c(SchemeConstants::for_spec(s).c), h(s.h()), tau(s.tau()) {
        u0.resize(s.space_cells + 1);
        for (std::size_t i = 0; i <= s.space_cells; ++i)
            u0[i] = initial_value(s.initial_u0, static_cast<double>(i) * h);
    }

    double operator()(std::size_t i, std::size_t n) const {
        const double x_half = (static_cast<double>(i) - 0.5) * h;
        const double t_n = static_cast<double>(n) * tau;
        return spec.forcing(x_half, t_n) + c * g[n - 1] * (u0[i] + u0[i - 1]);
    }
};

}  // namespace

SchemeSolution solve_scheme2(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg) {
    if (spec.scheme != SchemeId::Hyperbolic)
        throw std::invalid_argument("solve_scheme2: spec is not the hyperbolic scheme");
    validate(spec);
    const auto start = Clock::now();

    const std::size_t n_steps = spec.time_steps;
    const std::size_t cells = spec.space_cells;
    const double h = spec.h();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto g = g_weights(spec.gamma, n_steps);
    const Scheme2Rhs rhs(spec, g.values);

    SchemeSolution out;
    out.grid.scheme = spec.scheme;
    out.grid.tau = spec.tau();
    out.grid.h = h;
    out.grid.time_steps = n_steps;
    out.grid.space_cells = cells;
    out.grid.values.assign((cells - 1) * n_steps, 0.0);
    out.report.method = to_string(method);

    if (method == SolveMethod::Direct) {
        // Time order: forward substitution in space at each level; the history
        // sum is recomputed per step (O(N^2 M) total).
        std::vector<double> history(cells, 0.0);  // c * H_i at nodes 1..M-1, index i-1
        for (std::size_t n = 1; n <= n_steps; ++n) {
            std::fill(history.begin(), history.end(), 0.0);
            for (std::size_t k = 1; k < n; ++k) {
                const double w = c * (g.values[n - k - 1] - g.values[n - k]);
                for (std::size_t i = 1; i < cells; ++i)
                    history[i - 1] += w * out.grid.at(i, k);
            }
            double u_left = 0.0;  // boundary value at x_0
            double hist_left = 0.0;
            for (std::size_t i = 1; i < cells; ++i) {
                const double value = (rhs(i, n) + history[i - 1] + hist_left -
                                      (c * g.values[0] - 1.0 / h) * u_left) /
                                     (c * g.values[0] + 1.0 / h);
                out.grid.at(i, n) = value;
                u_left = value;
                hist_left = history[i - 1];
            }
        }
    } else if (method == SolveMethod::Fast) {
        // Space order: one lower-triangular Toeplitz solve per spatial node,
        // GMRES with FFT matvec, warm-started from the previous node.
        auto matrices = assemble_scheme2_reordered(spec);
        auto a_spec = embed_circulant(matrices.a_tilde);
        auto b_spec = embed_circulant(matrices.b_tilde);
        auto op = make_toeplitz_operator(a_spec);

        std::vector<double> prev(n_steps, 0.0);  // U_0 = boundary column
        for (std::size_t i = 1; i < cells; ++i) {
            auto f = toeplitz_matvec(b_spec, prev);
            for (std::size_t n = 1; n <= n_steps; ++n) f[n - 1] += rhs(i, n);
            auto res = gmres_solve(op, f, cfg, std::span<const double>(prev));
            out.report.iterations += res.iterations;
            out.report.residual = res.residual;
            if (!res.converged)
                throw std::runtime_error("solve_scheme2: GMRES failed to converge at node " +
                                         std::to_string(i));
            for (std::size_t n = 1; n <= n_steps; ++n) out.grid.at(i, n) = res.solution[n - 1];
            prev = std::move(res.solution);
        }
    } else {
        throw std::invalid_argument("solve_scheme2: supported methods are direct, fast");
    }
    out.report.seconds = elapsed_seconds(start);
    return out;
}

// ---------------------------------------------------------------------------
// Scheme 3
// ---------------------------------------------------------------------------

ToeplitzOperator assemble_scheme3_reordered(const ProblemSpec& spec) {
    if (spec.scheme != SchemeId::DiffusionWave)
        throw std::invalid_argument("assemble_scheme3_reordered: spec is not the wave scheme");
    validate(spec);

    const std::size_t n_steps = spec.time_steps;
    const double h = spec.h();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto m = m_weights(spec.gamma, n_steps + 1);

    std::vector<double> col(n_steps);
    col[0] = 1.0 / h + c * m.values[0];
    if (n_steps > 1) col[1] = c * (m.values[1] - 2.0 * m.values[0]);
    for (std::size_t j = 2; j < n_steps; ++j)
        col[j] = c * (m.values[j - 2] - 2.0 * m.values[j - 1] + m.values[j]);
    return ToeplitzOperator::lower_triangular(std::move(col));
}

namespace {

struct Scheme3Rhs {
    const ProblemSpec& spec;
    const std::vector<double>& m;
    double c, h, tau;

    Scheme3Rhs(const ProblemSpec& s, const std::vector<double>& mw)
        : spec(s), m(mw), c(SchemeConstants::for_spec(s).c), h(s.h()), tau(s.tau()) {}

    double operator()(std::size_t i, std::size_t n) const {
        const double x = static_cast<double>(i) * h;
        const double t_half = (static_cast<double>(n) - 0.5) * tau;
        double value = spec.forcing(x, t_half) + c * tau * m[n - 1] * initial_value(spec.initial_phi, x);
        if (n >= 2) value -= c * (m[n - 2] - m[n - 1]) * initial_value(spec.initial_u0, x);
        return value;
    }
};

}  // namespace

SchemeSolution solve_scheme3(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg) {
    if (spec.scheme != SchemeId::DiffusionWave)
        throw std::invalid_argument("solve_scheme3: spec is not the wave scheme");
    validate(spec);
    const auto start = Clock::now();

    const std::size_t n_steps = spec.time_steps;
    const std::size_t cells = spec.space_cells;
    const double h = spec.h();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto m = m_weights(spec.gamma, n_steps + 1);
    const Scheme3Rhs rhs(spec, m.values);

    SchemeSolution out;
    out.grid.scheme = spec.scheme;
    out.grid.tau = spec.tau();
    out.grid.h = h;
    out.grid.time_steps = n_steps;
    out.grid.space_cells = cells;
    out.grid.values.assign((cells - 1) * n_steps, 0.0);
    out.report.method = to_string(method);

    if (method == SolveMethod::Direct) {
        for (std::size_t n = 1; n <= n_steps; ++n) {
            std::vector<double> history(cells - 1, 0.0);
            if (n >= 2) {
                const double w1 = c * (m.values[1] - 2.0 * m.values[0]);
                for (std::size_t i = 1; i < cells; ++i) history[i - 1] += w1 * out.grid.at(i, n - 1);
                for (std::size_t k = 1; k + 1 < n; ++k) {
                    const std::size_t j = n - k;
                    const double w = c * (m.values[j - 2] - 2.0 * m.values[j - 1] + m.values[j]);
                    for (std::size_t i = 1; i < cells; ++i) history[i - 1] += w * out.grid.at(i, k);
                }
            }
            double u_left = 0.0;
            for (std::size_t i = 1; i < cells; ++i) {
                const double value = (rhs(i, n) - history[i - 1] + u_left / h) /
                                     (c * m.values[0] + 1.0 / h);
                out.grid.at(i, n) = value;
                u_left = value;
            }
        }
    } else if (method == SolveMethod::Fast) {
        auto a_tilde = assemble_scheme3_reordered(spec);
        auto op = make_toeplitz_operator(embed_circulant(a_tilde));

        std::vector<double> prev(n_steps, 0.0);
        for (std::size_t i = 1; i < cells; ++i) {
            std::vector<double> f(n_steps);
            for (std::size_t n = 1; n <= n_steps; ++n) f[n - 1] = prev[n - 1] / h + rhs(i, n);
            auto res = gmres_solve(op, f, cfg, std::span<const double>(prev));
            out.report.iterations += res.iterations;
            out.report.residual = res.residual;
            if (!res.converged)
                throw std::runtime_error("solve_scheme3: GMRES failed to converge at node " +
                                         std::to_string(i));
            for (std::size_t n = 1; n <= n_steps; ++n) out.grid.at(i, n) = res.solution[n - 1];
            prev = std::move(res.solution);
        }
    } else {
        throw std::invalid_argument("solve_scheme3: supported methods are direct, fast");
    }
    out.report.seconds = elapsed_seconds(start);
    return out;
}

// ---------------------------------------------------------------------------
// Scheme 4
// ---------------------------------------------------------------------------

AssembledBlockSystem assemble_scheme4(const ProblemSpec& spec) {
    if (spec.scheme != SchemeId::Diffusion)
        throw std::invalid_argument("assemble_scheme4: spec is not the diffusion scheme");
    validate(spec);

    const std::size_t n_steps = spec.time_steps;
    const std::size_t cells = spec.space_cells;
    const double h = spec.h();
    const double tau = spec.tau();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto g = g_weights(spec.gamma, n_steps);

    std::vector<double> col(n_steps);
    col[0] = 2.0 / (h * h) + c * g.values[0];
    for (std::size_t j = 1; j < n_steps; ++j)
        col[j] = c * (g.values[j] - g.values[j - 1]);

    BlockTridiagonalToeplitzOperator op(cells - 1, ToeplitzOperator::lower_triangular(std::move(col)),
                                        -1.0 / (h * h));

    std::vector<double> rhs((cells - 1) * n_steps);
    for (std::size_t i = 1; i < cells; ++i) {
        const double x = static_cast<double>(i) * h;
        const double u0 = initial_value(spec.initial_u0, x);
        for (std::size_t n = 1; n <= n_steps; ++n)
            rhs[(i - 1) * n_steps + (n - 1)] =
                spec.forcing(x, static_cast<double>(n) * tau) + c * g.values[n - 1] * u0;
    }
    return AssembledBlockSystem{std::move(op), std::move(rhs)};
}

SchemeSolution solve_scheme4(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg) {
    if (spec.scheme != SchemeId::Diffusion)
        throw std::invalid_argument("solve_scheme4: spec is not the diffusion scheme");
    validate(spec);
    const auto start = Clock::now();

    const std::size_t n_steps = spec.time_steps;
    const std::size_t cells = spec.space_cells;
    const double h = spec.h();
    const double tau = spec.tau();
    const double c = SchemeConstants::for_spec(spec).c;
    const auto g = g_weights(spec.gamma, n_steps);

    SchemeSolution out;
    out.grid.scheme = spec.scheme;
    out.grid.tau = tau;
    out.grid.h = h;
    out.grid.time_steps = n_steps;
    out.grid.space_cells = cells;
    out.grid.values.assign((cells - 1) * n_steps, 0.0);
    out.report.method = to_string(method);

    if (method == SolveMethod::Direct) {
        // Thomas algorithm on the constant tridiagonal spatial system.
        const std::size_t dim = cells - 1;
        const double diag = 2.0 / (h * h) + c * g.values[0];
        const double off = -1.0 / (h * h);
        std::vector<double> cprime(dim), rhs(dim);
        std::vector<double> u0(dim);
        for (std::size_t i = 1; i < cells; ++i)
            u0[i - 1] = initial_value(spec.initial_u0, static_cast<double>(i) * h);

        for (std::size_t n = 1; n <= n_steps; ++n) {
            const double t_n = static_cast<double>(n) * tau;
            for (std::size_t i = 1; i < cells; ++i) {
                double hist = 0.0;
                for (std::size_t k = 1; k < n; ++k)
                    hist += (g.values[n - k - 1] - g.values[n - k]) * out.grid.at(i, k);
                rhs[i - 1] = spec.forcing(static_cast<double>(i) * h, t_n) + c * hist +
                             c * g.values[n - 1] * u0[i - 1];
            }
            double denom = diag;
            cprime[0] = off / denom;
            rhs[0] /= denom;
            for (std::size_t i = 1; i < dim; ++i) {
                denom = diag - off * cprime[i - 1];
                cprime[i] = off / denom;
                rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
            }
            for (std::size_t i = dim - 1; i-- > 0;) rhs[i] -= cprime[i] * rhs[i + 1];
            for (std::size_t i = 1; i < cells; ++i) out.grid.at(i, n) = rhs[i - 1];
        }
    } else if (method == SolveMethod::Fast) {
        auto system = assemble_scheme4(spec);
        auto op = make_block_operator(system.op);
        auto res = gmres_solve(op, system.rhs, cfg);
        out.report.iterations = res.iterations;
        out.report.residual = res.residual;
        if (!res.converged)
            throw std::runtime_error("solve_scheme4: GMRES failed to converge (residual " +
                                     std::to_string(res.residual) + ")");
        out.grid.values = std::move(res.solution);
    } else {
        throw std::invalid_argument("solve_scheme4: supported methods are direct, fast");
    }
    out.report.seconds = elapsed_seconds(start);
    return out;
}

SchemeSolution solve(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg) {
    switch (spec.scheme) {
        case SchemeId::Ode2Sided: return solve_scheme1(spec, method, cfg);
        case SchemeId::Hyperbolic: return solve_scheme2(spec, method, cfg);
        case SchemeId::DiffusionWave: return solve_scheme3(spec, method, cfg);
        case SchemeId::Diffusion: return solve_scheme4(spec, method, cfg);
    }
    throw std::invalid_argument("solve: unknown scheme");
}

// ---------------------------------------------------------------------------
// Discrete Caputo operators
// ---------------------------------------------------------------------------

double caputo_left_apply(double gamma, std::span<const double> u, double tau) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("caputo_left_apply: gamma must lie in (0, 1)");
    if (u.size() < 2) return 0.0;
    const std::size_t n = u.size() - 1;
    const auto g = g_weights(gamma, n);
    const double mu = std::pow(tau, -gamma) / std::tgamma(2.0 - gamma);

    double bracket = g.values[0] * u[n];
    for (std::size_t k = 1; k < n; ++k)
        bracket -= (g.values[n - k - 1] - g.values[n - k]) * u[k];
    bracket -= g.values[n - 1] * u[0];
    return mu * bracket;
}

double caputo_right_apply(double gamma, std::span<const double> u, double tau) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("caputo_right_apply: gamma must lie in (0, 1)");
    if (u.size() < 2) return 0.0;
    const std::size_t m = u.size() - 1;
    const auto g = g_weights(gamma, m);
    const double mu = std::pow(tau, -gamma) / std::tgamma(2.0 - gamma);

    double bracket = g.values[0] * u[0];
    for (std::size_t j = 1; j < m; ++j)
        bracket -= (g.values[j - 1] - g.values[j]) * u[j];
    bracket -= g.values[m - 1] * u[m];
    return mu * bracket;
}

double l2_error(const SolutionGrid& grid, const ProblemSpec& spec) {
    if (!spec.exact) throw std::invalid_argument("l2_error: spec has no exact solution");
    double acc = 0.0;
    if (grid.scheme == SchemeId::Ode2Sided) {
        for (std::size_t n = 1; n < grid.time_steps; ++n) {
            const double e = grid.values[n - 1] - spec.exact(0.0, static_cast<double>(n) * grid.tau);
            acc += grid.tau * e * e;
        }
    } else {
        const double t_final = static_cast<double>(grid.time_steps) * grid.tau;
        for (std::size_t i = 1; i < grid.space_cells; ++i) {
            const double e =
                grid.at(i, grid.time_steps) - spec.exact(static_cast<double>(i) * grid.h, t_final);
            acc += grid.h * e * e;
        }
    }
    return std::sqrt(acc);
}

}  // namespace fractime
