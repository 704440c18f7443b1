#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fractime/krylov.hpp"
#include "fractime/toeplitz.hpp"
#include "fractime/weights.hpp"

namespace fractime {

enum class SchemeId { Ode2Sided, Hyperbolic, DiffusionWave, Diffusion };

enum class SolveMethod { Dense, Cg, Direct, Fast };

std::string to_string(SchemeId scheme);
std::string to_string(SolveMethod method);

/// Discrete problem description. For the ODE scheme the space fields are
/// unused and callbacks receive x = 0.
struct ProblemSpec {
    SchemeId scheme = SchemeId::Ode2Sided;
    double gamma = 0.5;
    std::size_t time_steps = 2;                      // N, tau = T/N
    std::size_t space_cells = 0;                     // M, h = L/M
    double time_length = 1.0;                        // T
    double space_length = 1.0;                       // L
    std::function<double(double, double)> forcing;   // (x, t)
    std::function<double(double)> initial_u0;        // u(x, 0); null means 0
    std::function<double(double)> initial_phi;       // u_t(x, 0), DiffusionWave only
    std::function<double(double, double)> exact;     // optional, for error measurement

    double tau() const { return time_length / static_cast<double>(time_steps); }
    double h() const { return space_length / static_cast<double>(space_cells); }
};

void validate(const ProblemSpec& spec);

/// Numerical solution on the interior of the mesh. Homogeneous boundary
/// values are implicit and never stored.
/// ODE: values[n-1] = u_n, n = 1..N-1.
/// PDE: space-major, values[(i-1)*N + (n-1)] = U_i^n, i = 1..M-1, n = 1..N.
struct SolutionGrid {
    SchemeId scheme = SchemeId::Ode2Sided;
    double tau = 0.0;
    double h = 0.0;
    std::size_t time_steps = 0;
    std::size_t space_cells = 0;
    std::vector<double> values;

    double& at(std::size_t i, std::size_t n) { return values[(i - 1) * time_steps + (n - 1)]; }
    double at(std::size_t i, std::size_t n) const { return values[(i - 1) * time_steps + (n - 1)]; }
};

struct SolveReport {
    std::string method;
    std::size_t iterations = 0;  // total Krylov matvecs; 0 for direct/dense paths
    double residual = 0.0;
    double seconds = 0.0;
};

struct SchemeSolution {
    SolutionGrid grid;
    SolveReport report;
};

/// mu = tau^{-gamma}/Gamma(2-gamma) and the per-scheme constant c.
struct SchemeConstants {
    double mu = 0.0;
    double c = 0.0;

    static SchemeConstants for_spec(const ProblemSpec& spec);
};

struct AssembledSystem {
    ToeplitzOperator op;
    std::vector<double> rhs;
};

struct ReorderedHyperbolic {
    ToeplitzOperator a_tilde;  // lower-triangular, dimension N
    ToeplitzOperator b_tilde;  // lower-triangular, dimension N
};

struct AssembledBlockSystem {
    BlockTridiagonalToeplitzOperator op;
    std::vector<double> rhs;  // space-major packing matching SolutionGrid
};

// Scheme 1: two-sided fractional ODE, symmetric Toeplitz system of dim N-1.
AssembledSystem assemble_scheme1(const ProblemSpec& spec);
SchemeSolution solve_scheme1(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg);

// Scheme 2: time-fractional transport, 0<gamma<1, space-order reordering.
ReorderedHyperbolic assemble_scheme2_reordered(const ProblemSpec& spec);
SchemeSolution solve_scheme2(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg);

// Scheme 3: diffusion-wave transport, 1<gamma<2.
ToeplitzOperator assemble_scheme3_reordered(const ProblemSpec& spec);
SchemeSolution solve_scheme3(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg);

// Scheme 4: time-fractional diffusion, block tridiagonal block-Toeplitz system.
AssembledBlockSystem assemble_scheme4(const ProblemSpec& spec);
SchemeSolution solve_scheme4(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg);

SchemeSolution solve(const ProblemSpec& spec, SolveMethod method, const SolverConfig& cfg);

/// Discrete left Caputo derivative of order gamma in (0,1) at t_n from grid
/// values u_0..u_n. Annihilates constants exactly.
double caputo_left_apply(double gamma, std::span<const double> u, double tau);

/// Discrete right Caputo derivative at t_n from grid values u_n..u_N.
double caputo_right_apply(double gamma, std::span<const double> u, double tau);

/// L2 error against spec.exact. ODE: sqrt(sum tau * e_n^2) over interior
/// time nodes; PDE: final-time spatial norm sqrt(sum h * (e_i^N)^2).
double l2_error(const SolutionGrid& grid, const ProblemSpec& spec);

}  // namespace fractime
