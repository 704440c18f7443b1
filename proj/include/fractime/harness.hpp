#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fractime/schemes.hpp"

namespace fractime {

/// Manufactured problems from the four worked examples. Space arguments are
/// ignored for example 1 (the ODE).
ProblemSpec example_problem(int id, double gamma, std::size_t time_steps, std::size_t space_cells);

SchemeId example_scheme(int id);

/// Solver settings that make every fast path converge on the example
/// problems; restart grows with N where the operator loses dominance.
SolverConfig recommended_config(SchemeId scheme, std::size_t time_steps);

struct MeshLevel {
    int exponent = 0;            // reporting tag, typically log2 of the varied mesh
    std::size_t time_steps = 0;  // N
    std::size_t space_cells = 0; // M, 0 for the ODE
};

enum class OutputFormat { Csv, Markdown };

struct ExperimentPlan {
    int example = 1;  // 1..4
    std::vector<double> gammas;
    std::vector<MeshLevel> ladder;  // strictly increasing in size
    std::vector<SolveMethod> methods;
    std::optional<SolverConfig> solver;  // nullopt: recommended_config per level
    OutputFormat format = OutputFormat::Csv;
    std::string output_path;  // empty: caller handles emission
};

void validate(const ExperimentPlan& plan);

struct ConvergenceRow {
    int mesh_exp = 0;
    double h = 0.0;    // 0 for the ODE
    double tau = 0.0;
    double l2_error = 0.0;
    std::optional<double> rate;  // empty on the first row of a ladder
    std::size_t iterations = 0;
    double wall_seconds = 0.0;
    std::string method;
    double gamma = 0.0;
    std::string scheme;
};

struct TimingRow {
    int mesh_exp = 0;
    std::size_t time_steps = 0;
    std::size_t space_cells = 0;
    std::string method;
    double wall_seconds = 0.0;  // median of 3 timed runs, one warm-up discarded
    std::size_t iterations = 0;
    std::string status;  // "ok" or "skipped"
    double gamma = 0.0;
    std::string scheme;
};

ConvergenceRow run_example(int id, double gamma, const MeshLevel& mesh, SolveMethod method,
                           const SolverConfig& cfg);

/// Rows ordered gamma-major, then method, then ladder level; rates between
/// consecutive levels of the same (gamma, method) group. Levels may run on
/// worker threads, bounded by FRACTIME_THREADS.
std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan);

/// Sequential by design. Methods over the size caps (dense > 2^13 unknowns,
/// direct time-marching > 2^22 work units) are reported as "skipped".
std::vector<TimingRow> run_timing(const ExperimentPlan& plan);

bool dense_capped(const ProblemSpec& spec);
bool direct_capped(const ProblemSpec& spec);

/// Worker-thread bound: FRACTIME_THREADS when set and positive, otherwise
/// hardware concurrency.
std::size_t worker_thread_count();

// CSV uses %.17g so that parse(emit(rows)) == rows exactly.
void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void emit_markdown(const std::vector<ConvergenceRow>& rows, std::ostream& out);
std::vector<ConvergenceRow> parse_csv(std::istream& in);

void emit_csv(const std::vector<TimingRow>& rows, std::ostream& out);
void emit_markdown(const std::vector<TimingRow>& rows, std::ostream& out);

/// Ladder helper: exponents a..b inclusive. fixed_time_exp pins tau = 2^-P
/// while h varies (the fixed-tau table style); otherwise h = tau = 2^-e.
std::vector<MeshLevel> exponent_ladder(int from, int to, std::optional<int> fixed_time_exp);

}  // namespace fractime
