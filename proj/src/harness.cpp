#include "fractime/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fractime {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SchemeId example_scheme(int id) {
    switch (id) {
        case 1: return SchemeId::Ode2Sided;
        case 2: return SchemeId::Hyperbolic;
        case 3: return SchemeId::DiffusionWave;
        case 4: return SchemeId::Diffusion;
    }
    throw std::invalid_argument("example_scheme: example id must be 1..4");
}

ProblemSpec example_problem(int id, double gamma, std::size_t time_steps,
                            std::size_t space_cells) {
    ProblemSpec spec;
    spec.scheme = example_scheme(id);
    spec.gamma = gamma;
    spec.time_steps = time_steps;
    spec.space_cells = spec.scheme == SchemeId::Ode2Sided ? 0 : space_cells;

    switch (id) {
        case 1: {
            spec.exact = [](double, double t) { return t * (1.0 - t); };
            // Forcing from u = t(1-t): left Caputo part, mirrored right part
            // (u is symmetric about t = 1/2), plus u itself.
            spec.forcing = [gamma](double, double t) {
                const double c1 = 1.0 / std::tgamma(2.0 - gamma);
                const double c2 = 2.0 / std::tgamma(3.0 - gamma);
                const double s = 1.0 - t;
                return c1 * std::pow(t, 1.0 - gamma) - c2 * std::pow(t, 2.0 - gamma) +
                       c1 * std::pow(s, 1.0 - gamma) - c2 * std::pow(s, 2.0 - gamma) +
                       t * (1.0 - t);
            };
            break;
        }
        case 2: {
            spec.exact = [](double x, double t) { return t * std::sin(kPi * x); };
            spec.forcing = [gamma](double x, double t) {
                return std::pow(t, 1.0 - gamma) / std::tgamma(2.0 - gamma) * std::sin(kPi * x) +
                       kPi * t * std::cos(kPi * x);
            };
            break;
        }
        case 3: {
            spec.exact = [](double x, double t) { return t * t * t * x * (1.0 - x); };
            spec.forcing = [gamma](double x, double t) {
                return 6.0 * std::pow(t, 3.0 - gamma) / std::tgamma(4.0 - gamma) * x * (1.0 - x) +
                       t * t * t * (1.0 - 2.0 * x);
            };
            break;
        }
        case 4: {
            spec.exact = [](double x, double t) { return t * t * t * std::sin(kPi * x); };
            spec.forcing = [gamma](double x, double t) {
                return 6.0 * std::pow(t, 3.0 - gamma) / std::tgamma(4.0 - gamma) *
                           std::sin(kPi * x) +
                       kPi * kPi * t * t * t * std::sin(kPi * x);
            };
            break;
        }
        default:
            throw std::invalid_argument("example_problem: example id must be 1..4");
    }
    return spec;
}

SolverConfig recommended_config(SchemeId scheme, std::size_t time_steps) {
    SolverConfig cfg;
    switch (scheme) {
        case SchemeId::Ode2Sided:
            cfg.tol = 1e-10;
            break;
        case SchemeId::Hyperbolic:
            // 1e-12 sits on the GMRES rounding floor for fine meshes; one
            // decade of margin keeps the path well inside the 1e-8
            // direct-vs-fast contract.
            cfg.tol = 1e-11;
            cfg.restart = 20;
            break;
        case SchemeId::DiffusionWave:
            // Restarted GMRES stagnates on this operator for gamma near 2
            // (the first sub-diagonal rivals the diagonal); full GMRES
            // terminates in at most N steps per node.
            cfg.tol = 1e-12;
            cfg.restart = std::max<std::size_t>(time_steps, 1);
            break;
        case SchemeId::Diffusion:
            cfg.tol = 1e-10;
            cfg.restart = 40;
            break;
    }
    return cfg;
}

std::vector<MeshLevel> exponent_ladder(int from, int to, std::optional<int> fixed_time_exp) {
    if (from < 1 || to < from)
        throw std::invalid_argument("exponent_ladder: need 1 <= from <= to");
    std::vector<MeshLevel> ladder;
    for (int e = from; e <= to; ++e) {
        MeshLevel lvl;
        lvl.exponent = e;
        if (fixed_time_exp) {
            lvl.time_steps = std::size_t{1} << *fixed_time_exp;
            lvl.space_cells = std::size_t{1} << e;
        } else {
            lvl.time_steps = std::size_t{1} << e;
            lvl.space_cells = std::size_t{1} << e;
        }
        ladder.push_back(lvl);
    }
    return ladder;
}

void validate(const ExperimentPlan& plan) {
    example_scheme(plan.example);  // throws for bad id
    if (plan.gammas.empty()) throw std::invalid_argument("ExperimentPlan: no gamma values");
    if (plan.ladder.empty()) throw std::invalid_argument("ExperimentPlan: empty mesh ladder");
    if (plan.methods.empty()) throw std::invalid_argument("ExperimentPlan: no methods");
    for (std::size_t i = 1; i < plan.ladder.size(); ++i) {
        const auto work = [](const MeshLevel& l) {
            return l.time_steps * std::max<std::size_t>(l.space_cells, 1);
        };
        if (work(plan.ladder[i]) <= work(plan.ladder[i - 1]))
            throw std::invalid_argument("ExperimentPlan: mesh ladder must be strictly increasing");
    }
}

ConvergenceRow run_example(int id, double gamma, const MeshLevel& mesh, SolveMethod method,
                           const SolverConfig& cfg) {
    auto spec = example_problem(id, gamma, mesh.time_steps, mesh.space_cells);
    auto sol = solve(spec, method, cfg);

    ConvergenceRow row;
    row.mesh_exp = mesh.exponent;
    row.h = spec.scheme == SchemeId::Ode2Sided ? 0.0 : spec.h();
    row.tau = spec.tau();
    row.l2_error = l2_error(sol.grid, spec);
    row.iterations = sol.report.iterations;
    row.wall_seconds = sol.report.seconds;
    row.method = sol.report.method;
    row.gamma = gamma;
    row.scheme = to_string(spec.scheme);
    return row;
}

std::size_t worker_thread_count() {
    if (const char* env = std::getenv("FRACTIME_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan) {
    validate(plan);
    const SchemeId scheme = example_scheme(plan.example);

    struct Job {
        double gamma;
        SolveMethod method;
        MeshLevel mesh;
    };
    std::vector<Job> jobs;
    for (double gamma : plan.gammas)
        for (SolveMethod method : plan.methods)
            for (const auto& mesh : plan.ladder) jobs.push_back({gamma, method, mesh});

    std::vector<ConvergenceRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            try {
                const auto& job = jobs[j];
                const SolverConfig cfg =
                    plan.solver ? *plan.solver : recommended_config(scheme, job.mesh.time_steps);
                rows[j] = run_example(plan.example, job.gamma, job.mesh, job.method, cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(jobs.size());
            }
        }
    };

    const std::size_t n_threads = std::min(worker_thread_count(), jobs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Rates between consecutive ladder levels within each (gamma, method) run.
    const std::size_t levels = plan.ladder.size();
    for (std::size_t g = 0; g < jobs.size(); g += levels)
        for (std::size_t l = 1; l < levels; ++l)
            rows[g + l].rate = std::log2(rows[g + l - 1].l2_error / rows[g + l].l2_error);
    return rows;
}

bool dense_capped(const ProblemSpec& spec) {
    const std::size_t unknowns = spec.scheme == SchemeId::Ode2Sided
                                     ? spec.time_steps - 1
                                     : (spec.space_cells - 1) * spec.time_steps;
    return unknowns > (std::size_t{1} << 13);
}

bool direct_capped(const ProblemSpec& spec) {
    const std::size_t space = std::max<std::size_t>(
        spec.scheme == SchemeId::Ode2Sided ? 1 : spec.space_cells, 1);
    return spec.time_steps * spec.time_steps * space > (std::size_t{1} << 22);
}

std::vector<TimingRow> run_timing(const ExperimentPlan& plan) {
    validate(plan);
    const SchemeId scheme = example_scheme(plan.example);

    std::vector<TimingRow> rows;
    for (double gamma : plan.gammas) {
        for (const auto& mesh : plan.ladder) {
            for (SolveMethod method : plan.methods) {
                TimingRow row;
                row.mesh_exp = mesh.exponent;
                row.time_steps = mesh.time_steps;
                row.space_cells = scheme == SchemeId::Ode2Sided ? 0 : mesh.space_cells;
                row.method = to_string(method);
                row.gamma = gamma;
                row.scheme = to_string(scheme);

                auto spec = example_problem(plan.example, gamma, mesh.time_steps, mesh.space_cells);
                const bool capped =
                    ((method == SolveMethod::Dense || method == SolveMethod::Cg) &&
                     dense_capped(spec)) ||
                    (method == SolveMethod::Direct && direct_capped(spec));
                if (capped) {
                    row.status = "skipped";
                    rows.push_back(row);
                    continue;
                }

                SolverConfig cfg =
                    plan.solver ? *plan.solver : recommended_config(scheme, mesh.time_steps);
                if (!plan.solver) cfg.tol = 1e-8;  // timing runs trade depth for speed
                double samples[3];
                solve(spec, method, cfg);  // warm-up, discarded
                for (double& s : samples) {
                    auto sol = solve(spec, method, cfg);
                    s = sol.report.seconds;
                    row.iterations = sol.report.iterations;
                }
                std::sort(samples, samples + 3);
                row.wall_seconds = samples[1];
                row.status = "ok";
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "mesh_exp,h,tau,l2_error,rate,iterations,wall_seconds,method,gamma,scheme\n";
    for (const auto& r : rows) {
        out << r.mesh_exp << ',' << format_double(r.h) << ',' << format_double(r.tau) << ','
            << format_double(r.l2_error) << ',' << (r.rate ? format_double(*r.rate) : "") << ','
            << r.iterations << ',' << format_double(r.wall_seconds) << ',' << r.method << ','
            << format_double(r.gamma) << ',' << r.scheme << '\n';
    }
}

void emit_markdown(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "| mesh | h | tau | L2 error | rate | iters | seconds | method | gamma | scheme |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.4e", r.l2_error);
        out << "| 2^-" << r.mesh_exp << " | " << format_double(r.h) << " | "
            << format_double(r.tau) << " | " << buf << " | ";
        if (r.rate) {
            std::snprintf(buf, sizeof(buf), "%.2f", *r.rate);
            out << buf;
        } else {
            out << "-";
        }
        std::snprintf(buf, sizeof(buf), "%.3g", r.wall_seconds);
        out << " | " << r.iterations << " | " << buf << " | " << r.method << " | " << r.gamma
            << " | " << r.scheme << " |\n";
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

std::vector<ConvergenceRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty input");
    if (line != "mesh_exp,h,tau,l2_error,rate,iterations,wall_seconds,method,gamma,scheme")
        throw std::runtime_error("parse_csv: unexpected header: " + line);

    std::vector<ConvergenceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 10) throw std::runtime_error("parse_csv: malformed row: " + line);
        ConvergenceRow r;
        r.mesh_exp = std::stoi(f[0]);
        r.h = std::strtod(f[1].c_str(), nullptr);
        r.tau = std::strtod(f[2].c_str(), nullptr);
        r.l2_error = std::strtod(f[3].c_str(), nullptr);
        if (!f[4].empty()) r.rate = std::strtod(f[4].c_str(), nullptr);
        r.iterations = std::stoull(f[5]);
        r.wall_seconds = std::strtod(f[6].c_str(), nullptr);
        r.method = f[7];
        r.gamma = std::strtod(f[8].c_str(), nullptr);
        r.scheme = f[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_csv(const std::vector<TimingRow>& rows, std::ostream& out) {
    out << "mesh_exp,time_steps,space_cells,method,wall_seconds,iterations,status,gamma,scheme\n";
    for (const auto& r : rows) {
        out << r.mesh_exp << ',' << r.time_steps << ',' << r.space_cells << ',' << r.method << ','
            << format_double(r.wall_seconds) << ',' << r.iterations << ',' << r.status << ','
            << format_double(r.gamma) << ',' << r.scheme << '\n';
    }
}

void emit_markdown(const std::vector<TimingRow>& rows, std::ostream& out) {
    out << "| mesh | N | M | method | seconds | iters | status |\n";
    out << "|---|---|---|---|---|---|---|\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.3g", r.wall_seconds);
        out << "| 2^" << r.mesh_exp << " | " << r.time_steps << " | " << r.space_cells << " | "
            << r.method << " | " << (r.status == "ok" ? buf : "-") << " | " << r.iterations
            << " | " << r.status << " |\n";
    }
}

}  // namespace fractime
