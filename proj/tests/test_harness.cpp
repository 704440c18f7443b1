#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fractime/harness.hpp"

using namespace fractime;

TEST_CASE("example_problem validates ids and wires the schemes") {
    CHECK_THROWS_AS(example_problem(0, 0.5, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(example_problem(5, 0.5, 8, 8), std::invalid_argument);
    CHECK(example_problem(1, 0.5, 8, 8).scheme == SchemeId::Ode2Sided);
    CHECK(example_problem(2, 0.5, 8, 8).scheme == SchemeId::Hyperbolic);
    CHECK(example_problem(3, 1.5, 8, 8).scheme == SchemeId::DiffusionWave);
    CHECK(example_problem(4, 0.5, 8, 8).scheme == SchemeId::Diffusion);
}

TEST_CASE("zero forcing hook: error equals the norm of the exact solution") {
    auto spec = example_problem(2, 0.5, 32, 32);
    spec.forcing = [](double, double) { return 0.0; };
    auto sol = solve(spec, SolveMethod::Direct, {});

    double expected = 0.0;
    for (std::size_t i = 1; i < spec.space_cells; ++i) {
        const double e = spec.exact(double(i) * spec.h(), 1.0);
        expected += spec.h() * e * e;
    }
    CHECK(l2_error(sol.grid, spec) == doctest::Approx(std::sqrt(expected)).epsilon(1e-12));
}

TEST_CASE("exponent ladder styles") {
    auto uniform = exponent_ladder(3, 5, std::nullopt);
    REQUIRE(uniform.size() == 3);
    CHECK(uniform[0].time_steps == 8);
    CHECK(uniform[0].space_cells == 8);
    CHECK(uniform[2].time_steps == 32);

    auto fixed = exponent_ladder(3, 5, 10);
    CHECK(fixed[0].time_steps == 1024);
    CHECK(fixed[0].space_cells == 8);
    CHECK(fixed[2].time_steps == 1024);
    CHECK(fixed[2].space_cells == 32);

    CHECK_THROWS_AS(exponent_ladder(5, 3, std::nullopt), std::invalid_argument);
}

TEST_CASE("plan validation") {
    ExperimentPlan plan;
    plan.example = 1;
    plan.gammas = {0.5};
    plan.ladder = exponent_ladder(3, 4, std::nullopt);
    plan.methods = {SolveMethod::Fast};
    CHECK_NOTHROW(validate(plan));

    auto bad = plan;
    bad.methods.clear();
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    std::swap(bad.ladder[0], bad.ladder[1]);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    bad.example = 9;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("run_convergence computes rates per group") {
    ExperimentPlan plan;
    plan.example = 1;
    plan.gammas = {0.5};
    plan.ladder = exponent_ladder(4, 6, std::nullopt);
    plan.methods = {SolveMethod::Fast};
    auto rows = run_convergence(plan);
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].rate.has_value());
    REQUIRE(rows[1].rate.has_value());
    // L1 rate 2 - gamma = 1.5 for the ODE scheme.
    CHECK(*rows[2].rate == doctest::Approx(1.5).epsilon(0.1));
    for (const auto& r : rows) {
        CHECK(r.scheme == "ode2sided");
        CHECK(r.method == "fast");
        CHECK(r.l2_error > 0.0);
    }
}

TEST_CASE("ladder of length 1 yields a single row with empty rate") {
    ExperimentPlan plan;
    plan.example = 1;
    plan.gammas = {0.5};
    plan.ladder = exponent_ladder(5, 5, std::nullopt);
    plan.methods = {SolveMethod::Fast};
    auto rows = run_convergence(plan);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].rate.has_value());
}

TEST_CASE("csv round trip is exact") {
    std::vector<ConvergenceRow> rows(2);
    rows[0] = {5, 0.0, 1.0 / 3.0, 1.234567890123456e-5, std::nullopt, 17, 0.125, "fast", 0.1,
               "ode2sided"};
    rows[1] = {6, 1.0 / 7.0, 0.015625, 9.87654321e-7, 1.4963000000000001, 0, 2.5e-3, "direct",
               0.9, "diffusion"};

    std::stringstream buf;
    emit_csv(rows, buf);
    auto parsed = parse_csv(buf);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].mesh_exp == rows[i].mesh_exp);
        CHECK(parsed[i].h == rows[i].h);
        CHECK(parsed[i].tau == rows[i].tau);
        CHECK(parsed[i].l2_error == rows[i].l2_error);
        CHECK(parsed[i].rate == rows[i].rate);
        CHECK(parsed[i].iterations == rows[i].iterations);
        CHECK(parsed[i].wall_seconds == rows[i].wall_seconds);
        CHECK(parsed[i].method == rows[i].method);
        CHECK(parsed[i].gamma == rows[i].gamma);
        CHECK(parsed[i].scheme == rows[i].scheme);
    }

    std::stringstream bad("wrong,header\n");
    CHECK_THROWS_AS(parse_csv(bad), std::runtime_error);
}

TEST_CASE("markdown emission") {
    std::vector<ConvergenceRow> rows(1);
    rows[0] = {5, 0.03125, 0.03125, 1.5e-3, std::nullopt, 10, 0.01, "fast", 0.5, "ode2sided"};
    std::stringstream buf;
    emit_markdown(rows, buf);
    const std::string text = buf.str();
    CHECK(text.find("| mesh |") != std::string::npos);
    CHECK(text.find("1.5000e-03") != std::string::npos);
    CHECK(text.find("fast") != std::string::npos);
}

TEST_CASE("run_timing smoke and caps") {
    ExperimentPlan plan;
    plan.example = 1;
    plan.gammas = {0.5};
    plan.ladder = exponent_ladder(5, 5, std::nullopt);
    plan.methods = {SolveMethod::Fast, SolveMethod::Dense};
    auto rows = run_timing(plan);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.status == "ok");
        CHECK(r.wall_seconds > 0.0);
    }

    // Dense above the 2^13-unknown cap is skipped without running.
    ExperimentPlan big = plan;
    big.ladder = exponent_ladder(14, 14, std::nullopt);
    big.methods = {SolveMethod::Dense};
    auto skipped = run_timing(big);
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0].status == "skipped");
    CHECK(skipped[0].wall_seconds == 0.0);

    std::stringstream buf;
    emit_csv(skipped, buf);
    CHECK(buf.str().find("skipped") != std::string::npos);
}

TEST_CASE("direct time-marching cap") {
    auto spec = example_problem(2, 0.5, 1 << 11, 1 << 4);
    CHECK(direct_capped(spec));  // 2^22 * 2^4 work units
    auto small = example_problem(2, 0.5, 1 << 8, 1 << 4);
    CHECK_FALSE(direct_capped(small));
}

TEST_CASE("FRACTIME_THREADS bounds the worker count") {
    setenv("FRACTIME_THREADS", "3", 1);
    CHECK(worker_thread_count() == 3);
    setenv("FRACTIME_THREADS", "junk", 1);
    CHECK(worker_thread_count() >= 1);
    unsetenv("FRACTIME_THREADS");
    CHECK(worker_thread_count() >= 1);
}
