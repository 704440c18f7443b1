#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fractime/weights.hpp"

using namespace fractime;

TEST_CASE("g_weights basic values") {
    auto w = g_weights(0.5, 4);
    CHECK(w.kind == WeightKind::G);
    CHECK(w.length() == 4);
    CHECK(w.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.values[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(w.values[2] == doctest::Approx(std::sqrt(3.0) - std::sqrt(2.0)).epsilon(1e-15));
    CHECK(w.values[3] == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("m_weights basic values") {
    auto w = m_weights(1.5, 3);
    CHECK(w.kind == WeightKind::M);
    CHECK(w.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.values[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(w.values[2] == doctest::Approx(std::sqrt(3.0) - std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(g_weights(0.0, 4), std::domain_error);
    CHECK_THROWS_AS(g_weights(1.0, 4), std::domain_error);
    CHECK_THROWS_AS(m_weights(1.0, 4), std::domain_error);
    CHECK_THROWS_AS(m_weights(2.0, 4), std::domain_error);
    CHECK_THROWS_AS(g_weights(0.5, 0), std::invalid_argument);
}

TEST_CASE("positivity, monotonicity, telescoping") {
    for (double gamma : {0.05, 0.3, 0.7, 0.95}) {
        auto w = g_weights(gamma, 2000);
        double sum = 0.0;
        for (std::size_t k = 0; k < w.length(); ++k) {
            CHECK(w.values[k] > 0.0);
            if (k > 0) CHECK(w.values[k] < w.values[k - 1]);
            sum += w.values[k];
        }
        // Partial sums telescope: sum_{k<K} G_k = K^{1-gamma}.
        CHECK(sum == doctest::Approx(std::pow(2000.0, 1.0 - gamma)).epsilon(1e-13));
    }
}

TEST_CASE("power_step avoids cancellation in the tail") {
    // Direct subtraction at k = 1e9 has ~7 good digits left; the series form
    // p*k^{p-1}*(1 + (p-1)/(2k) + ...) gives an independent reference.
    const double p = 0.5;
    const std::size_t k = 1000000000;
    const double kd = static_cast<double>(k);
    const double ref = p * std::pow(kd, p - 1.0) *
                       (1.0 + (p - 1.0) / (2.0 * kd) + (p - 1.0) * (p - 2.0) / (6.0 * kd * kd));
    CHECK(power_step(k, p) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("first and second differences") {
    auto g = g_weights(0.4, 6);
    auto w = first_difference(g);
    CHECK(w.size() == 5);
    for (std::size_t k = 0; k < w.size(); ++k) {
        CHECK(w[k] == doctest::Approx(g.values[k + 1] - g.values[k]).epsilon(1e-15));
        CHECK(w[k] < 0.0);
    }

    auto m = m_weights(1.5, 6);
    auto w2 = second_difference(m);
    CHECK(w2.size() == 4);
    for (std::size_t j = 0; j < w2.size(); ++j) {
        CHECK(w2[j] ==
              doctest::Approx(m.values[j] - 2.0 * m.values[j + 1] + m.values[j + 2]).epsilon(1e-15));
        CHECK(w2[j] > 0.0);
    }

    WeightSequence tiny{0.4, WeightKind::G, {1.0}};
    CHECK_THROWS_AS(first_difference(tiny), std::length_error);
    CHECK_THROWS_AS(second_difference(g), std::invalid_argument);  // wrong kind
}
