#include "fractime/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace fractime {

double power_step(std::size_t k, double p) {
    if (k == 0) return 1.0;
    const double kd = static_cast<double>(k);
    if (k > 1000000) {
        // k^p * ((1+1/k)^p - 1), evaluated via log1p/expm1
        return std::pow(kd, p) * std::expm1(p * std::log1p(1.0 / kd));
    }
    return std::pow(kd + 1.0, p) - std::pow(kd, p);
}

namespace {

std::vector<double> weight_values(double p, std::size_t count) {
    std::vector<double> w(count);
    for (std::size_t k = 0; k < count; ++k) w[k] = power_step(k, p);
    return w;
}

}  // namespace

WeightSequence g_weights(double gamma, std::size_t count) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("g_weights: gamma must lie in the open interval (0, 1)");
    if (count < 1) throw std::invalid_argument("g_weights: count must be >= 1");
    return WeightSequence{gamma, WeightKind::G, weight_values(1.0 - gamma, count)};
}

WeightSequence m_weights(double gamma, std::size_t count) {
    if (!(gamma > 1.0 && gamma < 2.0))
        throw std::domain_error("m_weights: gamma must lie in the open interval (1, 2)");
    if (count < 1) throw std::invalid_argument("m_weights: count must be >= 1");
    return WeightSequence{gamma, WeightKind::M, weight_values(2.0 - gamma, count)};
}

std::vector<double> first_difference(const WeightSequence& seq) {
    if (seq.length() < 2)
        throw std::length_error("first_difference: sequence must have length >= 2");
    std::vector<double> d(seq.length() - 1);
    for (std::size_t k = 1; k < seq.length(); ++k)
        d[k - 1] = seq.values[k] - seq.values[k - 1];
    return d;
}

std::vector<double> second_difference(const WeightSequence& seq) {
    if (seq.kind != WeightKind::M)
        throw std::invalid_argument("second_difference: defined for M-kind sequences");
    if (seq.length() < 3)
        throw std::length_error("second_difference: sequence must have length >= 3");
    std::vector<double> d(seq.length() - 2);
    for (std::size_t j = 2; j < seq.length(); ++j)
        d[j - 2] = seq.values[j - 2] - 2.0 * seq.values[j - 1] + seq.values[j];
    return d;
}

}  // namespace fractime
