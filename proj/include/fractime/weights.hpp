#pragma once

#include <cstddef>
#include <vector>

namespace fractime {

enum class WeightKind { G, M };

/// Caputo finite-difference weight sequence w_k = (k+1)^p - k^p with
/// p = 1-gamma (kind G, 0<gamma<1) or p = 2-gamma (kind M, 1<gamma<2).
/// values[0] == 1, strictly decreasing, strictly positive.
struct WeightSequence {
    double gamma = 0.0;
    WeightKind kind = WeightKind::G;
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
};

/// (k+1)^p - k^p without catastrophic cancellation in the tail.
/// For large k the direct subtraction loses all significant digits
/// (the value decays like p*k^{p-1}), so we switch to
/// k^p * expm1(p * log1p(1/k)).
double power_step(std::size_t k, double p);

/// G_k = (k+1)^{1-gamma} - k^{1-gamma}, k = 0..count-1. Requires 0<gamma<1.
WeightSequence g_weights(double gamma, std::size_t count);

/// M_k = (k+1)^{2-gamma} - k^{2-gamma}, k = 0..count-1. Requires 1<gamma<2.
WeightSequence m_weights(double gamma, std::size_t count);

/// W_k = values[k] - values[k-1] for k = 1..K (strictly negative for
/// genuine weight sequences). Requires length >= 2.
std::vector<double> first_difference(const WeightSequence& seq);

/// W_j = values[j-2] - 2*values[j-1] + values[j] for j = 2..K (strictly
/// positive for M sequences). Requires kind M and length >= 3.
std::vector<double> second_difference(const WeightSequence& seq);

}  // namespace fractime
