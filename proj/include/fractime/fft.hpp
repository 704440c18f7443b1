#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fractime::fft {

enum class Direction { forward, inverse };

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform with bit-reversal reordering.
/// Forward is the unnormalized DFT; inverse carries the 1/L factor.
/// Twiddle factors are precomputed and cached per length.
/// Throws std::invalid_argument for non-power-of-two lengths.
void transform(std::vector<std::complex<double>>& data, Direction dir);

std::vector<std::complex<double>> forward(std::vector<std::complex<double>> data);
std::vector<std::complex<double>> inverse(std::vector<std::complex<double>> data);

}  // namespace fractime::fft
