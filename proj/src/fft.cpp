#include "fractime/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fractime::fft {

namespace {

// Forward-direction twiddles for every stage of a length-n transform, laid
// out contiguously per stage: the sub-transform of length len owns the
// len/2 entries starting at len/2 - 1, holding e^{-2*pi*i*k/len}.
std::shared_ptr<const std::vector<std::complex<double>>> twiddle_table(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const std::vector<std::complex<double>>>> cache;

    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    auto table = std::make_shared<std::vector<std::complex<double>>>(n - 1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
            (*table)[half - 1 + k] = std::polar(1.0, angle);
        }
    }
    cache.emplace(n, table);
    return table;
}

void bit_reverse_permute(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

}  // namespace

void transform(std::vector<std::complex<double>>& data, Direction dir) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft::transform: length must be a power of two");
    if (n == 1) return;

    const auto table = twiddle_table(n);
    bit_reverse_permute(data);

    const std::complex<double>* twiddle = table->data();
    const double conj_sign = dir == Direction::inverse ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::complex<double>* stage = twiddle + (half - 1);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> w(stage[k].real(), conj_sign * stage[k].imag());
                const auto u = data[start + k];
                const auto v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }

    if (dir == Direction::inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : data) x *= scale;
    }
}

std::vector<std::complex<double>> forward(std::vector<std::complex<double>> data) {
    transform(data, Direction::forward);
    return data;
}

std::vector<std::complex<double>> inverse(std::vector<std::complex<double>> data) {
    transform(data, Direction::inverse);
    return data;
}

}  // namespace fractime::fft
