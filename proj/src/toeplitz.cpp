#include "fractime/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "fractime/fft.hpp"

namespace fractime {

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols)
        throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        const double* row = data.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

ToeplitzOperator::ToeplitzOperator(std::vector<double> col, std::vector<double> row,
                                   ToeplitzStructure tag)
    : n_(col.size()), col_(std::move(col)), row_(std::move(row)), structure_(tag) {
    if (n_ == 0) throw std::invalid_argument("ToeplitzOperator: empty first column");
    if (row_.size() != n_)
        throw std::invalid_argument("ToeplitzOperator: first row/column length mismatch");
    if (col_[0] != row_[0])
        throw std::invalid_argument("ToeplitzOperator: first_col[0] must equal first_row[0]");
}

ToeplitzOperator ToeplitzOperator::symmetric(std::vector<double> first_col) {
    std::vector<double> row = first_col;
    return ToeplitzOperator(std::move(first_col), std::move(row), ToeplitzStructure::symmetric);
}

ToeplitzOperator ToeplitzOperator::lower_triangular(std::vector<double> first_col) {
    std::vector<double> row(first_col.size(), 0.0);
    if (!first_col.empty()) row[0] = first_col[0];
    return ToeplitzOperator(std::move(first_col), std::move(row),
                            ToeplitzStructure::lower_triangular);
}

ToeplitzOperator ToeplitzOperator::general(std::vector<double> first_col,
                                           std::vector<double> first_row) {
    return ToeplitzOperator(std::move(first_col), std::move(first_row),
                            ToeplitzStructure::general);
}

DenseMatrix ToeplitzOperator::dense() const {
    DenseMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = entry(i, j);
    return m;
}

ToeplitzOperator ToeplitzOperator::scaled(double alpha) const {
    std::vector<double> col = col_, row = row_;
    for (auto& v : col) v *= alpha;
    for (auto& v : row) v *= alpha;
    return ToeplitzOperator(std::move(col), std::move(row), structure_);
}

CirculantSpectrum::CirculantSpectrum(std::size_t n, std::size_t embedding_length,
                                     std::vector<std::complex<double>> eigenvalues)
    : n_(n), length_(embedding_length), eigenvalues_(std::move(eigenvalues)) {
    if (!fft::is_power_of_two(length_) || length_ < 2 * n_)
        throw std::invalid_argument("CirculantSpectrum: embedding length must be a power of two >= 2n");
    if (eigenvalues_.size() != length_)
        throw std::invalid_argument("CirculantSpectrum: eigenvalue count mismatch");
}

std::vector<double> CirculantSpectrum::circulant_first_col() const {
    auto col = fft::inverse(eigenvalues_);
    std::vector<double> out(length_);
    for (std::size_t k = 0; k < length_; ++k) out[k] = col[k].real();
    return out;
}

CirculantSpectrum embed_circulant(const ToeplitzOperator& t) {
    const std::size_t n = t.dim();
    std::size_t length = 2;
    while (length < 2 * n) length <<= 1;

    // Circulant first column [a_0, a_{-1},...,a_{-(n-1)}, 0..., a_{n-1},...,a_1].
    std::vector<std::complex<double>> c(length, 0.0);
    for (std::size_t k = 0; k < n; ++k) c[k] = t.first_col()[k];
    for (std::size_t k = 1; k < n; ++k) c[length - k] = t.first_row()[k];

    fft::transform(c, fft::Direction::forward);
    return CirculantSpectrum(n, length, std::move(c));
}

std::vector<double> toeplitz_matvec(const CirculantSpectrum& spec, std::span<const double> x) {
    const std::size_t n = spec.source_dim();
    if (x.size() != n)
        throw std::invalid_argument("toeplitz_matvec: vector length must match operator dimension");

    const std::size_t length = spec.embedding_length();
    std::vector<std::complex<double>> buf(length, 0.0);
    for (std::size_t k = 0; k < n; ++k) buf[k] = x[k];

    fft::transform(buf, fft::Direction::forward);
    const auto& eig = spec.eigenvalues();
    for (std::size_t k = 0; k < length; ++k) buf[k] *= eig[k];
    fft::transform(buf, fft::Direction::inverse);

    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = buf[k].real();
    return y;
}

BlockTridiagonalToeplitzOperator::BlockTridiagonalToeplitzOperator(std::size_t m_blocks,
                                                                   ToeplitzOperator diag_block,
                                                                   double off_block_scale)
    : m_blocks_(m_blocks),
      diag_block_(std::move(diag_block)),
      off_scale_(off_block_scale),
      diag_spectrum_(embed_circulant(diag_block_)) {
    if (m_blocks_ == 0)
        throw std::invalid_argument("BlockTridiagonalToeplitzOperator: need at least one block");
}

DenseMatrix BlockTridiagonalToeplitzOperator::dense() const {
    const std::size_t nb = block_dim();
    DenseMatrix m(dim(), dim());
    for (std::size_t b = 0; b < m_blocks_; ++b) {
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j)
                m(b * nb + i, b * nb + j) = diag_block_.entry(i, j);
        if (b + 1 < m_blocks_) {
            for (std::size_t i = 0; i < nb; ++i) {
                m(b * nb + i, (b + 1) * nb + i) = off_scale_;
                m((b + 1) * nb + i, b * nb + i) = off_scale_;
            }
        }
    }
    return m;
}

std::vector<double> block_matvec(const BlockTridiagonalToeplitzOperator& op,
                                 std::span<const double> x) {
    if (x.size() != op.dim())
        throw std::invalid_argument("block_matvec: vector length must match operator dimension");
    const std::size_t nb = op.block_dim();
    const std::size_t m = op.m_blocks();
    const double beta = op.off_block_scale();

    std::vector<double> y(op.dim());
    for (std::size_t b = 0; b < m; ++b) {
        auto yi = toeplitz_matvec(op.diag_spectrum(), x.subspan(b * nb, nb));
        if (b > 0) {
            auto left = x.subspan((b - 1) * nb, nb);
            for (std::size_t k = 0; k < nb; ++k) yi[k] += beta * left[k];
        }
        if (b + 1 < m) {
            auto right = x.subspan((b + 1) * nb, nb);
            for (std::size_t k = 0; k < nb; ++k) yi[k] += beta * right[k];
        }
        std::copy(yi.begin(), yi.end(), y.begin() + static_cast<std::ptrdiff_t>(b * nb));
    }
    return y;
}

std::vector<double> lower_toeplitz_forward_solve(const ToeplitzOperator& t,
                                                 std::span<const double> b) {
    if (t.structure() != ToeplitzStructure::lower_triangular)
        throw std::invalid_argument("lower_toeplitz_forward_solve: operator must be lower triangular");
    if (b.size() != t.dim())
        throw std::invalid_argument("lower_toeplitz_forward_solve: dimension mismatch");
    const auto& col = t.first_col();
    if (col[0] == 0.0)
        throw std::runtime_error("lower_toeplitz_forward_solve: zero diagonal");

    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        double acc = b[i];
        for (std::size_t j = 0; j < i; ++j) acc -= col[i - j] * x[j];
        x[i] = acc / col[0];
    }
    return x;
}

LinearOperator make_dense_operator(const DenseMatrix& m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("make_dense_operator: matrix must be square");
    return LinearOperator{m.rows, [m](std::span<const double> x) { return m.multiply(x); }};
}

LinearOperator make_toeplitz_operator(const CirculantSpectrum& spec) {
    return LinearOperator{spec.source_dim(),
                          [spec](std::span<const double> x) { return toeplitz_matvec(spec, x); }};
}

LinearOperator make_block_operator(const BlockTridiagonalToeplitzOperator& op) {
    auto shared = std::make_shared<BlockTridiagonalToeplitzOperator>(op);
    return LinearOperator{shared->dim(), [shared](std::span<const double> x) {
                              return block_matvec(*shared, x);
                          }};
}

}  // namespace fractime
