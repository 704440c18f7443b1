#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fractime {

/// Row-major dense matrix, used as the oracle side of the structured kernels
/// and by the Gaussian-elimination solver.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::vector<double> multiply(std::span<const double> x) const;
};

enum class ToeplitzStructure { general, symmetric, lower_triangular };

/// Matrix constant along diagonals, stored by first column and first row.
/// Entry (i,j) is first_row[j-i] for j >= i and first_col[i-j] otherwise.
class ToeplitzOperator {
public:
    static ToeplitzOperator symmetric(std::vector<double> first_col);
    static ToeplitzOperator lower_triangular(std::vector<double> first_col);
    static ToeplitzOperator general(std::vector<double> first_col, std::vector<double> first_row);

    std::size_t dim() const { return n_; }
    ToeplitzStructure structure() const { return structure_; }
    const std::vector<double>& first_col() const { return col_; }
    const std::vector<double>& first_row() const { return row_; }

    double entry(std::size_t i, std::size_t j) const {
        return j >= i ? row_[j - i] : col_[i - j];
    }

    DenseMatrix dense() const;

    ToeplitzOperator scaled(double alpha) const;

private:
    ToeplitzOperator(std::vector<double> col, std::vector<double> row, ToeplitzStructure tag);

    std::size_t n_;
    std::vector<double> col_;
    std::vector<double> row_;
    ToeplitzStructure structure_;
};

/// DFT eigenvalues of the circulant embedding of an n x n Toeplitz operator.
/// The embedding length L is the smallest power of two >= 2n; the leading
/// n x n block of the implied circulant reproduces the source operator exactly.
class CirculantSpectrum {
public:
    CirculantSpectrum(std::size_t n, std::size_t embedding_length,
                      std::vector<std::complex<double>> eigenvalues);

    std::size_t source_dim() const { return n_; }
    std::size_t embedding_length() const { return length_; }
    const std::vector<std::complex<double>>& eigenvalues() const { return eigenvalues_; }

    /// First column of the implied circulant (inverse DFT of the eigenvalues).
    std::vector<double> circulant_first_col() const;

private:
    std::size_t n_;
    std::size_t length_;
    std::vector<std::complex<double>> eigenvalues_;
};

CirculantSpectrum embed_circulant(const ToeplitzOperator& t);

/// dense(t) * x in O(L log L) via the circulant embedding.
std::vector<double> toeplitz_matvec(const CirculantSpectrum& spec, std::span<const double> x);

/// Block tridiagonal matrix with identical lower-triangular Toeplitz diagonal
/// blocks and off-diagonal blocks equal to off_block_scale * I.
class BlockTridiagonalToeplitzOperator {
public:
    BlockTridiagonalToeplitzOperator(std::size_t m_blocks, ToeplitzOperator diag_block,
                                     double off_block_scale);

    std::size_t m_blocks() const { return m_blocks_; }
    std::size_t block_dim() const { return diag_block_.dim(); }
    std::size_t dim() const { return m_blocks_ * diag_block_.dim(); }
    const ToeplitzOperator& diag_block() const { return diag_block_; }
    double off_block_scale() const { return off_scale_; }
    const CirculantSpectrum& diag_spectrum() const { return diag_spectrum_; }

    DenseMatrix dense() const;

private:
    std::size_t m_blocks_;
    ToeplitzOperator diag_block_;
    double off_scale_;
    CirculantSpectrum diag_spectrum_;
};

std::vector<double> block_matvec(const BlockTridiagonalToeplitzOperator& op,
                                 std::span<const double> x);

/// Exact O(n^2) forward substitution for lower-triangular Toeplitz systems;
/// the slow oracle the fast GMRES path is checked against.
std::vector<double> lower_toeplitz_forward_solve(const ToeplitzOperator& t,
                                                 std::span<const double> b);

/// The contract the Krylov solvers depend on: a dimension and a
/// deterministic apply.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<std::vector<double>(std::span<const double>)> apply;
};

LinearOperator make_dense_operator(const DenseMatrix& m);
LinearOperator make_toeplitz_operator(const CirculantSpectrum& spec);
LinearOperator make_block_operator(const BlockTridiagonalToeplitzOperator& op);

}  // namespace fractime
