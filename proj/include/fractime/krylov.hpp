#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fractime/toeplitz.hpp"

namespace fractime {

struct SolverConfig {
    double tol = 1e-10;          // relative residual ||r||_2 / ||b||_2
    std::size_t max_iter = 100000;
    std::size_t restart = 20;    // GMRES restart length, ignored by CG
};

struct KrylovResult {
    std::vector<double> solution;
    std::size_t iterations = 0;  // total matrix-vector products
    double residual = 0.0;       // final relative residual
    bool converged = false;
};

/// Conjugate gradients for symmetric positive definite operators.
/// Throws on dimension mismatch and on loss of definiteness
/// (search direction with w^T A w <= 0, reported with the iteration index).
KrylovResult cg_solve(const LinearOperator& op, std::span<const double> b,
                      const SolverConfig& cfg,
                      std::optional<std::span<const double>> x0 = std::nullopt);

/// Restarted GMRES: Arnoldi with modified Gram-Schmidt, Hessenberg
/// least-squares via Givens rotations. Stagnation over a full restart cycle
/// terminates with converged=false rather than throwing.
KrylovResult gmres_solve(const LinearOperator& op, std::span<const double> b,
                         const SolverConfig& cfg,
                         std::optional<std::span<const double>> x0 = std::nullopt);

/// LU with partial pivoting. Throws std::runtime_error when numerically
/// singular (pivot below 1e-14 * max|entry|).
std::vector<double> dense_solve(DenseMatrix a, std::span<const double> b);

double norm2(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace fractime
