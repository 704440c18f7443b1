#include "fractime/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fractime {

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

KrylovResult cg_solve(const LinearOperator& op, std::span<const double> b,
                      const SolverConfig& cfg, std::optional<std::span<const double>> x0) {
    const std::size_t n = op.dim;
    if (b.size() != n) throw std::invalid_argument("cg_solve: rhs length mismatch");
    if (x0 && x0->size() != n) throw std::invalid_argument("cg_solve: x0 length mismatch");

    const double bnorm = norm2(b);
    KrylovResult result;
    result.solution.assign(n, 0.0);
    if (bnorm == 0.0 && !x0) {
        result.converged = true;
        return result;
    }
    const double scale = bnorm > 0.0 ? bnorm : 1.0;

    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    if (x0) {
        std::copy(x0->begin(), x0->end(), x.begin());
        auto ax = op.apply(x);
        ++result.iterations;
        for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i];
    }

    double rr = 0.0;
    for (double v : r) rr += v * v;
    if (std::sqrt(rr) / scale <= cfg.tol) {
        result.solution = std::move(x);
        result.residual = std::sqrt(rr) / scale;
        result.converged = true;
        return result;
    }

    std::vector<double> w = r;
    for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
        auto q = op.apply(w);
        ++result.iterations;
        double wq = 0.0;
        for (std::size_t i = 0; i < n; ++i) wq += w[i] * q[i];
        if (wq <= 0.0)
            throw std::runtime_error("cg_solve: operator is not positive definite (w'Aw <= 0 at iteration " +
                                     std::to_string(k) + ")");
        const double kappa = rr / wq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += kappa * w[i];
            r[i] -= kappa * q[i];
        }
        double rr_next = 0.0;
        for (double v : r) rr_next += v * v;
        result.residual = std::sqrt(rr_next) / scale;
        if (result.residual <= cfg.tol) {
            result.solution = std::move(x);
            result.converged = true;
            return result;
        }
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) w[i] = r[i] + beta * w[i];
    }
    result.solution = std::move(x);
    return result;
}

namespace {

// x += V(:,0..k-1) * y, where the Hessenberg least-squares solution y comes
// from back substitution on the Givens-rotated upper triangle.
void gmres_update_solution(std::vector<double>& x, const std::vector<std::vector<double>>& v,
                           const std::vector<std::vector<double>>& h,
                           const std::vector<double>& g, std::size_t k) {
    std::vector<double> y(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
        double acc = g[i];
        for (std::size_t j = i + 1; j < k; ++j) acc -= h[i][j] * y[j];
        y[i] = acc / h[i][i];
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[j] * v[j][i];
}

}  // namespace

KrylovResult gmres_solve(const LinearOperator& op, std::span<const double> b,
                         const SolverConfig& cfg, std::optional<std::span<const double>> x0) {
    const std::size_t n = op.dim;
    if (b.size() != n) throw std::invalid_argument("gmres_solve: rhs length mismatch");
    if (x0 && x0->size() != n) throw std::invalid_argument("gmres_solve: x0 length mismatch");
    if (cfg.restart < 1) throw std::invalid_argument("gmres_solve: restart must be >= 1");

    const double bnorm = norm2(b);
    KrylovResult result;
    result.solution.assign(n, 0.0);
    if (bnorm == 0.0 && !x0) {
        result.converged = true;
        return result;
    }
    const double scale = bnorm > 0.0 ? bnorm : 1.0;
    const std::size_t m = std::min(cfg.restart, n);

    std::vector<double> x(n, 0.0);
    if (x0) std::copy(x0->begin(), x0->end(), x.begin());

    double best_residual = std::numeric_limits<double>::infinity();
    int stalled_cycles = 0;

    while (result.iterations < cfg.max_iter) {
        auto ax = op.apply(x);
        ++result.iterations;
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
        double beta = norm2(r);
        result.residual = beta / scale;
        if (result.residual <= cfg.tol) {
            result.solution = std::move(x);
            result.converged = true;
            return result;
        }
        // Near the rounding floor a cycle can tread water before the last
        // factor falls away; only repeated cycles without progress count as
        // stagnation.
        if (result.residual >= 0.999 * best_residual) {
            if (++stalled_cycles >= 3) {
                result.solution = std::move(x);
                return result;
            }
        } else {
            stalled_cycles = 0;
        }
        best_residual = std::min(best_residual, result.residual);

        std::vector<std::vector<double>> v;
        v.reserve(m + 1);
        std::vector<double> first = r;
        for (auto& e : first) e /= beta;
        v.push_back(std::move(first));

        std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m, 0.0), sn(m, 0.0);
        std::vector<double> g(m + 1, 0.0);
        g[0] = beta;

        std::size_t k = 0;
        bool happy = false;
        for (std::size_t j = 0; j < m && result.iterations < cfg.max_iter; ++j) {
            auto w = op.apply(v[j]);
            ++result.iterations;
            for (std::size_t i = 0; i <= j; ++i) {
                double hij = 0.0;
                for (std::size_t l = 0; l < n; ++l) hij += w[l] * v[i][l];
                h[i][j] = hij;
                for (std::size_t l = 0; l < n; ++l) w[l] -= hij * v[i][l];
            }
            h[j + 1][j] = norm2(w);

            // Rotate the new column into upper-triangular form.
            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            const double denom = std::hypot(h[j][j], h[j + 1][j]);
            cs[j] = denom == 0.0 ? 1.0 : h[j][j] / denom;
            sn[j] = denom == 0.0 ? 0.0 : h[j + 1][j] / denom;
            h[j][j] = denom;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            k = j + 1;
            if (h[j + 1][j] == 0.0) {  // invariant subspace reached
                happy = true;
                break;
            }
            auto next = w;
            for (auto& e : next) e /= h[j + 1][j];
            v.push_back(std::move(next));

            if (std::abs(g[j + 1]) / scale <= cfg.tol) break;
        }

        gmres_update_solution(x, v, h, g, k);
        if (happy || std::abs(g[k]) / scale <= cfg.tol) {
            auto ax2 = op.apply(x);
            ++result.iterations;
            double rn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = b[i] - ax2[i];
                rn += d * d;
            }
            result.residual = std::sqrt(rn) / scale;
            result.solution = std::move(x);
            // Happy breakdown only certifies an invariant subspace; for a
            // singular operator the best residual in it can still be large.
            result.converged = result.residual <= cfg.tol;
            return result;
        }
    }
    result.solution = std::move(x);
    return result;
}

std::vector<double> dense_solve(DenseMatrix a, std::span<const double> b) {
    if (a.rows != a.cols) throw std::invalid_argument("dense_solve: matrix must be square");
    const std::size_t n = a.rows;
    if (b.size() != n) throw std::invalid_argument("dense_solve: rhs length mismatch");

    double max_entry = 0.0;
    for (double v : a.data) max_entry = std::max(max_entry, std::abs(v));
    const double pivot_floor = 1e-14 * max_entry;

    std::vector<double> x(b.begin(), b.end());
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double best = std::abs(a(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (std::abs(a(i, col)) > best) {
                best = std::abs(a(i, col));
                pivot_row = i;
            }
        }
        if (best <= pivot_floor)
            throw std::runtime_error("dense_solve: matrix is numerically singular");
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot_row, j));
            std::swap(x[col], x[pivot_row]);
        }
        const double inv_pivot = 1.0 / a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double factor = a(i, col) * inv_pivot;
            if (factor == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= factor * a(col, j);
            x[i] -= factor * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = x[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
        x[i] = acc / a(i, i);
    }
    return x;
}

}  // namespace fractime
