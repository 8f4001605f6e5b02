#include "statbundle/linalg.hpp"

#include <cmath>
#include <limits>

#include "statbundle/errors.hpp"

namespace statbundle::linalg {

namespace {

// In-place LU with partial pivoting; perm holds the row order.
// Returns false on a zero pivot.
bool lu_factor(std::vector<double>& a, std::vector<std::size_t>& perm, std::size_t n) {
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a[perm[k] * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a[perm[i] * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return false;
        std::swap(perm[k], perm[piv]);
        const double pivot = a[perm[k] * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[perm[i] * n + k] / pivot;
            a[perm[i] * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j) a[perm[i] * n + j] -= m * a[perm[k] * n + j];
        }
    }
    return true;
}

std::vector<double> lu_solve(const std::vector<double>& lu, const std::vector<std::size_t>& perm,
                             const std::vector<double>& b, std::size_t n) {
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu[perm[i] * n + j] * y[j];
        y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu[perm[ii] * n + j] * x[j];
        x[ii] = s / lu[perm[ii] * n + ii];
    }
    return x;
}

}  // namespace

std::vector<double> solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
    std::vector<std::size_t> perm;
    if (!lu_factor(a, perm, n)) throw IllConditioned("linear system is singular");
    return lu_solve(a, perm, b, n);
}

std::vector<double> inverse(std::vector<double> a, std::size_t n) {
    std::vector<std::size_t> perm;
    if (!lu_factor(a, perm, n)) throw IllConditioned("matrix is singular");
    std::vector<double> inv(n * n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = lu_solve(a, perm, e, n);
        for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
        e[j] = 0.0;
    }
    return inv;
}

double norm_inf(const std::vector<double>& a, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(a[i * n + j]);
        best = row > best ? row : best;
    }
    return best;
}

double cond_inf(const std::vector<double>& a, std::size_t n) {
    try {
        const std::vector<double> inv = inverse(a, n);
        return norm_inf(a, n) * norm_inf(inv, n);
    } catch (const IllConditioned&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace statbundle::linalg
