#ifndef STATBUNDLE_LINALG_HPP
#define STATBUNDLE_LINALG_HPP

#include <cstddef>
#include <vector>

// Dense solves for the tiny systems that appear here: Gram matrices of
// finite-difference bases, ANOVA normal equations and sufficient-statistic
// Grams, all of order <= a few dozen. Row-major storage.

namespace statbundle::linalg {

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws IllConditioned on a vanishing pivot.
std::vector<double> solve(std::vector<double> a, std::vector<double> b, std::size_t n);

// Explicit inverse, same pivoting.
std::vector<double> inverse(std::vector<double> a, std::size_t n);

double norm_inf(const std::vector<double>& a, std::size_t n);

// Condition number in the infinity norm, ||A|| * ||A^-1||.
// Returns +inf when the matrix is numerically singular.
double cond_inf(const std::vector<double>& a, std::size_t n);

}  // namespace statbundle::linalg

#endif
