#pragma once

#include <vector>

namespace lcmle {

/// Solves A y = rhs for symmetric positive definite tridiagonal A via the
/// root-free LDL^T factorization. Throws ConditioningError when a pivot
/// falls below 1e-14 times its row scale.
std::vector<double> solve_spd_tridiagonal(const std::vector<double>& diag,
                                          const std::vector<double>& off,
                                          std::vector<double> rhs);

}  // namespace lcmle
