#include "lcmle/tridiagonal.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "lcmle/errors.hpp"

namespace lcmle {

std::vector<double> solve_spd_tridiagonal(const std::vector<double>& diag,
                                          const std::vector<double>& off,
                                          std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (off.size() + 1 != n || rhs.size() != n)
        throw std::invalid_argument("tridiagonal solve: inconsistent sizes");

    std::vector<double> d(n);   // pivots
    std::vector<double> l(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double pivot = diag[i];
        if (i > 0) pivot -= l[i - 1] * l[i - 1] * d[i - 1];
        double row_scale = std::abs(diag[i]);
        if (i > 0) row_scale += std::abs(off[i - 1]);
        if (i + 1 < n) row_scale += std::abs(off[i]);
        if (!(pivot > 1e-14 * row_scale)) {
            if (std::getenv("LCMLE_EM_DEBUG")) {
                std::fprintf(stderr, "[tridiag] n=%zu fail at i=%zu pivot=%.3e scale=%.3e\n",
                             n, i, pivot, row_scale);
                for (std::size_t k = (i > 2 ? i - 2 : 0); k < std::min(n, i + 3); ++k)
                    std::fprintf(stderr, "  row %zu: diag=%.6e off=%.6e\n", k, diag[k],
                                 k + 1 < n ? off[k] : 0.0);
            }
            throw ConditioningError("tridiagonal solve: pivot below tolerance");
        }
        d[i] = pivot;
        if (i + 1 < n) l[i] = off[i] / pivot;
    }

    // Forward L z = rhs, scale by D, back L^T y = z.
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= l[i - 1] * rhs[i - 1];
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= l[i] * rhs[i + 1];
    return rhs;
}

}  // namespace lcmle
