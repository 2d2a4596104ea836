#pragma once

// Exhaustive reference for small fits: try every knot subset, solve the
// subspace problem, keep feasible candidates whose hinge derivatives pass
// the optimality screen, return the best.

#include <cstddef>
#include <optional>
#include <vector>

#include "lcmle/active_set.hpp"
#include "lcmle/data.hpp"
#include "lcmle/inner_solver.hpp"
#include "lcmle/objective.hpp"

namespace oracle {

struct BruteForceFit {
    lcmle::LogDensity psi;
    double objective = 0.0;
};

inline BruteForceFit brute_force_fit(const lcmle::WeightedData& data, double eps = 1e-7) {
    const std::size_t m = data.size();
    const std::size_t interior = m - 2;
    std::optional<BruteForceFit> best;
    std::optional<BruteForceFit> best_screened;

    for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
        lcmle::KnotSet ks;
        ks.indices.push_back(0);
        for (std::size_t i = 0; i < interior; ++i)
            if (mask & (std::size_t{1} << i)) ks.indices.push_back(i + 1);
        ks.indices.push_back(m - 1);

        const auto psi = lcmle::subspace_maximize(ks, data);
        bool feasible = true;
        for (double c : lcmle::constraint_values(psi, data))
            if (c > eps) feasible = false;
        if (!feasible) continue;

        const double value = lcmle::eval_objective(psi, data);
        if (!best || value > best->objective) best = BruteForceFit{psi, value};

        bool optimal = true;
        const auto h = lcmle::directional_derivatives(psi, data);
        for (std::size_t i = 0; i < interior; ++i)
            if (!(mask & (std::size_t{1} << i)) && h[i] > eps) optimal = false;
        if (optimal && (!best_screened || value > best_screened->objective))
            best_screened = BruteForceFit{psi, value};
    }
    // The screened winner is the usual answer; the plain feasible maximum
    // backs it up if the screen discarded everything.
    return best_screened ? *best_screened : *best;
}

}  // namespace oracle
