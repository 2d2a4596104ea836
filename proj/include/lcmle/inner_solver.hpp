#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lcmle/data.hpp"
#include "lcmle/objective.hpp"

namespace lcmle {

/// The inactive-constraint index set: positions (0-based) where the
/// piecewise-linear log-density may change slope. Always contains both
/// endpoints.
struct KnotSet {
    std::vector<std::size_t> indices;

    static KnotSet endpoints(std::size_t m);
    static KnotSet all(std::size_t m);

    std::size_t size() const { return indices.size(); }
    void validate(std::size_t m) const;
};

struct NewtonConfig {
    double grad_tol = 1e-10;        // sup-norm stopping threshold
    int max_iter = 200;
    double armijo_c = 0.01;
    double backtrack_factor = 0.5;
};

/// Collapses the full weighted data onto the knot points. Every non-knot
/// point splits its weight between the two enclosing knots in proportion to
/// its barycentric position, so the reduced weights stay positive and sum to
/// one, and the objective of any function linear between knots is preserved.
WeightedData reduce_weights(const KnotSet& knots, const WeightedData& data);

/// Log-density of the uniform distribution on the data range; a safe start
/// inside the objective's domain.
LogDensity uniform_start(const WeightedData& data);

/// Maximizes L by damped Newton with Armijo backtracking. The Newton step
/// solves the tridiagonal system H d = -g. Returns psi with
/// ||gradient||_inf <= grad_tol; the objective never decreases across
/// accepted steps (recorded in objective_trace when given).
///
/// Throws ConvergenceError (carrying the best iterate) when max_iter is
/// exhausted and ConditioningError when the Hessian solve breaks down.
LogDensity newton_maximize(const WeightedData& data, const LogDensity& init,
                           const NewtonConfig& cfg = {},
                           std::vector<double>* objective_trace = nullptr);

/// Maximizes L over the functions linear between consecutive knots: reduces
/// the weights, runs Newton on the reduced problem (warm started from the
/// knot values of warm_start when given) and interpolates the knot values
/// back to the full grid.
LogDensity subspace_maximize(const KnotSet& knots, const WeightedData& data,
                             const std::optional<LogDensity>& warm_start = std::nullopt,
                             const NewtonConfig& cfg = {});

}  // namespace lcmle
