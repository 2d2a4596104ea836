#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lcmle/data.hpp"
#include "lcmle/errors.hpp"
#include "lcmle/inner_solver.hpp"
#include "lcmle/objective.hpp"

namespace lcmle {

enum class StepKind { Start, Candidate, Blend, Checkpoint, Release };

/// One event of the outer algorithm, for debugging and for tracing how the
/// fit evolves (candidate proposals, convex-combination repairs, knot
/// releases, accepted subspace optima).
struct TraceStep {
    StepKind kind{};
    std::vector<std::size_t> knots;   // knot indices of the recorded state
    double objective = 0.0;
    std::vector<double> psi;          // filled only when ActiveSetConfig::record_psi
    std::size_t released = std::numeric_limits<std::size_t>::max();
};

struct ActiveSetConfig {
    int variant = 3;                  // 1: from a feasible start, 2: from the best
                                      // affine fit, 3: from the unconstrained fit
    double eps = 1e-7;                // numerical guard on constraints/derivatives
    NewtonConfig newton{};
    int max_outer = 0;                // subspace-solve budget; 0 = 10 * m
    bool record_psi = false;          // store psi snapshots in the trace
    std::optional<LogDensity> start;  // variant 1 starting point (must be feasible);
                                      // defaults to the best affine fit
};

struct FitResult {
    LogDensity psi;
    KnotSet knots;
    double objective = 0.0;
    int n_outer_iter = 0;             // subspace maximizations performed
    std::vector<TraceStep> trace;
    DiagnosticReport diagnostics;
};

/// The outer loop ran out of its subspace-solve budget.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& what, FitResult partial)
        : Error(what), partial(std::move(partial)) {}
    FitResult partial;
};

/// Second-difference values v_j^T psi for the interior points j = 1..m-2
/// (0-based); psi is concave exactly when all components are <= 0.
/// Empty for m = 2.
std::vector<double> constraint_values(const LogDensity& psi, const WeightedData& data);

/// Directional derivatives H_j of the objective along the hinge functions
/// min(x - x_j, 0), one per interior point. A positive H_j at a subspace
/// optimum means a knot at x_j would strictly improve the objective.
std::vector<double> directional_derivatives(const LogDensity& psi, const WeightedData& data);

/// Picks which constraint to release: the candidate index with the largest
/// derivative value, the smallest index on exact ties. Returns
/// h.size() when no candidate value exceeds eps.
std::size_t select_release(const std::vector<double>& h,
                           const std::vector<std::size_t>& candidates, double eps);

/// Longest step t in (0, 1] such that (1-t) psi + t cand stays feasible:
/// the smallest ratio -v_i^T psi / (v_i^T cand - v_i^T psi) over constraints
/// violated by cand (violation meaning v_i^T cand > eps). Returns 0 when psi
/// already sits on the blocking boundary. Throws std::invalid_argument when
/// cand violates nothing.
double step_to_feasible(const LogDensity& psi, const LogDensity& cand,
                        const WeightedData& data, double eps = 0.0);

/// Maximizes the objective over concave log-densities by the active set
/// method. At termination all constraint values are <= eps and all
/// directional derivatives H_j are <= eps.
FitResult fit(const WeightedData& data, const ActiveSetConfig& cfg = {});

}  // namespace lcmle
