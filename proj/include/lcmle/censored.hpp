#pragma once

#include <cstddef>
#include <vector>

#include "lcmle/active_set.hpp"
#include "lcmle/data.hpp"
#include "lcmle/objective.hpp"

namespace lcmle {

/// A censored observation: the interval (left, right] with
/// 0 <= left < right <= infinity, or an exact point when left == right
/// (finite and positive).
struct CensoredObservation {
    double left = 0.0;
    double right = 0.0;

    bool exact() const { return left == right; }
};

struct EmConfig {
    double loglik_tol = 1e-8;     // stop when the log-likelihood gain drops below
    int max_em_iter = 500;
    int grid_refinement = 4;      // extra interior points per base grid cell
    ActiveSetConfig active_set{};
};

struct EmResult {
    std::vector<double> support_points;  // abscissae of psi
    LogDensity psi;
    KnotSet knots;
    std::vector<double> loglik_trace;    // nondecreasing; starts at the uniform init
    int n_iter = 0;
    bool converged = false;
    bool support_truncated = false;      // some observation reaches past the support
    DiagnosticReport diagnostics;        // of the final complete-data subproblem
};

/// Validates a censored sample. Throws std::domain_error for malformed
/// intervals and DegenerateDataError when no fit is possible (fewer than two
/// distinct grid anchors, or no finite mass anchor at the right end).
void validate_observations(const std::vector<CensoredObservation>& obs);

/// Normalized censored log-likelihood of the density exp(psi) supported on
/// [nodes.front(), nodes.back()]: exact points contribute psi(X_i)/n,
/// intervals log of their probability mass / n. An observation with zero
/// mass yields -infinity.
double censored_loglik(const std::vector<double>& nodes, const LogDensity& psi,
                       const std::vector<CensoredObservation>& obs);

/// One E-step: the discrete approximation of the conditional distribution of
/// the sample given the censoring intervals and the current log-density.
/// Exact observations keep their point mass; each interval observation
/// spreads mass 1/n over the grid cells it covers in proportion to the
/// density mass, placed at the conditional mean of each cell. psi lives on
/// the grid itself; the grid must contain every exact point and every finite
/// interval endpoint inside the support.
WeightedData e_step(const LogDensity& psi, const std::vector<CensoredObservation>& obs,
                    const std::vector<double>& grid);

/// Alternates e_step with the complete-data active set fit until the
/// censored log-likelihood gain falls below loglik_tol. The working grid is
/// built from the observation anchors plus grid_refinement interior points
/// per cell; the density support is the anchor range.
EmResult em_fit(const std::vector<CensoredObservation>& obs, const EmConfig& cfg = {});

}  // namespace lcmle
