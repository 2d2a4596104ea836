#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lcmle/data.hpp"

namespace lcmle {

/// A piecewise-linear log-density: values at the support points of a
/// WeightedData, interpolated linearly within [x_1, x_m] and -infinity
/// outside. All values must be finite.
struct LogDensity {
    std::vector<double> values;
};

/// Symmetric tridiagonal matrix: diag has size m, off size m - 1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

/// Stationarity residuals of the complete-data objective. At the unrestricted
/// maximizer the distribution function integrates to one, averages to the
/// weight partial sums on every cell, and reproduces the first two weighted
/// moments; the residuals below all vanish there.
struct DiagnosticReport {
    double total_mass_residual = 0.0;             // F(x_m) - 1
    std::vector<double> interval_residuals;       // mean of F on cell k minus sum_{i<=k} p_i
    double mean_residual = 0.0;                   // sum p_i x_i - \int x f
    double second_moment_residual = 0.0;          // moment identity defect
    double objective = 0.0;
};

/// L(psi) = sum_i p_i psi_i - sum_k delta_k J(psi_k, psi_{k+1});
/// strictly concave and coercive in psi.
double eval_objective(const LogDensity& psi, const WeightedData& data);

/// Gradient of L; component k combines the weights with delta-scaled J_10 /
/// J_01 terms of the adjacent cells.
std::vector<double> gradient(const LogDensity& psi, const WeightedData& data);

/// Hessian of L (negative definite, tridiagonal).
SymTridiagonal hessian(const LogDensity& psi, const WeightedData& data);

/// Log-density at r: interpolated inside the support, -infinity outside.
double log_density_at(const LogDensity& psi, const WeightedData& data, double r);

/// F(r) = \int_{x_1}^r exp(psi); requires x_1 <= r <= x_m.
double cdf(const LogDensity& psi, const WeightedData& data, double r);

/// F at every support point; F(x_1) = 0.
std::vector<double> cdf_at_points(const LogDensity& psi, const WeightedData& data);

/// (\int (x - a) f, \int (x - a)^2 f) for f = exp(psi).
std::pair<double, double> mean_and_second_moment(const LogDensity& psi,
                                                 const WeightedData& data, double a);

/// Mean of F over cell k (0-based, k < m - 1):
/// delta_k^{-1} \int_{x_k}^{x_{k+1}} F = F(x_k) + delta_k J_10(psi_k, psi_{k+1}),
/// which lies strictly between F(x_k) and F(x_{k+1}).
double mean_integral_of_F(const LogDensity& psi, const WeightedData& data, std::size_t k);

DiagnosticReport diagnostics(const LogDensity& psi, const WeightedData& data);

}  // namespace lcmle
