#pragma once

#include <vector>

namespace lcmle::pw {

// Helpers for a continuous function given by values at sorted nodes and
// linear in between (log-density scale). Everything integrates exp of the
// function in closed form through the segment kernel.

/// Linear interpolation at r; r must lie within [nodes.front(), nodes.back()].
double interp(const std::vector<double>& nodes, const std::vector<double>& values, double r);

/// \int_lo^hi exp(f) dx for [lo, hi] inside the node range.
double mass_between(const std::vector<double>& nodes, const std::vector<double>& values,
                    double lo, double hi);

/// \int_lo^hi x exp(f) dx for [lo, hi] inside the node range.
double first_moment_between(const std::vector<double>& nodes, const std::vector<double>& values,
                            double lo, double hi);

/// Cumulative masses F(node_i) = \int_{node_0}^{node_i} exp(f); F(node_0) = 0.
std::vector<double> cdf_at_nodes(const std::vector<double>& nodes,
                                 const std::vector<double>& values);

}  // namespace lcmle::pw
