#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace lcmle {

/// Distinct sorted support points x_1 < ... < x_m with positive probability
/// weights summing to one. Gaps delta_k = x_{k+1} - x_k are cached.
class WeightedData {
public:
    /// Validates a readily sorted/distinct configuration. Weights must be
    /// positive; a total off one by more than 1e-12 is renormalized and
    /// flagged.
    static WeightedData from_sorted(std::vector<double> x, std::vector<double> p);

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& delta() const { return delta_; }
    std::size_t size() const { return x_.size(); }
    bool weights_renormalized() const { return renormalized_; }

private:
    WeightedData() = default;

    std::vector<double> x_;
    std::vector<double> p_;
    std::vector<double> delta_;
    bool renormalized_ = false;

    friend WeightedData prepare(const std::vector<double>&,
                                const std::optional<std::vector<double>>&);
};

/// Reduces raw observations to weighted distinct support points: sorts,
/// merges exact duplicates by summing their weights (count weights when none
/// are given), drops zero-weight points and normalizes the total to one.
///
/// Throws DegenerateDataError for fewer than two distinct points and
/// std::domain_error for negative weights or a nonpositive weight total.
WeightedData prepare(const std::vector<double>& points,
                     const std::optional<std::vector<double>>& weights = std::nullopt);

}  // namespace lcmle
