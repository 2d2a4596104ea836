#include "lcmle/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lcmle/errors.hpp"

namespace lcmle {

namespace {

constexpr double kNormalizationTol = 1e-12;

void check_points_finite(const std::vector<double>& points) {
    for (double v : points)
        if (!std::isfinite(v)) throw std::domain_error("data points must be finite");
}

}  // namespace

WeightedData WeightedData::from_sorted(std::vector<double> x, std::vector<double> p) {
    if (x.size() != p.size())
        throw std::invalid_argument("points and weights differ in length");
    if (x.size() < 2)
        throw DegenerateDataError("need at least 2 distinct support points");
    check_points_finite(x);

    double total = 0.0;
    for (double w : p) {
        if (!(w > 0.0)) throw std::domain_error("weights must be positive");
        total += w;
    }

    WeightedData d;
    d.renormalized_ = std::abs(total - 1.0) > kNormalizationTol;
    d.x_ = std::move(x);
    d.p_ = std::move(p);
    for (double& w : d.p_) w /= total;

    d.delta_.resize(d.x_.size() - 1);
    for (std::size_t k = 0; k + 1 < d.x_.size(); ++k) {
        d.delta_[k] = d.x_[k + 1] - d.x_[k];
        if (!(d.delta_[k] > 0.0))
            throw std::invalid_argument("support points must be strictly increasing");
    }
    return d;
}

WeightedData prepare(const std::vector<double>& points,
                     const std::optional<std::vector<double>>& weights) {
    if (points.empty()) throw DegenerateDataError("no data points given");
    check_points_finite(points);
    if (weights) {
        if (weights->size() != points.size())
            throw std::invalid_argument("points and weights differ in length");
        for (double w : *weights) {
            if (!std::isfinite(w) || w < 0.0)
                throw std::domain_error("weights must be finite and nonnegative");
        }
    }

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    // Merge exact duplicates only; fuzzy binning is the caller's choice.
    std::vector<double> x, p;
    double total = 0.0;
    for (std::size_t idx : order) {
        const double w = weights ? (*weights)[idx] : 1.0;
        if (!x.empty() && points[idx] == x.back()) {
            p.back() += w;
        } else {
            x.push_back(points[idx]);
            p.push_back(w);
        }
        total += w;
    }
    if (!(total > 0.0)) throw std::domain_error("total weight must be positive");

    std::vector<double> xk, pk;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (p[i] > 0.0) {
            xk.push_back(x[i]);
            pk.push_back(p[i]);
        }
    }
    if (xk.size() < 2)
        throw DegenerateDataError("need at least 2 distinct support points with positive weight");

    WeightedData d = WeightedData::from_sorted(std::move(xk), std::move(pk));
    if (weights) {
        double given = std::accumulate(weights->begin(), weights->end(), 0.0);
        d.renormalized_ = std::abs(given - 1.0) > kNormalizationTol;
    } else {
        d.renormalized_ = false;
    }
    return d;
}

}  // namespace lcmle
