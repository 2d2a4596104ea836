#include "lcmle/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lcmle/errors.hpp"
#include "lcmle/tridiagonal.hpp"

namespace lcmle {

KnotSet KnotSet::endpoints(std::size_t m) { return KnotSet{{0, m - 1}}; }

KnotSet KnotSet::all(std::size_t m) {
    KnotSet k;
    k.indices.resize(m);
    std::iota(k.indices.begin(), k.indices.end(), std::size_t{0});
    return k;
}

void KnotSet::validate(std::size_t m) const {
    if (indices.size() < 2 || indices.front() != 0 || indices.back() != m - 1 ||
        !std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("knot set must be sorted, distinct and contain both endpoints");
}

WeightedData reduce_weights(const KnotSet& knots, const WeightedData& data) {
    knots.validate(data.size());
    const auto& x = data.x();
    const auto& p = data.p();
    const auto& I = knots.indices;
    const std::size_t k = I.size();

    std::vector<double> rx(k), rp(k, 0.0);
    for (std::size_t s = 0; s < k; ++s) rx[s] = x[I[s]];

    // Left endpoint collects everything up to the second knot.
    for (std::size_t i = 0; i < I[1]; ++i)
        rp[0] += (x[I[1]] - x[i]) / (x[I[1]] - x[0]) * p[i];
    // Interior knots take the smaller of the two barycentric ratios.
    for (std::size_t s = 1; s + 1 < k; ++s) {
        for (std::size_t i = I[s - 1] + 1; i < I[s + 1]; ++i) {
            const double left = (x[i] - x[I[s - 1]]) / (x[I[s]] - x[I[s - 1]]);
            const double right = (x[I[s + 1]] - x[i]) / (x[I[s + 1]] - x[I[s]]);
            rp[s] += std::min(left, right) * p[i];
        }
    }
    for (std::size_t i = I[k - 2] + 1; i < data.size(); ++i)
        rp[k - 1] += (x[i] - x[I[k - 2]]) / (x.back() - x[I[k - 2]]) * p[i];

    return WeightedData::from_sorted(std::move(rx), std::move(rp));
}

LogDensity uniform_start(const WeightedData& data) {
    const double level = -std::log(data.x().back() - data.x().front());
    return LogDensity{std::vector<double>(data.size(), level)};
}

LogDensity newton_maximize(const WeightedData& data, const LogDensity& init,
                           const NewtonConfig& cfg,
                           std::vector<double>* objective_trace) {
    LogDensity psi = init;
    double value = eval_objective(psi, data);
    if (!std::isfinite(value))
        throw std::invalid_argument("newton_maximize: initial point outside dom(L)");
    if (objective_trace) objective_trace->push_back(value);

    const std::size_t m = data.size();
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const auto g = gradient(psi, data);
        double gnorm = 0.0;
        for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
        if (gnorm <= cfg.grad_tol) return psi;

        // H d = -g with H negative definite; solve (-H) d = g. Extreme weight
        // ratios can push the factorization past its pivot tolerance; a
        // damped system keeps an ascent direction available there.
        auto h = hessian(psi, data);
        for (double& v : h.diag) v = -v;
        for (double& v : h.off) v = -v;
        std::vector<double> dir;
        double scale = 0.0;
        for (double v : h.diag) scale = std::max(scale, v);
        const double damping_ladder[] = {0.0, 1e-8 * scale, 1e-4 * scale, 1e-1 * scale};
        for (std::size_t attempt = 0;; ++attempt) {
            try {
                auto damped = h.diag;
                for (double& v : damped) v += damping_ladder[attempt];
                dir = solve_spd_tridiagonal(damped, h.off, g);
                break;
            } catch (const ConditioningError&) {
                if (attempt + 1 >= std::size(damping_ladder) || !(scale > 0.0)) throw;
            }
        }

        double slope = 0.0;
        for (std::size_t i = 0; i < m; ++i) slope += g[i] * dir[i];
        // slope = g^T (-H)^{-1} g > 0; an ascent direction.

        // Near the optimum the predicted gain drops below the rounding noise
        // of L itself; the tolerance keeps the full Newton step acceptable
        // there instead of cycling on one-ulp rejections.
        const double noise =
            4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value));
        double step = 1.0;
        LogDensity cand;
        cand.values.resize(m);
        bool accepted = false;
        while (step > 1e-16) {
            for (std::size_t i = 0; i < m; ++i) cand.values[i] = psi.values[i] + step * dir[i];
            const double cv = eval_objective(cand, data);
            if (cv + noise >= value + cfg.armijo_c * step * slope) {
                psi = cand;
                value = cv;
                accepted = true;
                break;
            }
            step *= cfg.backtrack_factor;
        }
        if (!accepted) {
            // No admissible step left; the gradient check next round decides.
            const auto g2 = gradient(psi, data);
            double n2 = 0.0;
            for (double gi : g2) n2 = std::max(n2, std::abs(gi));
            if (n2 <= cfg.grad_tol) return psi;
            throw ConvergenceError("newton_maximize: line search stalled",
                                   psi.values, iter + 1);
        }
        if (objective_trace) objective_trace->push_back(value);
    }
    throw ConvergenceError("newton_maximize: iteration limit reached", psi.values,
                           cfg.max_iter);
}

LogDensity subspace_maximize(const KnotSet& knots, const WeightedData& data,
                             const std::optional<LogDensity>& warm_start,
                             const NewtonConfig& cfg) {
    knots.validate(data.size());
    const WeightedData reduced = reduce_weights(knots, data);

    LogDensity init;
    if (warm_start) {
        if (warm_start->values.size() != data.size())
            throw std::invalid_argument("warm start size mismatch");
        init.values.reserve(knots.size());
        for (std::size_t idx : knots.indices) init.values.push_back(warm_start->values[idx]);
    } else {
        init = uniform_start(reduced);
    }

    const LogDensity sol = newton_maximize(reduced, init, cfg);

    // Interpolate knot values back onto the full grid.
    const auto& x = data.x();
    const auto& I = knots.indices;
    LogDensity full;
    full.values.resize(data.size());
    for (std::size_t s = 0; s + 1 < I.size(); ++s) {
        const double xl = x[I[s]];
        const double xr = x[I[s + 1]];
        for (std::size_t i = I[s]; i < I[s + 1]; ++i) {
            const double t = (x[i] - xl) / (xr - xl);
            full.values[i] = (1.0 - t) * sol.values[s] + t * sol.values[s + 1];
        }
    }
    full.values.back() = sol.values.back();
    return full;
}

}  // namespace lcmle
