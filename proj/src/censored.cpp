#include "lcmle/censored.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <chrono>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "lcmle/errors.hpp"
#include "lcmle/piecewise.hpp"

namespace lcmle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_one(const CensoredObservation& o, std::size_t i) {
    const std::string tag = "observation #" + std::to_string(i);
    if (!std::isfinite(o.left) || o.left < 0.0)
        throw std::domain_error(tag + ": left endpoint must be finite and nonnegative");
    if (std::isnan(o.right) || o.right < o.left)
        throw std::domain_error(tag + ": right endpoint must satisfy right >= left");
    if (o.exact() && !(o.left > 0.0))
        throw std::domain_error(tag + ": exact observations must be positive");
}

// Representative points with pooled weights for one E-step.
struct Discretized {
    std::vector<double> points;
    std::vector<double> weights;
};

// Cells whose conditional mass falls below this floor sit deep in an
// exponentially decaying tail: they carry no information about the fit, but
// the weight ratios they introduce can push the complete-data Newton systems
// past their pivot tolerance.
constexpr double kWeightFloor = 1e-9;

// Core E-step over a log-density on its own nodes, with masses collected on
// the cells of a separate partition grid clipped to the density support.
//
// Two placement schemes. CellMean puts each cell's mass at its conditional
// mean. GridSplit divides the mass between the two cell endpoints so the
// cell mean is preserved; every EM iterate then stays piecewise linear on
// the fixed grid, the weighted sum over the output reproduces the integral
// of any such function against the conditional measure exactly, and the EM
// ascent carries over to the censored log-likelihood without discretization
// leakage.
enum class Placement { CellMean, GridSplit };

Discretized discretize_conditional(const std::vector<double>& nodes,
                                   const std::vector<double>& psi,
                                   const std::vector<CensoredObservation>& obs,
                                   const std::vector<double>& grid,
                                   Placement placement) {
    const double lo_sup = nodes.front();
    const double hi_sup = nodes.back();

    std::vector<double> pts;
    pts.push_back(lo_sup);
    for (double g : grid)
        if (g > lo_sup && g < hi_sup) pts.push_back(g);
    pts.push_back(hi_sup);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t ncells = pts.size() - 1;

    std::vector<double> cell_mass(ncells), cell_mean(ncells);
    for (std::size_t t = 0; t < ncells; ++t) {
        cell_mass[t] = pw::mass_between(nodes, psi, pts[t], pts[t + 1]);
        if (cell_mass[t] > 0.0) {
            const double mom = pw::first_moment_between(nodes, psi, pts[t], pts[t + 1]);
            cell_mean[t] = std::clamp(mom / cell_mass[t], pts[t], pts[t + 1]);
        } else {
            cell_mean[t] = 0.5 * (pts[t] + pts[t + 1]);
        }
    }

    const double wobs = 1.0 / static_cast<double>(obs.size());
    std::vector<double> pooled(ncells, 0.0);
    Discretized out;

    auto emit = [&](double lo, double hi, double mean, double w) {
        if (!(w > kWeightFloor)) return;
        if (placement == Placement::GridSplit) {
            const double lam = (hi - mean) / (hi - lo);
            if (w * lam > kWeightFloor) {
                out.points.push_back(lo);
                out.weights.push_back(w * lam);
            }
            if (w * (1.0 - lam) > kWeightFloor) {
                out.points.push_back(hi);
                out.weights.push_back(w * (1.0 - lam));
            }
        } else {
            out.points.push_back(mean);
            out.weights.push_back(w);
        }
    };

    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& o = obs[i];
        const std::string tag = "observation #" + std::to_string(i);
        if (o.exact()) {
            if (o.left < lo_sup || o.left > hi_sup)
                throw DegenerateDataError(tag + ": exact point outside the support");
            out.points.push_back(o.left);
            out.weights.push_back(wobs);
            continue;
        }
        const double a = std::max(o.left, lo_sup);
        const double b = std::min(o.right, hi_sup);
        if (!(b > a))
            throw DegenerateDataError(tag + ": censoring interval carries no mass");

        // Cells intersecting (a, b); a partial overlap only occurs at the
        // clipped support edges and gets its own representative.
        std::size_t t = static_cast<std::size_t>(
            std::upper_bound(pts.begin(), pts.end(), a) - pts.begin());
        if (t > 0) --t;
        struct Part {
            std::size_t cell;
            double mass;
            double mean;
            bool full;
        };
        std::vector<Part> parts;
        double z = 0.0;
        for (; t < ncells && pts[t] < b; ++t) {
            const double lo = std::max(pts[t], a);
            const double hi = std::min(pts[t + 1], b);
            if (!(hi > lo)) continue;
            if (lo == pts[t] && hi == pts[t + 1]) {
                if (cell_mass[t] > 0.0)
                    parts.push_back({t, cell_mass[t], cell_mean[t], true});
                z += cell_mass[t];
            } else {
                const double pm = pw::mass_between(nodes, psi, lo, hi);
                if (pm > 0.0) {
                    const double mom = pw::first_moment_between(nodes, psi, lo, hi);
                    parts.push_back({t, pm, std::clamp(mom / pm, lo, hi), false});
                }
                z += pm;
            }
        }
        if (!(z > 0.0))
            throw DegenerateDataError(tag + ": censoring interval carries no mass");
        for (const auto& part : parts) {
            const double w = wobs * part.mass / z;
            if (part.full) {
                pooled[part.cell] += w;
            } else {
                emit(std::max(pts[part.cell], a), std::min(pts[part.cell + 1], b),
                     part.mean, w);
            }
        }
    }

    for (std::size_t t = 0; t < ncells; ++t)
        emit(pts[t], pts[t + 1], cell_mean[t], pooled[t]);
    return out;
}

}  // namespace

void validate_observations(const std::vector<CensoredObservation>& obs) {
    if (obs.empty()) throw DegenerateDataError("no observations given");
    for (std::size_t i = 0; i < obs.size(); ++i) validate_one(obs[i], i);

    // The right end of the support must be a point that can carry mass:
    // an exact observation or a finite right endpoint.
    double right_anchor = -kInf;
    std::set<double> anchors;
    for (const auto& o : obs) {
        anchors.insert(o.left);
        if (std::isfinite(o.right)) {
            anchors.insert(o.right);
            right_anchor = std::max(right_anchor, o.right);
        }
    }
    if (!std::isfinite(right_anchor))
        throw DegenerateDataError(
            "all observations are right-censored; the support has no finite mass anchor");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!std::isfinite(obs[i].right) && obs[i].left >= right_anchor)
            throw DegenerateDataError("observation #" + std::to_string(i) +
                                      ": right-censored past every finite mass anchor");
    }
    if (anchors.size() < 2 || *anchors.rbegin() <= *anchors.begin())
        throw DegenerateDataError("observations span fewer than 2 distinct grid points");
}

double censored_loglik(const std::vector<double>& nodes, const LogDensity& psi,
                       const std::vector<CensoredObservation>& obs) {
    if (nodes.size() != psi.values.size() || nodes.size() < 2)
        throw std::invalid_argument("censored_loglik: nodes and log-density sizes differ");
    if (obs.empty()) throw std::invalid_argument("censored_loglik: no observations");

    const double lo_sup = nodes.front();
    const double hi_sup = nodes.back();
    double sum = 0.0;
    for (const auto& o : obs) {
        double term;
        if (o.exact()) {
            term = (o.left < lo_sup || o.left > hi_sup)
                       ? -kInf
                       : pw::interp(nodes, psi.values, o.left);
        } else {
            const double a = std::max(o.left, lo_sup);
            const double b = std::min(o.right, hi_sup);
            const double mass = (b > a) ? pw::mass_between(nodes, psi.values, a, b) : 0.0;
            term = mass > 0.0 ? std::log(mass) : -kInf;
        }
        sum += term;
    }
    return sum / static_cast<double>(obs.size());
}

WeightedData e_step(const LogDensity& psi, const std::vector<CensoredObservation>& obs,
                    const std::vector<double>& grid) {
    if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("e_step: grid must be sorted with at least 2 points");
    if (psi.values.size() != grid.size())
        throw std::invalid_argument("e_step: log-density must live on the grid");
    for (std::size_t i = 0; i < obs.size(); ++i) validate_one(obs[i], i);

    const auto d = discretize_conditional(grid, psi.values, obs, grid, Placement::CellMean);
    return prepare(d.points, d.weights);
}

EmResult em_fit(const std::vector<CensoredObservation>& obs, const EmConfig& cfg) {
    validate_observations(obs);
    if (cfg.grid_refinement < 0)
        throw std::invalid_argument("em_fit: grid_refinement must be nonnegative");

    std::set<double> anchor_set;
    bool truncated = false;
    for (const auto& o : obs) {
        anchor_set.insert(o.left);
        if (std::isfinite(o.right))
            anchor_set.insert(o.right);
        else
            truncated = true;
    }
    const std::vector<double> anchors(anchor_set.begin(), anchor_set.end());

    std::vector<double> grid;
    for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
        grid.push_back(anchors[k]);
        const double step = (anchors[k + 1] - anchors[k]) / (cfg.grid_refinement + 1);
        for (int r = 1; r <= cfg.grid_refinement; ++r) grid.push_back(anchors[k] + r * step);
    }
    grid.push_back(anchors.back());

    EmResult result;
    result.support_truncated = truncated;

    std::vector<double> nodes = grid;
    LogDensity psi{std::vector<double>(grid.size(),
                                       -std::log(anchors.back() - anchors.front()))};
    double loglik = censored_loglik(nodes, psi, obs);
    result.loglik_trace.push_back(loglik);

    const bool any_interval =
        std::any_of(obs.begin(), obs.end(), [](const auto& o) { return !o.exact(); });

    bool have_fit = false;
    for (int iter = 1; iter <= cfg.max_em_iter; ++iter) {
        const auto d = discretize_conditional(nodes, psi.values, obs, grid, Placement::GridSplit);
        const WeightedData wd = prepare(d.points, d.weights);
        if (std::getenv("LCMLE_EM_DEBUG")) {
            double mg = 1e300, mp = 1e300;
            for (std::size_t i = 0; i + 1 < wd.size(); ++i)
                mg = std::min(mg, wd.x()[i + 1] - wd.x()[i]);
            for (double p : wd.p()) mp = std::min(mp, p);
            std::fprintf(stderr,
                         "[em] iter %d m=%zu span=[%.8f, %.8f] mingap=%.3e minw=%.3e ll=%.12f\n",
                         iter, wd.size(), wd.x().front(), wd.x().back(), mg, mp, loglik);
        }
        const auto t0 = std::chrono::steady_clock::now();
        FitResult fr = fit(wd, cfg.active_set);
        if (std::getenv("LCMLE_EM_DEBUG")) {
            const double secs = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            std::fprintf(stderr, "[em]   M-step %.3fs, %d solves, %zu knots\n", secs,
                         fr.n_outer_iter, fr.knots.indices.size());
        }
        const double ll_new = censored_loglik(wd.x(), fr.psi, obs);
        const double gain = ll_new - loglik;

        if (gain < -1e-6)
            throw InternalError("em_fit: censored log-likelihood decreased by " +
                                std::to_string(-gain));
        if (gain < -1e-12) {
            // The discretized surrogate admits sub-tolerance wiggles at the
            // fixed point; keep the previous iterate.
            if (!have_fit)
                throw InternalError("em_fit: first EM step failed to improve");
            result.converged = true;
            break;
        }

        nodes = wd.x();
        psi = fr.psi;
        result.support_points = nodes;
        result.psi = psi;
        result.knots = fr.knots;
        result.diagnostics = fr.diagnostics;
        result.n_iter = iter;
        result.loglik_trace.push_back(ll_new);
        loglik = ll_new;
        have_fit = true;

        if (!any_interval || gain < cfg.loglik_tol) {
            // With exact data only, the E-step no longer depends on psi.
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace lcmle
