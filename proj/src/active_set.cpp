#include "lcmle/active_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcmle/jkernel.hpp"

namespace lcmle {

std::vector<double> constraint_values(const LogDensity& psi, const WeightedData& data) {
    if (psi.values.size() != data.size())
        throw std::invalid_argument("log-density and data sizes differ");
    const std::size_t m = data.size();
    const auto& d = data.delta();
    const auto& v = psi.values;
    std::vector<double> c(m >= 3 ? m - 2 : 0);
    for (std::size_t jj = 0; jj + 2 < m; ++jj) {
        const std::size_t jd = jj + 1;  // grid index of the interior point
        c[jj] = (v[jd + 1] - v[jd]) / d[jd] - (v[jd] - v[jd - 1]) / d[jd - 1];
    }
    return c;
}

std::vector<double> directional_derivatives(const LogDensity& psi, const WeightedData& data) {
    if (psi.values.size() != data.size())
        throw std::invalid_argument("log-density and data sizes differ");
    const std::size_t m = data.size();
    const auto& x = data.x();
    const auto& p = data.p();
    const auto& d = data.delta();
    const auto& v = psi.values;

    // H_j = sum_{i<j} p_i (x_i - x_j) - int_{x_1}^{x_j} (x - x_j) exp(psi);
    // both pieces expand into prefix sums over points and cells.
    std::vector<double> h(m >= 3 ? m - 2 : 0);
    double pfx_p = 0.0, pfx_px = 0.0;    // sum p_i, sum p_i x_i over i < j
    double pfx_c0 = 0.0, pfx_c1 = 0.0;   // cell mass and first-moment prefixes
    for (std::size_t jj = 0; jj + 2 < m; ++jj) {
        const std::size_t jd = jj + 1;
        pfx_p += p[jd - 1];
        pfx_px += p[jd - 1] * x[jd - 1];
        const double jl = j10(v[jd - 1], v[jd]);
        const double jr = j01(v[jd - 1], v[jd]);
        pfx_c0 += d[jd - 1] * (jl + jr);
        pfx_c1 += d[jd - 1] * (x[jd - 1] * jl + x[jd] * jr);
        h[jj] = (pfx_px - x[jd] * pfx_p) - (pfx_c1 - x[jd] * pfx_c0);
    }
    return h;
}

std::size_t select_release(const std::vector<double>& h,
                           const std::vector<std::size_t>& candidates, double eps) {
    double best = eps;
    std::size_t pick = h.size();
    for (std::size_t jj : candidates) {
        if (h[jj] > best) {
            best = h[jj];
            pick = jj;
        }
    }
    return pick;
}

double step_to_feasible(const LogDensity& psi, const LogDensity& cand,
                        const WeightedData& data, double eps) {
    const auto cp = constraint_values(psi, data);
    const auto cc = constraint_values(cand, data);
    double t = 2.0;
    for (std::size_t i = 0; i < cc.size(); ++i) {
        if (cc[i] > eps) {
            double ratio = (0.0 - cp[i]) / (cc[i] - cp[i]);
            if (!(ratio > 0.0)) ratio = 0.0;
            t = std::min(t, ratio);
        }
    }
    if (t > 1.0) throw std::invalid_argument("step_to_feasible: candidate is feasible");
    return t;
}

namespace {

struct Outer {
    const WeightedData& data;
    const ActiveSetConfig& cfg;
    int budget;
    FitResult result;
    std::size_t q;                 // number of interior constraints
    std::vector<char> active;      // per interior position

    Outer(const WeightedData& d, const ActiveSetConfig& c)
        : data(d), cfg(c) {
        q = d.size() >= 3 ? d.size() - 2 : 0;
        active.assign(q, 0);
        budget = cfg.max_outer > 0 ? cfg.max_outer
                                   : static_cast<int>(10 * data.size());
    }

    KnotSet knots_of_active() const {
        KnotSet ks;
        ks.indices.push_back(0);
        for (std::size_t jj = 0; jj < q; ++jj)
            if (!active[jj]) ks.indices.push_back(jj + 1);
        ks.indices.push_back(data.size() - 1);
        return ks;
    }

    void refresh_active(const LogDensity& psi) {
        const auto c = constraint_values(psi, data);
        for (std::size_t jj = 0; jj < q; ++jj) active[jj] = c[jj] >= -cfg.eps;
    }

    bool feasible(const LogDensity& psi) const {
        for (double c : constraint_values(psi, data))
            if (c > cfg.eps) return false;
        return true;
    }

    void record(StepKind kind, const LogDensity& psi, double objective,
                std::size_t released = std::numeric_limits<std::size_t>::max()) {
        TraceStep step;
        step.kind = kind;
        step.knots = knots_of_active().indices;
        step.objective = objective;
        step.released = released;
        if (cfg.record_psi) step.psi = psi.values;
        result.trace.push_back(std::move(step));
    }

    LogDensity solve(const std::optional<LogDensity>& warm) {
        if (result.n_outer_iter >= budget) {
            finalize_partial();
            throw NonConvergenceError("active set: subspace-solve budget exhausted",
                                      std::move(result));
        }
        ++result.n_outer_iter;
        LogDensity cand = subspace_maximize(knots_of_active(), data, warm, cfg.newton);
        record(StepKind::Candidate, cand, eval_objective(cand, data));
        return cand;
    }

    // Basic procedure 1: pull an infeasible candidate back onto the feasible
    // set by convex combinations, enlarging the active set each time, until
    // the subspace optimum itself is feasible. Leaves psi at that optimum.
    void restore(LogDensity& psi, LogDensity cand) {
        std::size_t guard = 0;
        while (!feasible(cand)) {
            if (++guard > q + 1)
                throw InternalError("active set: feasibility restoration exceeded its bound");
            const double t = step_to_feasible(psi, cand, data, cfg.eps);
            for (std::size_t i = 0; i < psi.values.size(); ++i)
                psi.values[i] = (1.0 - t) * psi.values[i] + t * cand.values[i];
            refresh_active(psi);
            record(StepKind::Blend, psi, eval_objective(psi, data));
            cand = solve(psi);
        }
        psi = std::move(cand);
        refresh_active(psi);
        record(StepKind::Checkpoint, psi, eval_objective(psi, data));
    }

    void finalize_partial() {
        if (!result.psi.values.empty()) {
            result.objective = eval_objective(result.psi, data);
            result.knots = knots_of_active();
        }
    }
};

}  // namespace

FitResult fit(const WeightedData& data, const ActiveSetConfig& cfg) {
    if (cfg.variant < 1 || cfg.variant > 3)
        throw std::invalid_argument("fit: variant must be 1, 2 or 3");
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("fit: eps must be positive");

    Outer st(data, cfg);
    LogDensity psi;

    if (data.size() == 2) {
        // No concavity constraints; the subspace optimum is the answer.
        psi = newton_maximize(data, cfg.start ? *cfg.start : uniform_start(data), cfg.newton);
        st.result.n_outer_iter = 1;
        st.record(StepKind::Checkpoint, psi, eval_objective(psi, data));
    } else if (cfg.variant == 1) {
        psi = cfg.start ? *cfg.start : subspace_maximize(KnotSet::endpoints(data.size()),
                                                         data, std::nullopt, cfg.newton);
        if (psi.values.size() != data.size())
            throw std::invalid_argument("fit: starting point size mismatch");
        if (!st.feasible(psi))
            throw std::invalid_argument("fit: variant 1 starting point is not feasible");
        st.refresh_active(psi);
        st.record(StepKind::Start, psi, eval_objective(psi, data));
        st.restore(psi, st.solve(psi));
    } else if (cfg.variant == 2) {
        std::fill(st.active.begin(), st.active.end(), 1);
        psi = st.solve(std::nullopt);  // best affine log-density; feasible
        st.refresh_active(psi);
        st.record(StepKind::Checkpoint, psi, eval_objective(psi, data));
    } else {
        psi = st.solve(std::nullopt);  // unconstrained optimum
        std::size_t guard = 0;
        while (!st.feasible(psi)) {
            if (++guard > st.q + 1)
                throw InternalError("active set: constraint growth exceeded its bound");
            st.refresh_active(psi);
            psi = st.solve(psi);
        }
        st.refresh_active(psi);
        st.record(StepKind::Checkpoint, psi, eval_objective(psi, data));
    }

    // Basic procedure 2: release the active constraint with the largest
    // positive directional derivative (smallest index on ties) and
    // re-optimize until no release can improve the objective.
    while (st.q > 0) {
        const auto h = directional_derivatives(psi, data);
        std::vector<std::size_t> candidates;
        for (std::size_t jj = 0; jj < st.q; ++jj)
            if (st.active[jj]) candidates.push_back(jj);
        const std::size_t pick = select_release(h, candidates, cfg.eps);
        if (pick == h.size()) break;
        st.active[pick] = 0;
        st.record(StepKind::Release, psi, eval_objective(psi, data), pick + 1);
        st.restore(psi, st.solve(psi));
    }

    st.refresh_active(psi);
    st.result.psi = psi;
    st.result.knots = st.knots_of_active();
    st.result.objective = eval_objective(psi, data);
    st.result.diagnostics = diagnostics(psi, data);
    return std::move(st.result);
}

}  // namespace lcmle
