#include "lcmle/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcmle/jkernel.hpp"
#include "lcmle/piecewise.hpp"

namespace lcmle {

namespace pw {

namespace {

std::size_t cell_of(const std::vector<double>& nodes, double r) {
    // Largest k with nodes[k] <= r, capped at the last cell.
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    if (k > 0) --k;
    if (k + 1 >= nodes.size()) k = nodes.size() - 2;
    return k;
}

}  // namespace

double interp(const std::vector<double>& nodes, const std::vector<double>& values, double r) {
    const std::size_t k = cell_of(nodes, r);
    const double d = nodes[k + 1] - nodes[k];
    const double t = (r - nodes[k]) / d;
    return (1.0 - t) * values[k] + t * values[k + 1];
}

double mass_between(const std::vector<double>& nodes, const std::vector<double>& values,
                    double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    double total = 0.0;
    std::size_t k = cell_of(nodes, lo);
    double a = lo;
    double fa = interp(nodes, values, lo);
    while (a < hi) {
        const double cell_end = nodes[k + 1];
        const double b = std::min(hi, cell_end);
        const double fb = (b == cell_end) ? values[k + 1] : interp(nodes, values, b);
        total += (b - a) * j(fa, fb);
        a = b;
        fa = fb;
        ++k;
        if (k + 1 >= nodes.size()) break;
    }
    return total;
}

double first_moment_between(const std::vector<double>& nodes, const std::vector<double>& values,
                            double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    double total = 0.0;
    std::size_t k = cell_of(nodes, lo);
    double a = lo;
    double fa = interp(nodes, values, lo);
    while (a < hi) {
        const double cell_end = nodes[k + 1];
        const double b = std::min(hi, cell_end);
        const double fb = (b == cell_end) ? values[k + 1] : interp(nodes, values, b);
        total += (b - a) * (a * j10(fa, fb) + b * j01(fa, fb));
        a = b;
        fa = fb;
        ++k;
        if (k + 1 >= nodes.size()) break;
    }
    return total;
}

std::vector<double> cdf_at_nodes(const std::vector<double>& nodes,
                                 const std::vector<double>& values) {
    std::vector<double> F(nodes.size(), 0.0);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        F[k + 1] = F[k] + (nodes[k + 1] - nodes[k]) * j(values[k], values[k + 1]);
    return F;
}

}  // namespace pw

namespace {

void check_pair(const LogDensity& psi, const WeightedData& data) {
    if (psi.values.size() != data.size())
        throw std::invalid_argument("log-density and data sizes differ");
    for (double v : psi.values)
        if (!std::isfinite(v)) throw std::domain_error("log-density values must be finite");
}

}  // namespace

double eval_objective(const LogDensity& psi, const WeightedData& data) {
    check_pair(psi, data);
    const auto& x = data.x();
    const auto& p = data.p();
    const auto& d = data.delta();
    const auto& v = psi.values;
    double lin = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) lin += p[i] * v[i];
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) mass += d[k] * j(v[k], v[k + 1]);
    return lin - mass;
}

std::vector<double> gradient(const LogDensity& psi, const WeightedData& data) {
    check_pair(psi, data);
    const std::size_t m = data.size();
    const auto& p = data.p();
    const auto& d = data.delta();
    const auto& v = psi.values;
    std::vector<double> g(m);
    for (std::size_t k = 0; k < m; ++k) {
        double mass_term = 0.0;
        if (k > 0) mass_term += d[k - 1] * j01(v[k - 1], v[k]);
        if (k + 1 < m) mass_term += d[k] * j10(v[k], v[k + 1]);
        g[k] = p[k] - mass_term;
    }
    return g;
}

SymTridiagonal hessian(const LogDensity& psi, const WeightedData& data) {
    check_pair(psi, data);
    const std::size_t m = data.size();
    const auto& d = data.delta();
    const auto& v = psi.values;
    SymTridiagonal h;
    h.diag.assign(m, 0.0);
    h.off.assign(m - 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double s = 0.0;
        if (k > 0) s += d[k - 1] * j02(v[k - 1], v[k]);
        if (k + 1 < m) s += d[k] * j20(v[k], v[k + 1]);
        h.diag[k] = -s;
    }
    for (std::size_t k = 0; k + 1 < m; ++k) h.off[k] = -d[k] * j11(v[k], v[k + 1]);
    return h;
}

double log_density_at(const LogDensity& psi, const WeightedData& data, double r) {
    check_pair(psi, data);
    const auto& x = data.x();
    if (r < x.front() || r > x.back()) return -std::numeric_limits<double>::infinity();
    return pw::interp(x, psi.values, r);
}

double cdf(const LogDensity& psi, const WeightedData& data, double r) {
    check_pair(psi, data);
    const auto& x = data.x();
    if (r < x.front() || r > x.back())
        throw std::domain_error("cdf argument outside the support");
    return pw::mass_between(x, psi.values, x.front(), r);
}

std::vector<double> cdf_at_points(const LogDensity& psi, const WeightedData& data) {
    check_pair(psi, data);
    return pw::cdf_at_nodes(data.x(), psi.values);
}

std::pair<double, double> mean_and_second_moment(const LogDensity& psi,
                                                 const WeightedData& data, double a) {
    check_pair(psi, data);
    const auto& x = data.x();
    const auto& d = data.delta();
    const auto& v = psi.values;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double jl = j10(v[k], v[k + 1]);
        const double jr = j01(v[k], v[k + 1]);
        const double cl = x[k] - a;
        const double cr = x[k + 1] - a;
        m1 += d[k] * (cl * jl + cr * jr);
        m2 += d[k] * (cl * cl * jl + cr * cr * jr) - d[k] * d[k] * d[k] * j11(v[k], v[k + 1]);
    }
    return {m1, m2};
}

double mean_integral_of_F(const LogDensity& psi, const WeightedData& data, std::size_t k) {
    check_pair(psi, data);
    if (k + 1 >= data.size()) throw std::out_of_range("cell index out of range");
    const auto F = cdf_at_points(psi, data);
    return F[k] + data.delta()[k] * j10(psi.values[k], psi.values[k + 1]);
}

DiagnosticReport diagnostics(const LogDensity& psi, const WeightedData& data) {
    check_pair(psi, data);
    const std::size_t m = data.size();
    const auto& x = data.x();
    const auto& p = data.p();
    const auto& d = data.delta();
    const auto& v = psi.values;
    const auto F = cdf_at_points(psi, data);

    DiagnosticReport rep;
    rep.total_mass_residual = F[m - 1] - 1.0;
    rep.interval_residuals.resize(m - 1);
    double psum = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        psum += p[k];
        rep.interval_residuals[k] = F[k] + d[k] * j10(v[k], v[k + 1]) - psum;
    }

    double wx = 0.0;
    double wxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        wx += p[i] * x[i];
        wxx += p[i] * x[i] * x[i];
    }
    const auto [m1, m2] = mean_and_second_moment(psi, data, 0.0);
    rep.mean_residual = wx - m1;
    double j11sum = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k)
        j11sum += d[k] * d[k] * d[k] * j11(v[k], v[k + 1]);
    rep.second_moment_residual = (wxx - j11sum) - m2;
    rep.objective = eval_objective(psi, data);
    return rep;
}

}  // namespace lcmle
