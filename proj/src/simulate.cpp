#include "lcmle/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lcmle {

namespace {

// Uniform draw in the open interval (0, 1); 53 significant bits.
double open_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Distribution parse_distribution(const std::string& name) {
    if (name == "gumbel") return Distribution::Gumbel;
    if (name == "normal") return Distribution::Normal;
    if (name == "exponential") return Distribution::Exponential;
    throw std::invalid_argument("unknown distribution: " + name);
}

std::vector<double> simulate(Distribution dist, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    switch (dist) {
        case Distribution::Gumbel:
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(-std::log(-std::log(open_unit(rng))));
            break;
        case Distribution::Normal:
            // Box-Muller; one variate per pair keeps the stream simple.
            for (std::size_t i = 0; i < n; ++i) {
                const double u = open_unit(rng);
                const double v = open_unit(rng);
                out.push_back(std::sqrt(-2.0 * std::log(u)) *
                              std::cos(2.0 * 3.14159265358979323846 * v));
            }
            break;
        case Distribution::Exponential:
            for (std::size_t i = 0; i < n; ++i) out.push_back(-std::log(open_unit(rng)));
            break;
    }
    return out;
}

}  // namespace lcmle
