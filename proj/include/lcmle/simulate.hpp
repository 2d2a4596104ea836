#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lcmle {

enum class Distribution { Gumbel, Normal, Exponential };

/// Accepts "gumbel", "normal" or "exponential"; throws std::invalid_argument
/// otherwise.
Distribution parse_distribution(const std::string& name);

/// n draws with the standard parameters of the chosen family. Fully
/// deterministic in the seed: the generator and all transforms are fixed,
/// with no reliance on platform distribution implementations.
std::vector<double> simulate(Distribution dist, std::size_t n, std::uint64_t seed);

}  // namespace lcmle
