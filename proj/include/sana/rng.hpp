#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace sana {

// The standard distributions are implementation-defined, so event logs
// would differ between standard libraries. Everything stochastic goes
// through these helpers instead.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n). n must be > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Uniform real in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

bool bernoulli(Rng& rng, double p);

/// Poisson sample. Knuth's product method for small means, normal
/// approximation with continuity correction above 30.
std::uint64_t poisson(Rng& rng, double mean);

/// Sample an index with probability proportional to `weights[i]`.
/// Weights must be non-negative with a positive sum.
std::size_t weighted_index(Rng& rng, std::span<const double> weights);

/// Derive an independent stream seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace sana
