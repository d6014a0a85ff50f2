// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace chanest {

/// Derives an independent 64-bit seed from a parent seed and a stream label
/// (SplitMix64 finalizer over the combined words).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

/// Seeded random source. Every stochastic operation in the library takes one
/// of these explicitly; nothing draws from global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Child generator whose stream depends only on (seed(), stream).
    Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
    double normal() { return normal_(engine_); }

    /// Circular-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace chanest
