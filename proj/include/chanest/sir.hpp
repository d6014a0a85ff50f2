// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/rng.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace chanest {

/// Weighted particle set for the bootstrap (SIR) filter.
struct ParticleCloud {
    Eigen::MatrixXd particles; ///< real-composite state per column
    Eigen::VectorXd weights;   ///< normalized
    double effective_sample_size = 0.0;
    /// Set when a weight update underflowed everywhere and the weights were
    /// reset to uniform.
    bool degenerate = false;
    /// Set when the last sir_step resampled.
    bool resampled = false;

    Eigen::Index size() const { return particles.cols(); }
    Eigen::VectorXd mean() const { return particles * weights; }
};

/// Cloud over the given particles with uniform weights.
ParticleCloud make_particle_cloud(Eigen::MatrixXd particles);

/// 1 / sum(w^2).
double effective_sample_size(const Eigen::VectorXd& weights);

/// Reweights by the Gaussian likelihood of y = sqrt(P_u) g + noise,
/// obs_noise_var per real component. Log-domain with max subtraction.
ParticleCloud sir_weight_update(ParticleCloud cloud, const Eigen::VectorXd& measurement, double uplink_power_db,
                                double obs_noise_var);

/// Systematic resampling: one uniform offset u in [0, 1), comb points
/// (u + j) / n. Weights must be non-negative and sum to 1 within 1e-8.
std::vector<Eigen::Index> systematic_resample(const Eigen::VectorXd& weights, Rng& rng);

/// Same comb for an explicit offset u in [0, 1).
std::vector<Eigen::Index> systematic_resample(const Eigen::VectorXd& weights, double offset);

struct ArTransition {
    double alpha = 1.0;
    double beta = 0.0; ///< complex-entry innovation variance
};

struct SirStepParams {
    double uplink_power_db = 0.0;
    double obs_noise_var = 1.0;             ///< per real component
    std::optional<ArTransition> transition; ///< across-block move, if any
    double jitter_var = 0.0;                ///< within-block random walk
};

/// Propagate (AR(1) transition and/or jitter), weight, and resample when
/// the effective sample size drops below half the particle count.
ParticleCloud sir_step(ParticleCloud cloud, const Eigen::VectorXd& measurement, const SirStepParams& params, Rng& rng);

} // namespace chanest
