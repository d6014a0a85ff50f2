// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/sir.hpp"

#include "chanest/ensemble.hpp"
#include "chanest/errors.hpp"
#include "chanest/model.hpp"

#include <cmath>
#include <limits>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

ParticleCloud make_particle_cloud(MatrixXd particles)
{
    ParticleCloud cloud;
    const Index n = particles.cols();
    if (n < 1)
        throw InvalidParameter("make_particle_cloud: need at least one particle");
    cloud.particles = std::move(particles);
    cloud.weights = VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    cloud.effective_sample_size = static_cast<double>(n);
    return cloud;
}

double effective_sample_size(const VectorXd& weights) { return 1.0 / weights.squaredNorm(); }

ParticleCloud sir_weight_update(ParticleCloud cloud, const VectorXd& measurement, double uplink_power_db,
                                double obs_noise_var)
{
    if (measurement.size() != cloud.particles.rows())
        throw StructuralError("sir_weight_update: measurement dimension mismatch");
    if (!(obs_noise_var > 0.0))
        throw InvalidParameter("sir_weight_update: noise variance must be positive");
    const double amp = std::sqrt(db_to_linear(uplink_power_db));
    const Index n = cloud.size();

    VectorXd logw(n);
    for (Index i = 0; i < n; ++i) {
        const double sq = (measurement - amp * cloud.particles.col(i)).squaredNorm();
        logw[i] = std::log(cloud.weights[i]) - sq / (2.0 * obs_noise_var);
    }
    const double top = logw.maxCoeff();
    double total = 0.0;
    if (std::isfinite(top)) {
        for (Index i = 0; i < n; ++i) {
            logw[i] = std::exp(logw[i] - top);
            total += logw[i];
        }
    }
    cloud.degenerate = !(total > 0.0) || !std::isfinite(total);
    if (cloud.degenerate)
        cloud.weights.setConstant(1.0 / static_cast<double>(n));
    else
        cloud.weights = logw / total;
    cloud.effective_sample_size = effective_sample_size(cloud.weights);
    return cloud;
}

std::vector<Index> systematic_resample(const VectorXd& weights, double offset)
{
    const Index n = weights.size();
    if (n < 1)
        throw InvalidWeights("systematic_resample: empty weight vector");
    if ((weights.array() < 0.0).any() || !weights.allFinite())
        throw InvalidWeights("systematic_resample: negative or non-finite weight");
    if (std::abs(weights.sum() - 1.0) > 1e-8)
        throw InvalidWeights("systematic_resample: weights are not normalized");
    if (!(offset >= 0.0 && offset < 1.0))
        throw InvalidParameter("systematic_resample: offset must lie in [0, 1)");

    std::vector<Index> idx(static_cast<std::size_t>(n));
    double cumulative = weights[0];
    Index i = 0;
    for (Index j = 0; j < n; ++j) {
        const double point = (offset + static_cast<double>(j)) / static_cast<double>(n);
        while (point >= cumulative && i < n - 1) {
            ++i;
            cumulative += weights[i];
        }
        idx[static_cast<std::size_t>(j)] = i;
    }
    return idx;
}

std::vector<Index> systematic_resample(const VectorXd& weights, Rng& rng)
{
    return systematic_resample(weights, rng.uniform());
}

ParticleCloud sir_step(ParticleCloud cloud, const VectorXd& measurement, const SirStepParams& params, Rng& rng)
{
    Ensemble moved{std::move(cloud.particles)};
    if (params.transition)
        moved = block_forecast(std::move(moved), params.transition->alpha, params.transition->beta, rng);
    moved = pseudo_forecast(std::move(moved), params.jitter_var, rng);
    cloud.particles = std::move(moved.members);

    cloud = sir_weight_update(std::move(cloud), measurement, params.uplink_power_db, params.obs_noise_var);

    const Index n = cloud.size();
    cloud.resampled = cloud.effective_sample_size < 0.5 * static_cast<double>(n);
    if (cloud.resampled) {
        const auto idx = systematic_resample(cloud.weights, rng);
        MatrixXd next(cloud.particles.rows(), n);
        for (Index j = 0; j < n; ++j)
            next.col(j) = cloud.particles.col(idx[static_cast<std::size_t>(j)]);
        cloud.particles = std::move(next);
        cloud.weights.setConstant(1.0 / static_cast<double>(n));
        cloud.effective_sample_size = static_cast<double>(n);
    }
    return cloud;
}

} // namespace chanest
