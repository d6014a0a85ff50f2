// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/ensemble.hpp"

#include "chanest/errors.hpp"
#include "chanest/model.hpp"

#include <cmath>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;

EnsembleStats ensemble_stats(const MatrixXd& members)
{
    if (members.cols() < 2)
        throw InvalidEnsemble("ensemble_stats: need at least 2 members");
    if (!members.allFinite())
        throw InvalidEnsemble("ensemble_stats: non-finite member entries");
    EnsembleStats s;
    s.mean = members.rowwise().mean();
    s.perturbations = (members.colwise() - s.mean) / std::sqrt(static_cast<double>(members.cols() - 1));
    return s;
}

MatrixXd ensemble_covariance(const EnsembleStats& stats)
{
    return stats.perturbations * stats.perturbations.transpose();
}

Ensemble sample_prior_ensemble(Index dim, Index n, double variance, Rng& rng)
{
    Ensemble e;
    e.members.resize(dim, n);
    const double s = std::sqrt(variance);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < dim; ++i)
            e.members(i, j) = s * rng.normal();
    return e;
}

Ensemble pseudo_forecast(Ensemble ensemble, double variance, Rng& rng)
{
    if (variance < 0.0)
        throw InvalidParameter("pseudo_forecast: variance must be non-negative");
    if (variance == 0.0)
        return ensemble;
    const double s = std::sqrt(variance);
    for (Index j = 0; j < ensemble.members.cols(); ++j)
        for (Index i = 0; i < ensemble.members.rows(); ++i)
            ensemble.members(i, j) += s * rng.normal();
    return ensemble;
}

Ensemble block_forecast(Ensemble ensemble, double alpha, double beta, Rng& rng)
{
    if (std::abs(alpha) > 1.0)
        throw InvalidParameter("block_forecast: |alpha| must not exceed 1");
    ensemble.members *= alpha;
    const double s = std::sqrt((1.0 - alpha * alpha) * 0.5 * beta);
    if (s > 0.0) {
        for (Index j = 0; j < ensemble.members.cols(); ++j)
            for (Index i = 0; i < ensemble.members.rows(); ++i)
                ensemble.members(i, j) += s * rng.normal();
    }
    ++ensemble.block_index;
    return ensemble;
}

ObservationEnsemble forecast_observations(const Ensemble& forecast, double uplink_power_db)
{
    const double amp = std::sqrt(db_to_linear(uplink_power_db));
    ObservationEnsemble out;
    out.members = amp * forecast.members;
    out.stats = ensemble_stats(out.members);
    return out;
}

} // namespace chanest
