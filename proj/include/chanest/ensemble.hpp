// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/rng.hpp"

#include <Eigen/Dense>

namespace chanest {

/// Ensemble of real-composite state vectors, one member per column.
struct Ensemble {
    Eigen::MatrixXd members;
    int block_index = 0;
    int user_index = 0;

    Eigen::Index dim() const { return members.rows(); }
    Eigen::Index size() const { return members.cols(); }
};

struct EnsembleStats {
    Eigen::VectorXd mean;
    /// (member - mean) / sqrt(n - 1), column per member.
    Eigen::MatrixXd perturbations;
};

/// Requires at least two members, all finite.
EnsembleStats ensemble_stats(const Eigen::MatrixXd& members);
inline EnsembleStats ensemble_stats(const Ensemble& e) { return ensemble_stats(e.members); }

/// P = perturbations * perturbations^T.
Eigen::MatrixXd ensemble_covariance(const EnsembleStats& stats);

/// Draws n members from N(0, variance I) in `dim` real dimensions.
Ensemble sample_prior_ensemble(Eigen::Index dim, Eigen::Index n, double variance, Rng& rng);

/// Random-walk jitter g_i += zeta_i, zeta_i ~ N(0, variance I).
Ensemble pseudo_forecast(Ensemble ensemble, double variance, Rng& rng);

/// Member-wise AR(1) step; `beta` is the complex-entry variance, so each
/// real component receives innovation variance (1 - alpha^2) beta / 2.
Ensemble block_forecast(Ensemble ensemble, double alpha, double beta, Rng& rng);

struct ObservationEnsemble {
    Eigen::MatrixXd members;
    EnsembleStats stats;
};

/// Applies the decorrelated measurement map h(g) = sqrt(P_u) g member-wise.
ObservationEnsemble forecast_observations(const Ensemble& forecast, double uplink_power_db);

} // namespace chanest
