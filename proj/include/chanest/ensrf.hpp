// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/ensemble.hpp"

#include <Eigen/Dense>

#include <optional>

namespace chanest {

struct GainContext {
    Eigen::MatrixXd gain;            ///< K = G~ Y~^T D^-1
    Eigen::MatrixXd innovation_cov;  ///< D = Y~ Y~^T + R
    Eigen::MatrixXd obs_noise_cov;   ///< R
    Eigen::MatrixXd cross_cov;       ///< G~ Y~^T
    std::optional<double> obs_noise_scalar; ///< set when R = r I
    Eigen::LLT<Eigen::MatrixXd> innovation_chol;
};

/// Ensemble Kalman gain. D is factored by Cholesky and K obtained by a
/// solve; a D that is not SPD raises NumericalDegeneracy.
GainContext kalman_gain(const Eigen::MatrixXd& state_perturbations, const Eigen::MatrixXd& obs_perturbations,
                        const Eigen::MatrixXd& obs_noise_cov);

/// Diagonal-R convenience overload.
GainContext kalman_gain(const Eigen::MatrixXd& state_perturbations, const Eigen::MatrixXd& obs_perturbations,
                        double obs_noise_var);

/// Symmetric square root of I - Y~^T D^-1 Y~ applied to the right of
/// `state_perturbations`, i.e. G~ T. Works in whichever of the ensemble or
/// observation space is smaller.
Eigen::MatrixXd square_root_transform(const Eigen::MatrixXd& state_perturbations,
                                      const Eigen::MatrixXd& obs_perturbations, const GainContext& gain);

struct EnsrfAnalysis {
    Eigen::VectorXd mean;
    Eigen::MatrixXd members;
};

/// Deterministic square-root analysis: mean g + K (y - y_bar), perturbations
/// G~ T, members rebuilt around the analysis mean.
EnsrfAnalysis ensrf_analysis(const EnsembleStats& forecast, const EnsembleStats& obs, const GainContext& gain,
                             const Eigen::VectorXd& measurement);

/// Particle-wise update g_i + K (y - y_i) with the shared gain.
Eigen::MatrixXd puensrf_analysis(const Eigen::MatrixXd& forecast_members, const Eigen::MatrixXd& obs_members,
                                 const GainContext& gain, const Eigen::VectorXd& measurement);

enum class EnsembleVariant { ensrf, puensrf };

/// Full analysis cycle on an already-forecast ensemble: observation
/// ensemble, gain, and the variant's update. `obs_noise_var` is the
/// per-real-component measurement noise variance.
Ensemble analysis_step(EnsembleVariant variant, const Ensemble& forecast, const Eigen::VectorXd& measurement,
                       double uplink_power_db, double obs_noise_var);

} // namespace chanest
