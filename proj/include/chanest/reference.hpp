// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/model.hpp"

#include <Eigen/Dense>

namespace chanest {

/// Exact Gaussian posterior for one user's real-composite channel vector.
struct KalmanState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Stationary prior N(0, beta/2 I) in 2 * n_rx real dimensions.
KalmanState kalman_prior(Eigen::Index n_rx, double beta);

/// mean <- alpha mean, cov <- alpha^2 cov + (1 - alpha^2) beta/2 I.
KalmanState kalman_predict(KalmanState state, double alpha, double beta);

/// Update with H = sqrt(P_u) I and R = obs_noise_var I (per real component),
/// Joseph-form covariance.
KalmanState kalman_update(KalmanState state, const Eigen::VectorXd& measurement, double uplink_power_db,
                          double obs_noise_var);

/// Predict followed by update.
KalmanState kalman_oracle_step(const KalmanState& state, const Eigen::VectorXd& measurement, double alpha, double beta,
                               double uplink_power_db, double obs_noise_var);

/// Least-squares channel estimate under unitary pilots: Y X^H / sqrt(P_u).
Eigen::MatrixXcd ls_estimate(const ObservationBlock& block);

} // namespace chanest
