// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/errors.hpp"
#include "chanest/reference.hpp"

#include <cmath>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

KalmanState kalman_prior(Index n_rx, double beta)
{
    return {VectorXd::Zero(2 * n_rx), 0.5 * beta * MatrixXd::Identity(2 * n_rx, 2 * n_rx)};
}

KalmanState kalman_predict(KalmanState state, double alpha, double beta)
{
    if (std::abs(alpha) > 1.0)
        throw InvalidParameter("kalman_predict: |alpha| must not exceed 1");
    state.mean *= alpha;
    state.cov *= alpha * alpha;
    state.cov.diagonal().array() += (1.0 - alpha * alpha) * 0.5 * beta;
    return state;
}

KalmanState kalman_update(KalmanState state, const VectorXd& measurement, double uplink_power_db,
                          double obs_noise_var)
{
    const Index n = state.mean.size();
    if (measurement.size() != n || state.cov.rows() != n || state.cov.cols() != n)
        throw StructuralError("kalman_update: dimension mismatch");
    const double h = std::sqrt(db_to_linear(uplink_power_db));

    MatrixXd s = h * h * state.cov;
    s.diagonal().array() += obs_noise_var;
    Eigen::LLT<MatrixXd> llt(s);
    if (llt.info() != Eigen::Success)
        throw NumericalDegeneracy("kalman_update: innovation covariance is not SPD");
    // K = P H^T S^-1, H = h I
    const MatrixXd k = llt.solve(h * state.cov).transpose();

    state.mean += k * (measurement - h * state.mean);
    MatrixXd a = -h * k;
    a.diagonal().array() += 1.0;
    MatrixXd cov = a * state.cov * a.transpose() + obs_noise_var * k * k.transpose();
    state.cov = 0.5 * (cov + cov.transpose());
    return state;
}

KalmanState kalman_oracle_step(const KalmanState& state, const VectorXd& measurement, double alpha, double beta,
                               double uplink_power_db, double obs_noise_var)
{
    return kalman_update(kalman_predict(state, alpha, beta), measurement, uplink_power_db, obs_noise_var);
}

Eigen::MatrixXcd ls_estimate(const ObservationBlock& block) { return block.y_decorrelated; }

} // namespace chanest
