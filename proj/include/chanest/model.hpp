// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/config.hpp"
#include "chanest/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace chanest {

inline constexpr double kSpeedOfLight = 2.998e8;

double db_to_linear(double db);

/// f_D = f_c v / c. Both inputs must be positive.
double doppler_shift(double carrier_hz, double velocity_mps);

/// Zeroth-order Bessel function of the first kind: power series for |x| < 8,
/// Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// Block-to-block correlation of the Jakes spectrum, J0(2 pi f_D T_B).
double jakes_alpha(double doppler_hz, double block_duration_s);

/// Temporal correlation for a config: the explicit `alpha` if given,
/// otherwise the Jakes value for its carrier, speed and block duration.
double channel_alpha(const SystemConfig& config);

struct LargeScaleFading {
    Eigen::VectorXd beta;       ///< linear power gain per user
    Eigen::VectorXd distance_m; ///< drawn user distance
};

/// beta_t = z_t / (d_t / d_ref)^gamma with z_t log-normal (sigma in dB) and
/// d_t uniform on [min_distance_m, max_distance_m].
LargeScaleFading draw_large_scale(Rng& rng, const SystemConfig& config);

/// First-block channel: entries CN(0, beta_t) in column t.
Eigen::MatrixXcd init_channel(Rng& rng, const Eigen::VectorXd& beta, Eigen::Index n_rx);

/// One AR(1) step: alpha * g + sqrt(1 - alpha^2) * innovation, innovation
/// CN(0, beta_t) in column t. Stationary variance stays beta_t.
Eigen::MatrixXcd evolve_channel(const Eigen::MatrixXcd& g_prev, double alpha, const Eigen::VectorXd& beta, Rng& rng);

/// Unitary n-point DFT matrix, entries exp(-2 pi i jk / n) / sqrt(n).
Eigen::MatrixXcd make_pilots(Eigen::Index n_tx);

struct ObservationBlock {
    Eigen::MatrixXcd y;              ///< sqrt(P_u) G X + N
    Eigen::MatrixXcd x_pilot;
    Eigen::MatrixXcd y_decorrelated; ///< Y X^H / sqrt(P_u) = G + N X^H / sqrt(P_u)
    double uplink_power_db = 0.0;
};

ObservationBlock observe(const Eigen::MatrixXcd& g_block, const Eigen::MatrixXcd& pilots, double uplink_power_db,
                         double noise_var, Rng& rng);

struct ChannelTrajectory {
    Eigen::VectorXd beta;
    std::vector<Eigen::MatrixXcd> g_blocks;
    double alpha = 1.0;
};

/// Draws beta, the first block and n_blocks - 1 AR(1) steps.
ChannelTrajectory generate_trajectory(const SystemConfig& config, Rng& rng);

/// Stacks real parts over imaginary parts.
Eigen::VectorXd to_real_composite(const Eigen::VectorXcd& z);
Eigen::VectorXcd from_real_composite(const Eigen::VectorXd& x);

/// Filter measurement for user `user` (0-based): column of Y X^H in
/// real-composite form, i.e. sqrt(P_u) g_t plus white noise of variance
/// noise_var / 2 per real component.
Eigen::VectorXd user_measurement(const ObservationBlock& block, Eigen::Index user);

/// Per-real-component variance of user_measurement noise.
inline double measurement_noise_var(double noise_var) { return 0.5 * noise_var; }

} // namespace chanest
