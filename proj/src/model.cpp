// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/model.hpp"

#include "chanest/errors.hpp"

#include <cmath>
#include <numbers>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double doppler_shift(double carrier_hz, double velocity_mps)
{
    if (!(carrier_hz > 0.0) || !(velocity_mps > 0.0))
        throw InvalidParameter("doppler_shift: carrier and velocity must be positive");
    return carrier_hz * velocity_mps / kSpeedOfLight;
}

double bessel_j0(double x)
{
    x = std::abs(x);
    if (x < 8.0) {
        // sum_k (-x^2/4)^k / (k!)^2
        const double q = -0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum) && std::abs(term) < 1e-20)
                break;
        }
        return sum;
    }

    // Hankel expansion with mu = 4 nu^2 = 0, truncated at its smallest term.
    const double z8 = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double c = 1.0;
    double last = 1.0;
    for (int k = 1; k < 100; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = c * (-(odd * odd)) / (k * z8);
        if (std::abs(next) >= last)
            break;
        c = next;
        last = std::abs(c);
        // c_k enters P for even k with sign (-1)^(k/2), Q for odd k with (-1)^((k-1)/2).
        if (k % 2 == 0)
            p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * c;
        else
            q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * c;
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double jakes_alpha(double doppler_hz, double block_duration_s)
{
    if (!(doppler_hz >= 0.0) || !(block_duration_s >= 0.0))
        throw InvalidParameter("jakes_alpha: inputs must be non-negative");
    return bessel_j0(2.0 * std::numbers::pi * doppler_hz * block_duration_s);
}

double channel_alpha(const SystemConfig& config)
{
    if (config.alpha)
        return *config.alpha;
    return jakes_alpha(doppler_shift(config.carrier_hz, config.velocity_mps), config.block_duration_s);
}

LargeScaleFading draw_large_scale(Rng& rng, const SystemConfig& config)
{
    LargeScaleFading out{VectorXd(config.n_tx), VectorXd(config.n_tx)};
    for (Index t = 0; t < config.n_tx; ++t) {
        const double d = rng.uniform(config.min_distance_m, config.max_distance_m);
        const double z = std::pow(10.0, config.shadow_std_db * rng.normal() / 10.0);
        out.distance_m[t] = d;
        out.beta[t] = z / std::pow(d / config.ref_distance_m, config.pathloss_exp);
    }
    return out;
}

MatrixXcd init_channel(Rng& rng, const VectorXd& beta, Index n_rx)
{
    MatrixXcd g(n_rx, beta.size());
    for (Index t = 0; t < beta.size(); ++t)
        for (Index r = 0; r < n_rx; ++r)
            g(r, t) = rng.complex_normal(beta[t]);
    return g;
}

MatrixXcd evolve_channel(const MatrixXcd& g_prev, double alpha, const VectorXd& beta, Rng& rng)
{
    if (std::abs(alpha) > 1.0)
        throw InvalidParameter("evolve_channel: |alpha| must not exceed 1");
    if (g_prev.cols() != beta.size())
        throw StructuralError("evolve_channel: beta length does not match user count");
    const double s = std::sqrt(1.0 - alpha * alpha);
    MatrixXcd g(g_prev.rows(), g_prev.cols());
    for (Index t = 0; t < g.cols(); ++t)
        for (Index r = 0; r < g.rows(); ++r)
            g(r, t) = alpha * g_prev(r, t) + s * rng.complex_normal(beta[t]);
    return g;
}

MatrixXcd make_pilots(Index n_tx)
{
    if (n_tx < 1)
        throw InvalidParameter("make_pilots: n_tx must be >= 1");
    MatrixXcd x(n_tx, n_tx);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (Index j = 0; j < n_tx; ++j) {
        for (Index k = 0; k < n_tx; ++k) {
            // reduce jk mod n first so the phase stays accurate for large n
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n_tx) / n_tx;
            x(j, k) = std::polar(scale, phase);
        }
    }
    return x;
}

ObservationBlock observe(const MatrixXcd& g_block, const MatrixXcd& pilots, double uplink_power_db, double noise_var,
                         Rng& rng)
{
    if (pilots.rows() != pilots.cols() || pilots.rows() != g_block.cols())
        throw StructuralError("observe: pilot matrix must be n_tx x n_tx");
    const double amp = std::sqrt(db_to_linear(uplink_power_db));
    ObservationBlock out;
    out.x_pilot = pilots;
    out.uplink_power_db = uplink_power_db;
    out.y = amp * g_block * pilots;
    for (Index c = 0; c < out.y.cols(); ++c)
        for (Index r = 0; r < out.y.rows(); ++r)
            out.y(r, c) += rng.complex_normal(noise_var);
    out.y_decorrelated = out.y * pilots.adjoint() / amp;
    return out;
}

ChannelTrajectory generate_trajectory(const SystemConfig& config, Rng& rng)
{
    ChannelTrajectory traj;
    traj.alpha = channel_alpha(config);
    traj.beta = draw_large_scale(rng, config).beta;
    traj.g_blocks.reserve(config.n_blocks);
    traj.g_blocks.push_back(init_channel(rng, traj.beta, config.n_rx));
    for (int b = 1; b < config.n_blocks; ++b)
        traj.g_blocks.push_back(evolve_channel(traj.g_blocks.back(), traj.alpha, traj.beta, rng));
    return traj;
}

VectorXd to_real_composite(const Eigen::VectorXcd& z)
{
    VectorXd x(2 * z.size());
    x.head(z.size()) = z.real();
    x.tail(z.size()) = z.imag();
    return x;
}

Eigen::VectorXcd from_real_composite(const VectorXd& x)
{
    if (x.size() % 2 != 0)
        throw StructuralError("from_real_composite: odd length");
    const Index n = x.size() / 2;
    Eigen::VectorXcd z(n);
    z.real() = x.head(n);
    z.imag() = x.tail(n);
    return z;
}

VectorXd user_measurement(const ObservationBlock& block, Index user)
{
    if (user < 0 || user >= block.y.cols())
        throw StructuralError("user_measurement: user index out of range");
    const double amp = std::sqrt(db_to_linear(block.uplink_power_db));
    return to_real_composite(amp * block.y_decorrelated.col(user));
}

} // namespace chanest
