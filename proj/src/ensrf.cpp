// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/ensrf.hpp"

#include "chanest/errors.hpp"

#include <cmath>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPsdSlack = 1e-8;

double clamped_root(double v)
{
    if (v < -kPsdSlack)
        throw NumericalDegeneracy("square-root argument is not positive semi-definite");
    return std::sqrt(std::max(v, 0.0));
}

} // namespace

GainContext kalman_gain(const MatrixXd& state_perturbations, const MatrixXd& obs_perturbations,
                        const MatrixXd& obs_noise_cov)
{
    if (state_perturbations.cols() != obs_perturbations.cols())
        throw StructuralError("kalman_gain: state and observation ensembles differ in size");
    if (obs_noise_cov.rows() != obs_perturbations.rows() || obs_noise_cov.cols() != obs_perturbations.rows())
        throw StructuralError("kalman_gain: R does not match observation dimension");

    GainContext ctx;
    ctx.obs_noise_cov = obs_noise_cov;
    ctx.innovation_cov = obs_noise_cov;
    ctx.innovation_cov.selfadjointView<Eigen::Lower>().rankUpdate(obs_perturbations);
    ctx.innovation_cov.triangularView<Eigen::StrictlyUpper>() = ctx.innovation_cov.transpose();
    ctx.innovation_chol.compute(ctx.innovation_cov);
    if (ctx.innovation_chol.info() != Eigen::Success)
        throw NumericalDegeneracy("kalman_gain: innovation covariance is not SPD");
    ctx.cross_cov = state_perturbations * obs_perturbations.transpose();
    // K^T = D^-1 (Y~ G~^T) since D is symmetric
    ctx.gain = ctx.innovation_chol.solve(ctx.cross_cov.transpose()).transpose();
    return ctx;
}

GainContext kalman_gain(const MatrixXd& state_perturbations, const MatrixXd& obs_perturbations, double obs_noise_var)
{
    const Index m = obs_perturbations.rows();
    GainContext ctx =
        kalman_gain(state_perturbations, obs_perturbations, MatrixXd(obs_noise_var * MatrixXd::Identity(m, m)));
    ctx.obs_noise_scalar = obs_noise_var;
    return ctx;
}

MatrixXd square_root_transform(const MatrixXd& state_perturbations, const MatrixXd& obs_perturbations,
                               const GainContext& gain)
{
    const Index n = obs_perturbations.cols();
    const Index m = obs_perturbations.rows();
    if (n <= m) {
        // B = L^-1 Y~, so Y~^T D^-1 Y~ = B^T B
        const MatrixXd b = gain.innovation_chol.matrixL().solve(obs_perturbations);
        MatrixXd s = MatrixXd::Identity(n, n) - b.transpose() * b;
        s = 0.5 * (s + s.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(s);
        if (eig.info() != Eigen::Success)
            throw NumericalDegeneracy("square_root_transform: eigendecomposition failed");
        VectorXd root = eig.eigenvalues().unaryExpr(&clamped_root);
        const MatrixXd t = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
        return state_perturbations * t;
    }

    // sqrt(I - B^T B) = I - B^T h(B B^T) B with h(x) = 1 / (1 + sqrt(1 - x)),
    // so only an m x m eigenproblem is needed and T is never formed.
    if (gain.obs_noise_scalar) {
        // With R = r I and B = D^-1/2 Y~, B B^T = I - r D^-1, so the
        // eigenvectors of D suffice: T = I - Y~^T V diag(1 / (l + sqrt(r l))) V^T Y~.
        const double r = *gain.obs_noise_scalar;
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gain.innovation_cov);
        if (eig.info() != Eigen::Success)
            throw NumericalDegeneracy("square_root_transform: eigendecomposition failed");
        VectorXd c(m);
        for (Index j = 0; j < m; ++j) {
            const double l = eig.eigenvalues()[j];
            if (l <= 0.0)
                throw NumericalDegeneracy("square_root_transform: innovation covariance is not SPD");
            c[j] = 1.0 / (l + std::sqrt(r * l));
        }
        const MatrixXd& v = eig.eigenvectors();
        const MatrixXd w = v * c.asDiagonal() * v.transpose();
        return state_perturbations - (gain.cross_cov * w) * obs_perturbations;
    }
    // General R: B = L^-1 Y~ and B B^T = L^-1 (D - R) L^-T.
    const auto lower = gain.innovation_chol.matrixL();
    const MatrixXd half = lower.solve(MatrixXd(gain.innovation_cov - gain.obs_noise_cov));
    MatrixXd bbt = lower.solve(half.transpose());
    bbt = 0.5 * (bbt + bbt.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(bbt);
    if (eig.info() != Eigen::Success)
        throw NumericalDegeneracy("square_root_transform: eigendecomposition failed");
    VectorXd h(m);
    for (Index j = 0; j < m; ++j)
        h[j] = 1.0 / (1.0 + clamped_root(1.0 - eig.eigenvalues()[j]));
    const MatrixXd& u = eig.eigenvectors();
    const MatrixXd w = u * h.asDiagonal() * u.transpose();
    const MatrixXd b = lower.solve(obs_perturbations);
    return state_perturbations - ((state_perturbations * b.transpose()) * w) * b;
}

EnsrfAnalysis ensrf_analysis(const EnsembleStats& forecast, const EnsembleStats& obs, const GainContext& gain,
                             const VectorXd& measurement)
{
    if (measurement.size() != obs.mean.size())
        throw StructuralError("ensrf_analysis: measurement dimension mismatch");
    EnsrfAnalysis out;
    out.mean = forecast.mean + gain.gain * (measurement - obs.mean);
    const MatrixXd pert = square_root_transform(forecast.perturbations, obs.perturbations, gain);
    const double scale = std::sqrt(static_cast<double>(pert.cols() - 1));
    out.members = (scale * pert).colwise() + out.mean;
    return out;
}

MatrixXd puensrf_analysis(const MatrixXd& forecast_members, const MatrixXd& obs_members, const GainContext& gain,
                          const VectorXd& measurement)
{
    if (forecast_members.cols() != obs_members.cols() || measurement.size() != obs_members.rows()
        || gain.gain.rows() != forecast_members.rows() || gain.gain.cols() != obs_members.rows())
        throw StructuralError("puensrf_analysis: dimension mismatch");
    const MatrixXd innovations = (-obs_members).colwise() + measurement;
    return forecast_members + gain.gain * innovations;
}

Ensemble analysis_step(EnsembleVariant variant, const Ensemble& forecast, const VectorXd& measurement,
                       double uplink_power_db, double obs_noise_var)
{
    const EnsembleStats fstats = ensemble_stats(forecast);
    const ObservationEnsemble obs = forecast_observations(forecast, uplink_power_db);
    const GainContext gain = kalman_gain(fstats.perturbations, obs.stats.perturbations, obs_noise_var);

    Ensemble out;
    out.block_index = forecast.block_index;
    out.user_index = forecast.user_index;
    if (variant == EnsembleVariant::ensrf)
        out.members = ensrf_analysis(fstats, obs.stats, gain, measurement).members;
    else
        out.members = puensrf_analysis(forecast.members, obs.members, gain, measurement);
    return out;
}

} // namespace chanest
