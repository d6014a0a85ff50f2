// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/ensemble.hpp"
#include "chanest/errors.hpp"
#include "chanest/model.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chanest;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_members(Eigen::Index dim, Eigen::Index n, Rng& rng)
{
    MatrixXd m(dim, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < dim; ++i)
            m(i, j) = rng.uniform(-2.0, 2.0) + 0.3 * static_cast<double>(i);
    return m;
}

// Textbook unbiased sample covariance, member by member.
MatrixXd sample_covariance(const MatrixXd& members)
{
    const Eigen::Index n = members.cols();
    const Eigen::Index d = members.rows();
    VectorXd mean = VectorXd::Zero(d);
    for (Eigen::Index j = 0; j < n; ++j)
        mean += members.col(j);
    mean /= static_cast<double>(n);
    MatrixXd cov = MatrixXd::Zero(d, d);
    for (Eigen::Index j = 0; j < n; ++j) {
        const VectorXd dev = members.col(j) - mean;
        cov += dev * dev.transpose();
    }
    return cov / static_cast<double>(n - 1);
}

} // namespace

TEST(EnsembleStats, IdenticalMembers)
{
    MatrixXd m(1, 2);
    m << 2.0, 2.0;
    const auto s = ensemble_stats(m);
    EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
    EXPECT_DOUBLE_EQ(s.perturbations(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(s.perturbations(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(ensemble_covariance(s)(0, 0), 0.0);
}

TEST(EnsembleStats, TwoMemberHandExample)
{
    MatrixXd m(1, 2);
    m << 1.0, 3.0;
    const auto s = ensemble_stats(m);
    EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
    EXPECT_DOUBLE_EQ(s.perturbations(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(s.perturbations(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(ensemble_covariance(s)(0, 0), 2.0);
}

TEST(EnsembleStats, PerturbationsAreCentred)
{
    Rng rng(4);
    const auto s = ensemble_stats(random_members(8, 16, rng));
    EXPECT_LT(s.perturbations.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(EnsembleStats, CovarianceMatchesSampleCovariance)
{
    Rng rng(6);
    const MatrixXd m = random_members(4, 32, rng);
    const MatrixXd p = ensemble_covariance(ensemble_stats(m));
    EXPECT_LT((p - sample_covariance(m)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(EnsembleStats, Rejections)
{
    EXPECT_THROW(ensemble_stats(MatrixXd::Zero(3, 1)), InvalidEnsemble);
    MatrixXd bad = MatrixXd::Zero(2, 3);
    bad(1, 2) = std::nan("");
    EXPECT_THROW(ensemble_stats(bad), InvalidEnsemble);
}

TEST(PriorEnsemble, Statistics)
{
    Rng rng(8);
    const Ensemble e = sample_prior_ensemble(4, 20000, 0.3, rng);
    EXPECT_EQ(e.dim(), 4);
    EXPECT_EQ(e.size(), 20000);
    const auto s = ensemble_stats(e);
    EXPECT_LT(s.mean.cwiseAbs().maxCoeff(), 4.0 * std::sqrt(0.3 / 20000.0));
    const MatrixXd p = ensemble_covariance(s);
    for (int i = 0; i < 4; ++i)
        EXPECT_NEAR(p(i, i) / 0.3, 1.0, 0.05);
}

TEST(PseudoForecast, ZeroVarianceIsIdentity)
{
    Rng rng(1);
    Ensemble e{random_members(3, 5, rng)};
    const MatrixXd before = e.members;
    EXPECT_EQ(pseudo_forecast(e, 0.0, rng).members, before);
    EXPECT_THROW(pseudo_forecast(e, -1.0, rng), InvalidParameter);
}

TEST(PseudoForecast, AddsZeroMeanJitterOfRequestedVariance)
{
    Rng rng(12);
    Ensemble e{MatrixXd::Constant(2, 50000, 1.5)};
    e.block_index = 7;
    const Ensemble f = pseudo_forecast(e, 0.04, rng);
    EXPECT_EQ(f.block_index, 7);
    const MatrixXd d = f.members.array() - 1.5;
    const double n = static_cast<double>(d.size());
    EXPECT_NEAR(d.sum() / n, 0.0, 4.0 * std::sqrt(0.04 / n));
    EXPECT_NEAR(d.squaredNorm() / n / 0.04, 1.0, 0.03);
}

TEST(BlockForecast, UnitAlphaKeepsMembers)
{
    Rng rng(2);
    Ensemble e{random_members(4, 6, rng)};
    const MatrixXd before = e.members;
    const Ensemble f = block_forecast(e, 1.0, 0.7, rng);
    EXPECT_EQ(f.members, before);
    EXPECT_EQ(f.block_index, 1);
}

TEST(BlockForecast, ZeroAlphaDrawsFreshPrior)
{
    Rng rng(3);
    Ensemble e{MatrixXd::Constant(2, 50000, 9.0)};
    const Ensemble f = block_forecast(e, 0.0, 0.6, rng);
    const double n = static_cast<double>(f.members.size());
    EXPECT_NEAR(f.members.sum() / n, 0.0, 0.02);
    // per real component (1 - 0) * beta / 2
    EXPECT_NEAR(f.members.squaredNorm() / n / 0.3, 1.0, 0.03);
}

TEST(BlockForecast, MeanShrinksByAlpha)
{
    Rng rng(5);
    Ensemble e{MatrixXd::Constant(1, 100000, 2.0)};
    const double alpha = 0.9;
    const double beta = 0.5;
    const Ensemble f = block_forecast(e, alpha, beta, rng);
    const auto s = ensemble_stats(f);
    const double innov = (1.0 - alpha * alpha) * 0.5 * beta;
    EXPECT_NEAR(s.mean[0], alpha * 2.0, 4.0 * std::sqrt(innov / 1e5));
    EXPECT_NEAR(ensemble_covariance(s)(0, 0) / innov, 1.0, 0.03);
    EXPECT_THROW(block_forecast(e, 1.01, beta, rng), InvalidParameter);
}

TEST(ForecastObservations, ScalesByAmplitude)
{
    Rng rng(7);
    Ensemble e{random_members(6, 10, rng)};
    const auto obs = forecast_observations(e, 5.0);
    const double amp = std::sqrt(db_to_linear(5.0));
    EXPECT_LT((obs.members - amp * e.members).cwiseAbs().maxCoeff(), 1e-14);
    const auto fs = ensemble_stats(e);
    EXPECT_LT((obs.stats.mean - amp * fs.mean).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((obs.stats.perturbations - amp * fs.perturbations).cwiseAbs().maxCoeff(), 1e-13);
}
