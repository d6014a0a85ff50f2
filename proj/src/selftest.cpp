// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/selftest.hpp"

#include "chanest/config.hpp"
#include "chanest/csv.hpp"
#include "chanest/ensemble.hpp"
#include "chanest/ensrf.hpp"
#include "chanest/experiments.hpp"
#include "chanest/metrics.hpp"
#include "chanest/model.hpp"
#include "chanest/reference.hpp"
#include "chanest/sir.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

SelftestCheck check(const std::string& name, const std::function<std::string()>& body)
{
    try {
        const std::string failure = body();
        return {name, failure.empty(), failure};
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

MatrixXd random_members(Index dim, Index n, Rng& rng)
{
    MatrixXd m(dim, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < dim; ++i)
            m(i, j) = rng.normal();
    return m;
}

} // namespace

std::vector<SelftestCheck> run_selftest()
{
    std::vector<SelftestCheck> out;

    out.push_back(check("pilot unitarity", [] {
        for (Index n = 1; n <= 32; ++n) {
            const auto x = make_pilots(n);
            const double err = (x * x.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
            if (err >= 1e-10)
                return "n_tx=" + std::to_string(n) + " error " + num(err);
        }
        return std::string();
    }));

    out.push_back(check("noiseless decorrelation", [] {
        Rng rng(11);
        const VectorXd beta = VectorXd::Constant(6, 0.7);
        const auto g = init_channel(rng, beta, 10);
        const auto obs = observe(g, make_pilots(6), 5.0, 0.0, rng);
        const double err = (obs.y_decorrelated - g).cwiseAbs().maxCoeff();
        return err < 1e-10 ? std::string() : "error " + num(err);
    }));

    out.push_back(check("bessel J0 accuracy", [] {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = 20.0 * i / 99.0;
            worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
        }
        return worst <= 1e-8 ? std::string() : "max error " + num(worst);
    }));

    out.push_back(check("mean identity (EnSRF vs particle-wise)", [] {
        Rng rng(21);
        for (int c = 0; c < 20; ++c) {
            const Index dim = 2 + static_cast<Index>(rng.uniform() * 30);
            const Index n = 2 + static_cast<Index>(rng.uniform() * 30);
            Ensemble e{random_members(dim, n, rng)};
            const double pdb = rng.uniform(-5.0, 10.0);
            const VectorXd y = VectorXd::Random(dim);
            const auto fs = ensemble_stats(e);
            const auto obs = forecast_observations(e, pdb);
            const auto gain = kalman_gain(fs.perturbations, obs.stats.perturbations, rng.uniform(0.1, 2.0));
            const auto sq = ensrf_analysis(fs, obs.stats, gain, y);
            const MatrixXd pu = puensrf_analysis(e.members, obs.members, gain, y);
            const double gap = (VectorXd(pu.rowwise().mean()) - sq.mean).cwiseAbs().maxCoeff();
            if (gap > 1e-12)
                return "gap " + num(gap);
        }
        return std::string();
    }));

    out.push_back(check("square-root covariance identity", [] {
        Rng rng(31);
        for (int c = 0; c < 20; ++c) {
            const Index dim = 2 + static_cast<Index>(rng.uniform() * 30);
            const Index n = 2 + static_cast<Index>(rng.uniform() * 30);
            Ensemble e{random_members(dim, n, rng)};
            const auto fs = ensemble_stats(e);
            const auto obs = forecast_observations(e, rng.uniform(-5.0, 10.0));
            const auto gain = kalman_gain(fs.perturbations, obs.stats.perturbations, rng.uniform(0.1, 2.0));
            const MatrixXd pa = square_root_transform(fs.perturbations, obs.stats.perturbations, gain);
            const MatrixXd target
                = (fs.perturbations - gain.gain * obs.stats.perturbations) * fs.perturbations.transpose();
            const double rel = (pa * pa.transpose() - target).norm() / target.norm();
            if (rel > 1e-8)
                return "relative error " + num(rel);
        }
        return std::string();
    }));

    out.push_back(check("gain equals covariance-form gain", [] {
        Rng rng(41);
        Ensemble e{random_members(4, 12, rng)};
        const MatrixXd h = MatrixXd::Random(4, 4) + 3.0 * MatrixXd::Identity(4, 4);
        const auto fs = ensemble_stats(e);
        const MatrixXd yp = h * fs.perturbations;
        const MatrixXd r = 0.5 * MatrixXd::Identity(4, 4);
        const auto gain = kalman_gain(fs.perturbations, yp, r);
        const MatrixXd p = ensemble_covariance(fs);
        const MatrixXd ref = p * h.transpose() * (h * p * h.transpose() + r).inverse();
        const double err = (gain.gain - ref).cwiseAbs().maxCoeff();
        return err < 1e-8 ? std::string() : "error " + num(err);
    }));

    out.push_back(check("kalman conjugate update", [] {
        KalmanState s{VectorXd::Zero(1), MatrixXd::Identity(1, 1)};
        s = kalman_update(s, VectorXd::Ones(1), 0.0, 1.0);
        const bool ok = std::abs(s.mean[0] - 0.5) < 1e-12 && std::abs(s.cov(0, 0) - 0.5) < 1e-12;
        return ok ? std::string() : "posterior " + num(s.mean[0]) + ", " + num(s.cov(0, 0));
    }));

    out.push_back(check("systematic resampling comb", [] {
        Rng rng(51);
        const auto idx = systematic_resample(VectorXd::Constant(4, 0.25), rng);
        for (Index i = 0; i < 4; ++i)
            if (idx[static_cast<std::size_t>(i)] != i)
                return std::string("uniform weights not reproduced exactly once each");
        const auto deg = systematic_resample(VectorXd::Unit(3, 0), rng);
        for (const auto i : deg)
            if (i != 0)
                return std::string("degenerate weights selected a zero-mass index");
        return std::string();
    }));

    out.push_back(check("metrics against two-pass reference", [] {
        Rng rng(61);
        MatrixXd truth(7, 5), est(7, 5);
        for (Index i = 0; i < 7; ++i)
            for (Index k = 0; k < 5; ++k) {
                truth(i, k) = rng.normal();
                est(i, k) = rng.normal();
            }
        const auto rmse = rmse_series(truth, est);
        const auto var = sample_variance_series(est);
        for (Index k = 0; k < 5; ++k) {
            const double r = std::sqrt((truth.col(k) - est.col(k)).squaredNorm() / 7.0);
            const double mean = est.col(k).mean();
            const double v = (est.col(k).array() - mean).square().sum() / 6.0;
            if (std::abs(r - rmse[static_cast<std::size_t>(k)]) > 1e-12 || std::abs(v - var[static_cast<std::size_t>(k)]) > 1e-12)
                return "column " + std::to_string(k) + " disagrees";
        }
        return std::string();
    }));

    out.push_back(check("seeded determinism", [] {
        SystemConfig c = desk_config();
        c.n_rx = 4;
        c.n_tx = 2;
        c.n_mc_runs = 3;
        c.n_blocks = 4;
        c.n_inner_iters = 3;
        c.n_ensemble = 8;
        c.n_particles = 8;
        c.master_seed = 99;
        const auto a = run_tracking_experiment(c, {1});
        const auto b = run_tracking_experiment(c, {2});
        const bool same = metrics_csv(a.block_series) == metrics_csv(b.block_series)
            && trace_csv(a.trace) == trace_csv(b.trace);
        return same ? std::string() : std::string("outputs differ between identical invocations");
    }));

    return out;
}

} // namespace chanest
