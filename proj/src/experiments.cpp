// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/experiments.hpp"

#include "chanest/ensemble.hpp"
#include "chanest/ensrf.hpp"
#include "chanest/errors.hpp"
#include "chanest/model.hpp"
#include "chanest/reference.hpp"
#include "chanest/sir.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace chanest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Stream labels for Rng::split; changing them changes every result.
enum Stream : std::uint64_t {
    kTruthStream = 1,
    kNoiseStream = 2,
    kSirStream = 3,
    kEnsrfStream = 4,
    kPuensrfStream = 5,
};

template <typename Body>
void parallel_runs(int n_runs, unsigned n_threads, Body&& body)
{
    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_runs));
    if (n_threads <= 1) {
        for (int m = 0; m < n_runs; ++m)
            body(m);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (int m = next++; m < n_runs; m = next++) {
                try {
                    body(m);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
}

/// One user's filtering problem: its measurements and everything the filters
/// are told about the model.
struct UserProblem {
    std::vector<VectorXd> measurements;
    Index n_rx = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double power_db = 0.0;
    double obs_var = 0.5;
    int inner = 1;
    /// Measurement noise variance used by each inner analysis; the block's
    /// variance scaled by `inner` when tempering, so the inner loop as a
    /// whole assimilates the measurement once.
    double inner_obs_var = 0.5;
    double jitter_scale = 0.0;
    double anneal = 1.0;
    int n_ensemble = 2;
    int n_particles = 1;
    bool keep_iterations = false;
    bool check_shared = false;

    double jitter(int k) const { return jitter_scale * beta * std::pow(anneal, k); }
};

struct FilterRun {
    std::vector<VectorXd> block_means;
    std::vector<VectorXd> block_variances; ///< marginal variances per component
    std::vector<VectorXd> iteration_means; ///< block 1 only: prior, then after each inner iteration
    double shared_gap = 0.0;
};

FilterRun run_ensemble_filter(EnsembleVariant variant, const UserProblem& p, Rng rng)
{
    FilterRun out;
    Ensemble e = sample_prior_ensemble(2 * p.n_rx, p.n_ensemble, 0.5 * p.beta, rng);
    if (p.keep_iterations)
        out.iteration_means.push_back(e.members.rowwise().mean());

    for (std::size_t tau = 0; tau < p.measurements.size(); ++tau) {
        const VectorXd& y = p.measurements[tau];
        for (int k = 0; k < p.inner; ++k) {
            if (tau > 0 && k == 0)
                e = block_forecast(std::move(e), p.alpha, p.beta, rng);
            e = pseudo_forecast(std::move(e), p.jitter(k), rng);

            if (p.check_shared) {
                const EnsembleStats fstats = ensemble_stats(e);
                const ObservationEnsemble obs = forecast_observations(e, p.power_db);
                const GainContext gain = kalman_gain(fstats.perturbations, obs.stats.perturbations, p.inner_obs_var);
                const EnsrfAnalysis sq = ensrf_analysis(fstats, obs.stats, gain, y);
                const MatrixXd pu = puensrf_analysis(e.members, obs.members, gain, y);
                out.shared_gap = std::max(out.shared_gap, (pu.rowwise().mean() - sq.mean).cwiseAbs().maxCoeff());
                e.members = variant == EnsembleVariant::ensrf ? sq.members : pu;
            } else {
                e = analysis_step(variant, e, y, p.power_db, p.inner_obs_var);
            }
            if (p.keep_iterations && tau == 0)
                out.iteration_means.push_back(e.members.rowwise().mean());
        }
        const EnsembleStats s = ensemble_stats(e);
        out.block_means.push_back(s.mean);
        out.block_variances.push_back(s.perturbations.rowwise().squaredNorm());
    }
    return out;
}

FilterRun run_sir_filter(const UserProblem& p, Rng rng)
{
    FilterRun out;
    ParticleCloud cloud = make_particle_cloud(sample_prior_ensemble(2 * p.n_rx, p.n_particles, 0.5 * p.beta, rng).members);
    if (p.keep_iterations)
        out.iteration_means.push_back(cloud.mean());

    for (std::size_t tau = 0; tau < p.measurements.size(); ++tau) {
        for (int k = 0; k < p.inner; ++k) {
            SirStepParams params;
            params.uplink_power_db = p.power_db;
            params.obs_noise_var = p.inner_obs_var;
            params.jitter_var = p.jitter(k);
            if (tau > 0 && k == 0)
                params.transition = ArTransition{p.alpha, p.beta};
            cloud = sir_step(std::move(cloud), p.measurements[tau], params, rng);
            if (p.keep_iterations && tau == 0)
                out.iteration_means.push_back(cloud.mean());
        }
        const VectorXd mean = cloud.mean();
        const MatrixXd centred = cloud.particles.colwise() - mean;
        out.block_means.push_back(mean);
        out.block_variances.push_back(centred.array().square().matrix() * cloud.weights);
    }
    return out;
}

FilterRun run_oracle_filter(const UserProblem& p)
{
    FilterRun out;
    KalmanState s = kalman_prior(p.n_rx, p.beta);
    if (p.keep_iterations)
        out.iteration_means.push_back(s.mean);
    for (std::size_t tau = 0; tau < p.measurements.size(); ++tau) {
        if (tau > 0)
            s = kalman_predict(std::move(s), p.alpha, p.beta);
        s = kalman_update(std::move(s), p.measurements[tau], p.power_db, p.obs_var);
        if (p.keep_iterations && tau == 0)
            out.iteration_means.insert(out.iteration_means.end(), static_cast<std::size_t>(p.inner), s.mean);
        out.block_means.push_back(s.mean);
        out.block_variances.push_back(s.cov.diagonal());
    }
    return out;
}

/// Truth, observations and the tracked user's filtering problem for one run.
struct RunSetup {
    std::uint64_t seed = 0;
    ChannelTrajectory trajectory;
    std::vector<ObservationBlock> observations;
    UserProblem problem;
};

RunSetup make_run(const SystemConfig& config, int run_index, int user)
{
    RunSetup run;
    run.seed = config.master_seed + static_cast<std::uint64_t>(run_index);
    const Rng base(run.seed);
    Rng truth_rng = Rng(config.shared_trajectory ? config.master_seed : run.seed).split(kTruthStream);
    Rng noise_rng = base.split(kNoiseStream);

    run.trajectory = generate_trajectory(config, truth_rng);
    const Eigen::MatrixXcd pilots = make_pilots(config.n_tx);
    for (const auto& g : run.trajectory.g_blocks)
        run.observations.push_back(observe(g, pilots, config.uplink_power_db, config.noise_var, noise_rng));

    UserProblem& p = run.problem;
    for (const auto& obs : run.observations)
        p.measurements.push_back(user_measurement(obs, user));
    p.n_rx = config.n_rx;
    p.alpha = run.trajectory.alpha;
    p.beta = run.trajectory.beta[user];
    p.power_db = config.uplink_power_db;
    p.obs_var = measurement_noise_var(config.noise_var);
    p.inner = config.n_inner_iters;
    p.inner_obs_var = config.temper_inner_updates ? p.obs_var * p.inner : p.obs_var;
    p.jitter_scale = config.pseudo_noise_scale;
    p.anneal = config.anneal_factor;
    p.n_ensemble = config.n_ensemble;
    p.n_particles = config.n_particles;
    return run;
}

struct AllFilters {
    FilterRun sir;
    FilterRun ensrf;
    FilterRun puensrf;
    FilterRun oracle;
};

AllFilters run_all_filters(const RunSetup& run)
{
    const Rng base(run.seed);
    AllFilters f;
    f.sir = run_sir_filter(run.problem, base.split(kSirStream));
    f.ensrf = run_ensemble_filter(EnsembleVariant::ensrf, run.problem, base.split(kEnsrfStream));
    f.puensrf = run_ensemble_filter(EnsembleVariant::puensrf, run.problem, base.split(kPuensrfStream));
    f.oracle = run_oracle_filter(run.problem);
    return f;
}

std::vector<double> component(const std::vector<VectorXd>& means, Index i)
{
    std::vector<double> out;
    out.reserve(means.size());
    for (const auto& m : means)
        out.push_back(m[i]);
    return out;
}

std::vector<MetricsSeries> aggregate(const std::vector<RunRecord>& records, Axis axis, int first_index, int rx, int tx)
{
    const Index runs = static_cast<Index>(records.size());
    const Index len = static_cast<Index>(records.front().truth.size());
    MatrixXd truth(runs, len);
    for (Index m = 0; m < runs; ++m)
        truth.row(m) = Eigen::Map<const Eigen::RowVectorXd>(records[static_cast<std::size_t>(m)].truth.data(), len);

    std::vector<MetricsSeries> out;
    for (std::size_t a = 0; a < std::size(kAllAlgorithms); ++a) {
        MatrixXd est(runs, len);
        for (Index m = 0; m < runs; ++m)
            est.row(m) = Eigen::Map<const Eigen::RowVectorXd>(records[static_cast<std::size_t>(m)].estimates[a].data(), len);
        MetricsSeries s;
        s.algorithm = algorithm_label(kAllAlgorithms[a]);
        s.axis = axis;
        s.coeff_rx = rx;
        s.coeff_tx = tx;
        s.part = Part::real;
        for (Index k = 0; k < len; ++k)
            s.index.push_back(first_index + static_cast<int>(k));
        s.rmse = rmse_series(truth, est);
        s.sample_variance = sample_variance_series(est);
        out.push_back(std::move(s));
    }
    return out;
}

void require_runs(const SystemConfig& config)
{
    if (config.n_mc_runs < 2)
        throw InvalidParameter("sample variance across runs needs n_mc_runs >= 2");
}

} // namespace

std::string algorithm_label(Algorithm a)
{
    switch (a) {
    case Algorithm::sir: return "sir";
    case Algorithm::ensrf: return "ensrf";
    case Algorithm::puensrf: return "puensrf";
    case Algorithm::oracle: return "oracle";
    case Algorithm::ls: return "ls";
    }
    return "unknown";
}

const MetricsSeries& find_series(const std::vector<MetricsSeries>& set, const std::string& algorithm)
{
    for (const auto& s : set)
        if (s.algorithm == algorithm)
            return s;
    throw InvalidParameter("no series for algorithm '" + algorithm + "'");
}

TrackingResult run_tracking_experiment(const SystemConfig& config, const RunOptions& options)
{
    validate(config);
    require_runs(config);
    const int user = config.track_tx - 1;
    const Index r = config.track_rx - 1;
    const std::size_t n_alg = std::size(kAllAlgorithms);

    std::vector<RunRecord> blocks(static_cast<std::size_t>(config.n_mc_runs));
    std::vector<RunRecord> iters(blocks.size());
    std::vector<TraceRow> trace;
    double alpha = 0.0;

    parallel_runs(config.n_mc_runs, options.n_threads, [&](int m) {
        RunSetup run = make_run(config, m, user);
        run.problem.keep_iterations = true;
        const AllFilters f = run_all_filters(run);

        RunRecord& rec = blocks[static_cast<std::size_t>(m)];
        rec.run_index = m;
        rec.seed = run.seed;
        rec.estimates.resize(n_alg);
        for (const auto& g : run.trajectory.g_blocks)
            rec.truth.push_back(g(r, user).real());
        rec.estimates[0] = component(f.sir.block_means, r);
        rec.estimates[1] = component(f.ensrf.block_means, r);
        rec.estimates[2] = component(f.puensrf.block_means, r);
        rec.estimates[3] = component(f.oracle.block_means, r);
        for (const auto& obs : run.observations)
            rec.estimates[4].push_back(ls_estimate(obs)(r, user).real());

        RunRecord& it = iters[static_cast<std::size_t>(m)];
        it.run_index = m;
        it.seed = run.seed;
        it.truth.assign(f.ensrf.iteration_means.size(), rec.truth.front());
        it.estimates = {component(f.sir.iteration_means, r), component(f.ensrf.iteration_means, r),
                        component(f.puensrf.iteration_means, r), component(f.oracle.iteration_means, r),
                        std::vector<double>(it.truth.size(), rec.estimates[4].front())};

        if (m == 0) {
            alpha = run.trajectory.alpha;
            for (std::size_t b = 0; b < rec.truth.size(); ++b)
                trace.push_back({static_cast<int>(b) + 1, rec.truth[b], rec.estimates[0][b], rec.estimates[1][b],
                                 rec.estimates[2][b]});
        }
    });

    TrackingResult result;
    result.alpha = alpha;
    result.trace = std::move(trace);
    result.block_series = aggregate(blocks, Axis::block, 1, config.track_rx, config.track_tx);
    result.iteration_series = aggregate(iters, Axis::iteration, 0, config.track_rx, config.track_tx);
    return result;
}

ConvergenceResult run_convergence_experiment(const SystemConfig& config, const RunOptions& options)
{
    validate(config);
    require_runs(config);
    SystemConfig one_block = config;
    one_block.n_blocks = 1;
    const int user = config.conv_tx - 1;
    const Index r = config.conv_rx - 1;

    std::vector<RunRecord> iters(static_cast<std::size_t>(config.n_mc_runs));
    parallel_runs(config.n_mc_runs, options.n_threads, [&](int m) {
        RunSetup run = make_run(one_block, m, user);
        run.problem.keep_iterations = true;
        const AllFilters f = run_all_filters(run);

        RunRecord& it = iters[static_cast<std::size_t>(m)];
        it.run_index = m;
        it.seed = run.seed;
        const double truth = run.trajectory.g_blocks.front()(r, user).real();
        const double ls = ls_estimate(run.observations.front())(r, user).real();
        it.truth.assign(f.ensrf.iteration_means.size(), truth);
        it.estimates = {component(f.sir.iteration_means, r), component(f.ensrf.iteration_means, r),
                        component(f.puensrf.iteration_means, r), component(f.oracle.iteration_means, r),
                        std::vector<double>(it.truth.size(), ls)};
    });

    ConvergenceResult result;
    result.coeff_rx = config.conv_rx;
    result.coeff_tx = config.conv_tx;
    result.sample_truth = iters.front().truth.front();
    result.series = aggregate(iters, Axis::iteration, 0, config.conv_rx, config.conv_tx);
    return result;
}

OracleReport run_oracle_comparison(const SystemConfig& config, const RunOptions& options)
{
    validate(config);
    SystemConfig bayes = config;
    bayes.n_inner_iters = 1;
    bayes.pseudo_noise_scale = 0.0;
    const int user = config.track_tx - 1;
    const auto n_runs = static_cast<std::size_t>(config.n_mc_runs);
    const auto n_blocks = static_cast<std::size_t>(config.n_blocks);

    struct RunDeviation {
        // [filter][block]: summed squared deviations over components
        std::vector<std::vector<double>> abs_sq;
        std::vector<std::vector<double>> norm_sq;
        std::vector<std::vector<double>> filter_var;
        std::vector<double> oracle_var;
        double oracle_std_sum = 0.0;
        double shared_gap = 0.0;
    };
    constexpr std::size_t kFilters = 4; // sir, ensrf, puensrf, ls
    std::vector<RunDeviation> per_run(n_runs);

    parallel_runs(config.n_mc_runs, options.n_threads, [&](int m) {
        RunSetup run = make_run(bayes, m, user);
        run.problem.check_shared = true;
        const AllFilters f = run_all_filters(run);

        FilterRun ls;
        const double ls_var = measurement_noise_var(config.noise_var) / db_to_linear(config.uplink_power_db);
        for (const auto& obs : run.observations) {
            ls.block_means.push_back(to_real_composite(ls_estimate(obs).col(user)));
            ls.block_variances.push_back(VectorXd::Constant(2 * config.n_rx, ls_var));
        }

        RunDeviation& d = per_run[static_cast<std::size_t>(m)];
        d.shared_gap = std::max(f.ensrf.shared_gap, f.puensrf.shared_gap);
        const FilterRun* filters[kFilters] = {&f.sir, &f.ensrf, &f.puensrf, &ls};
        d.abs_sq.assign(kFilters, std::vector<double>(n_blocks));
        d.norm_sq = d.abs_sq;
        d.filter_var = d.abs_sq;
        d.oracle_var.resize(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const VectorXd& om = f.oracle.block_means[b];
            const VectorXd& ov = f.oracle.block_variances[b];
            d.oracle_var[b] = ov.sum();
            d.oracle_std_sum += ov.cwiseSqrt().sum();
            for (std::size_t a = 0; a < kFilters; ++a) {
                const VectorXd diff = filters[a]->block_means[b] - om;
                d.abs_sq[a][b] = diff.squaredNorm();
                d.norm_sq[a][b] = diff.cwiseQuotient(ov.cwiseSqrt()).squaredNorm();
                d.filter_var[a][b] = filters[a]->block_variances[b].sum();
            }
        }
    });

    const double per_block_count = static_cast<double>(n_runs) * 2.0 * config.n_rx;
    OracleReport report;
    const char* labels[kFilters] = {"sir", "ensrf", "puensrf", "ls"};
    for (std::size_t a = 0; a < kFilters; ++a) {
        OracleSeries s;
        s.algorithm = labels[a];
        double total = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            double abs_sq = 0.0, norm_sq = 0.0, fvar = 0.0, ovar = 0.0;
            for (const auto& d : per_run) {
                abs_sq += d.abs_sq[a][b];
                norm_sq += d.norm_sq[a][b];
                fvar += d.filter_var[a][b];
                ovar += d.oracle_var[b];
            }
            s.rms_deviation.push_back(std::sqrt(abs_sq / per_block_count));
            s.normalized_rms.push_back(std::sqrt(norm_sq / per_block_count));
            s.spread_ratio.push_back(fvar / ovar);
            total += norm_sq;
        }
        s.overall_normalized_rms = std::sqrt(total / (per_block_count * static_cast<double>(n_blocks)));
        report.series.push_back(std::move(s));
    }
    double std_sum = 0.0;
    for (const auto& d : per_run) {
        report.shared_forecast_max_gap = std::max(report.shared_forecast_max_gap, d.shared_gap);
        std_sum += d.oracle_std_sum;
    }
    report.mean_oracle_std = std_sum / (per_block_count * static_cast<double>(n_blocks));
    return report;
}

int first_drop_index(const std::vector<double>& series, double factor, int window)
{
    if (series.empty())
        throw InvalidParameter("first_drop_index: empty series");
    const int n = static_cast<int>(series.size());
    const int half = std::max(window, 1) / 2;
    std::vector<double> smooth(series.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j)
            sum += series[static_cast<std::size_t>(j)];
        smooth[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
    }
    const double threshold = factor * smooth.back();
    for (int i = 0; i < n; ++i)
        if (smooth[static_cast<std::size_t>(i)] < threshold)
            return i;
    return n - 1;
}

} // namespace chanest
