#include "core/study.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "core/errors.hpp"
#include "core/kriging.hpp"
#include "core/moments.hpp"
#include "core/rng.hpp"
#include "core/surface.hpp"

namespace tpk {

Eigen::VectorXd vech(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw invalid_input("vech: matrix is not square");
    const Eigen::Index d = m.rows();
    Eigen::VectorXd out(d * (d + 1) / 2);
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = j; i < d; ++i) out[at++] = m(i, j);
    return out;
}

ErrorMetric relative_errors(const std::vector<Eigen::VectorXd>& estimates,
                            const Eigen::VectorXd& truth) {
    if (estimates.size() < 2)
        throw invalid_input("relative_errors: need at least two Monte Carlo replicates");
    const double scale = truth.norm();
    if (!(scale > 0.0)) throw invalid_input("relative_errors: zero true norm");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(truth.size());
    for (const auto& est : estimates) {
        if (est.size() != truth.size())
            throw invalid_input("relative_errors: estimate size mismatch");
        mean += est;
    }
    mean /= static_cast<double>(estimates.size());
    double var = 0.0, mse = 0.0;
    for (const auto& est : estimates) {
        var += (est - mean).squaredNorm();
        mse += (est - truth).squaredNorm();
    }
    var /= static_cast<double>(estimates.size());
    mse /= static_cast<double>(estimates.size());
    ErrorMetric metric;
    metric.bias = (mean - truth).norm() / scale;
    metric.sd = std::sqrt(var) / scale;
    metric.rmse = std::sqrt(mse) / scale;
    return metric;
}

ErrorMetric spe_errors(const std::vector<double>& attained, double optimum) {
    if (attained.size() < 2)
        throw invalid_input("spe_errors: need at least two Monte Carlo replicates");
    if (!(optimum > 0.0)) throw invalid_input("spe_errors: optimum must be positive");
    double mean = 0.0;
    for (double v : attained) mean += v;
    mean /= static_cast<double>(attained.size());
    double var = 0.0;
    for (double v : attained) var += (v - mean) * (v - mean);
    var /= static_cast<double>(attained.size());
    ErrorMetric metric;
    metric.bias = (mean - optimum) / optimum;
    metric.rmse = metric.bias;
    metric.sd = std::sqrt(var) / optimum;
    return metric;
}

StudyConfig StudyConfig::from_config(const KeyValueConfig& kv) {
    StudyConfig config;
    if (kv.has("grids")) {
        config.grids.clear();
        for (const std::string& g : kv.get_string_list("grids")) {
            if (g == "i" || g == "1")
                config.grids.push_back(GridId::sparse16);
            else if (g == "ii" || g == "2")
                config.grids.push_back(GridId::dense16);
            else if (g == "iii" || g == "3")
                config.grids.push_back(GridId::dense64);
            else
                throw invalid_input("study config: unknown grid '" + g + "'");
        }
    }
    if (kv.has("models")) {
        config.models.clear();
        for (long m : kv.get_int_list("models")) {
            if (m == 1)
                config.models.push_back(SpatialModel::inverse_distance);
            else if (m == 2)
                config.models.push_back(SpatialModel::constant);
            else
                throw invalid_input("study config: unknown model " + std::to_string(m));
        }
    }
    if (kv.has("n")) {
        config.sample_sizes.clear();
        for (long n : kv.get_int_list("n")) {
            if (n < 1) throw invalid_input("study config: sample sizes must be positive");
            config.sample_sizes.push_back(static_cast<int>(n));
        }
    }
    config.mc_reps = static_cast<int>(kv.get_int("mc_reps", config.mc_reps));
    config.seed = kv.get_seed("seed", config.seed);
    config.threshold_m = kv.get_double("threshold_m", config.threshold_m);
    config.threshold_sigma = kv.get_double("threshold_sigma", config.threshold_sigma);
    config.xi_lo = kv.get_double("xi_min", config.xi_lo);
    config.xi_hi = kv.get_double("xi_max", config.xi_hi);
    config.xi_points = static_cast<int>(kv.get_int("xi_points", config.xi_points));
    config.time_order = static_cast<int>(kv.get_int("time_order", config.time_order));
    config.time_knots = static_cast<int>(kv.get_int("time_knots", config.time_knots));
    config.space_order = static_cast<int>(kv.get_int("space_order", config.space_order));
    config.space_knots = static_cast<int>(kv.get_int("space_knots", config.space_knots));
    config.threads = static_cast<int>(kv.get_int("threads", config.threads));
    if (config.mc_reps < 2) throw invalid_input("study config: mc_reps must be >= 2");
    if (!(config.threshold_m > 0.0 && config.threshold_m <= 1.0) ||
        !(config.threshold_sigma > 0.0 && config.threshold_sigma <= 1.0))
        throw invalid_input("study config: thresholds must lie in (0, 1]");
    return config;
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct RepOutcome {
    Eigen::VectorXd vech_m, vech_sigma, m0, sigma0;
    double spe = 0.0;
    bool ok = false;
    std::string error;
};

}  // namespace

std::vector<StudyCellResult> run_study(const StudyConfig& config) {
    const LgcpParams params;
    const std::vector<double> xi_grid = log_grid(config.xi_lo, config.xi_hi, config.xi_points);
    const int threads = resolve_threads(config.threads);

    std::vector<StudyCellResult> results;
    int cell_index = -1;
    for (GridId grid : config.grids) {
        for (SpatialModel model : config.models) {
            const Scenario scenario = Scenario::standard(grid, model);
            const TrueMoments truth = true_moments(scenario, params);
            const SplineBasis tbasis(TimeDomain(0.0, 1.0), config.time_order,
                                     config.time_knots);
            const Eigen::MatrixXd gram = tbasis.gram();
            const SpatialBasis sbasis(scenario.region, config.space_order, config.space_knots);
            const Eigen::MatrixXd gamma = spatial_design(sbasis, scenario.sites);
            const Eigen::MatrixXd penalty = sbasis.roughness();
            MeanSurfaceSolver mean_solver(gamma, penalty);
            CovSurfaceSolver cov_solver(gamma, penalty);
            for (double xi : xi_grid) {
                mean_solver.prepare(xi);
                cov_solver.prepare(xi);
            }
            const Eigen::VectorXd vech_m_true = vech(truth.m);
            const Eigen::VectorXd vech_sigma_true = vech(truth.sigma);

            for (int n : config.sample_sizes) {
                ++cell_index;
                StudyCellResult cell;
                cell.grid = grid;
                cell.model = model;
                cell.n = n;
                cell.spe0 = truth.spe0;

                std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.mc_reps));
                parallel_for(config.mc_reps, threads, [&](int rep) {
                    RepOutcome& out = outcomes[static_cast<std::size_t>(rep)];
                    try {
                        const std::uint64_t rep_seed =
                            stream_seed(config.seed, static_cast<std::uint64_t>(cell_index),
                                        static_cast<std::uint64_t>(rep));
                        const PointPattern pattern =
                            simulate_dataset(scenario, params, n, rep_seed);
                        const MomentEstimates est = estimate_moments(pattern, tbasis);
                        const GcvResult gcv_b = mean_solver.select_xi(est.A, xi_grid);
                        const Eigen::MatrixXd b_hat = mean_solver.fit(est.A, gcv_b.xi);
                        const GcvResult gcv_c = cov_solver.select_xi(est.Sigma, xi_grid);
                        const Eigen::MatrixXd c_hat = cov_solver.solve(est.Sigma, gcv_c.xi);
                        const Eigen::VectorXd mu0 =
                            mean_coeffs_at(b_hat, sbasis, scenario.target);
                        const Eigen::VectorXd m0 = m0_vector(est.A, gram, mu0);
                        const CovAtSite at = cov_at(c_hat, gamma, sbasis, scenario.target);
                        const KrigingSolution sol =
                            solve_kriging(est.Sigma, est.M, at.sigma0, m0, at.sigma00,
                                          config.threshold_m, config.threshold_sigma);
                        out.vech_m = vech(est.M);
                        out.vech_sigma = vech(est.Sigma);
                        out.m0 = m0;
                        out.sigma0 = at.sigma0;
                        out.spe = true_spe(truth, sol.weights);
                        out.ok = true;
                    } catch (const std::exception& e) {
                        out.error = e.what();
                    }
                });

                std::vector<Eigen::VectorXd> ms, sigmas, m0s, sigma0s;
                std::vector<double> spes;
                for (const RepOutcome& out : outcomes) {
                    if (!out.ok) {
                        cell.failed = true;
                        if (cell.error.empty()) cell.error = out.error;
                        continue;
                    }
                    ms.push_back(out.vech_m);
                    sigmas.push_back(out.vech_sigma);
                    m0s.push_back(out.m0);
                    sigma0s.push_back(out.sigma0);
                    spes.push_back(out.spe);
                }
                if (!cell.failed) {
                    cell.metrics.m = relative_errors(ms, vech_m_true);
                    cell.metrics.sigma = relative_errors(sigmas, vech_sigma_true);
                    cell.metrics.m0 = relative_errors(m0s, truth.m0);
                    cell.metrics.sigma0 = relative_errors(sigma0s, truth.sigma0);
                    cell.metrics.spe = spe_errors(spes, truth.spe0);
                    double mean_spe = 0.0;
                    double min_spe = spes.front();
                    for (double v : spes) {
                        mean_spe += v;
                        min_spe = std::min(min_spe, v);
                    }
                    cell.mean_spe = mean_spe / static_cast<double>(spes.size());
                    cell.min_spe = min_spe;
                }
                results.push_back(std::move(cell));
            }
        }
    }
    return results;
}

std::string grid_name(GridId id) {
    switch (id) {
        case GridId::sparse16:
            return "i";
        case GridId::dense16:
            return "ii";
        case GridId::dense64:
            return "iii";
    }
    return "?";
}

std::string model_name(SpatialModel model) {
    return model == SpatialModel::inverse_distance ? "1" : "2";
}

void write_study_table(const std::string& path, const std::vector<StudyCellResult>& results) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    out.precision(6);
    // Collect the model set in declaration order.
    std::vector<std::string> models;
    for (const auto& r : results) {
        const std::string m = model_name(r.model);
        bool seen = false;
        for (const auto& s : models) seen = seen || s == m;
        if (!seen) models.push_back(m);
    }
    out << "grid,n";
    for (const auto& m : models)
        out << ",model" << m << "_rmse_M,model" << m << "_rmse_m0,model" << m
            << "_rmse_Sigma,model" << m << "_rmse_sigma0,model" << m << "_rmse_SPE";
    out << '\n';
    // Rows keyed by (grid, n) in first-appearance order.
    std::vector<std::pair<std::string, int>> rows;
    for (const auto& r : results) {
        const std::pair<std::string, int> key{grid_name(r.grid), r.n};
        bool seen = false;
        for (const auto& k : rows) seen = seen || k == key;
        if (!seen) rows.push_back(key);
    }
    for (const auto& [g, n] : rows) {
        out << g << ',' << n;
        for (const auto& m : models) {
            const StudyCellResult* cell = nullptr;
            for (const auto& r : results)
                if (grid_name(r.grid) == g && r.n == n && model_name(r.model) == m) cell = &r;
            if (!cell || cell->failed)
                out << ",nan,nan,nan,nan,nan";
            else
                out << ',' << cell->metrics.m.rmse << ',' << cell->metrics.m0.rmse << ','
                    << cell->metrics.sigma.rmse << ',' << cell->metrics.sigma0.rmse << ','
                    << cell->metrics.spe.rmse;
        }
        out << '\n';
    }
}

void write_study_detail(const std::string& path, const std::vector<StudyCellResult>& results) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    out.precision(10);
    out << "grid,model,n,quantity,bias,sd,rmse,failed,error\n";
    for (const auto& r : results) {
        const auto row = [&](const std::string& name, const ErrorMetric& m) {
            out << grid_name(r.grid) << ',' << model_name(r.model) << ',' << r.n << ',' << name
                << ',' << m.bias << ',' << m.sd << ',' << m.rmse << ',' << (r.failed ? 1 : 0)
                << ',' << (r.failed ? r.error : "") << '\n';
        };
        row("M", r.metrics.m);
        row("m0", r.metrics.m0);
        row("Sigma", r.metrics.sigma);
        row("sigma0", r.metrics.sigma0);
        row("SPE", r.metrics.spe);
    }
}

}  // namespace tpk
