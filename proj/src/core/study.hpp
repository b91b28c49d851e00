#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/lgcp.hpp"

namespace tpk {

/// Half-vectorization: lower triangle stacked column by column.
Eigen::VectorXd vech(const Eigen::MatrixXd& m);

/// Relative Monte Carlo error measures against a known truth:
///   bias = |mean(est) - truth| / |truth|
///   sd   = {mean |est - mean(est)|^2}^(1/2) / |truth|
///   rmse = {mean |est - truth|^2}^(1/2) / |truth|
/// so that bias^2 + sd^2 = rmse^2 exactly.
struct ErrorMetric {
    double bias = 0.0;
    double sd = 0.0;
    double rmse = 0.0;
};

ErrorMetric relative_errors(const std::vector<Eigen::VectorXd>& estimates,
                            const Eigen::VectorXd& truth);

/// For the prediction error the attained value never falls below the
/// optimum, so the relative bias doubles as the rmse; the spread is
/// reported as sd.
ErrorMetric spe_errors(const std::vector<double>& attained, double optimum);

struct StudyConfig {
    std::vector<GridId> grids{GridId::sparse16, GridId::dense16, GridId::dense64};
    std::vector<SpatialModel> models{SpatialModel::inverse_distance, SpatialModel::constant};
    std::vector<int> sample_sizes{50, 100, 200, 400};
    int mc_reps = 400;
    std::uint64_t seed = 20240101;
    double threshold_m = 0.9;
    double threshold_sigma = 0.9;
    double xi_lo = 1e-6;
    double xi_hi = 1e6;
    int xi_points = 25;
    int time_order = 4;
    int time_knots = 5;
    int space_order = 4;
    int space_knots = 6;
    int threads = 0;  // 0 = hardware concurrency

    static StudyConfig from_config(const KeyValueConfig& kv);
};

struct CellMetrics {
    ErrorMetric m, m0, sigma, sigma0, spe;
};

struct StudyCellResult {
    GridId grid;
    SpatialModel model;
    int n = 0;
    CellMetrics metrics;
    double spe0 = 0.0;
    double mean_spe = 0.0;
    double min_spe = 0.0;  // smallest attained SPE across replicates
    bool failed = false;
    std::string error;
};

/// Full Monte Carlo protocol: for every (grid, model, n) cell draw mc_reps
/// datasets, run moments -> GCV surface fits -> kriging at the target, and
/// summarize the relative errors against the exact moments. Replicates run
/// in parallel with per-index seeds; a failing cell is marked and the study
/// continues.
std::vector<StudyCellResult> run_study(const StudyConfig& config);

/// Wide table of relative rmse values, one row per (grid, n), one column
/// block per model.
void write_study_table(const std::string& path, const std::vector<StudyCellResult>& results);

/// Long-format detail with bias, sd and rmse per quantity.
void write_study_detail(const std::string& path, const std::vector<StudyCellResult>& results);

std::string grid_name(GridId id);
std::string model_name(SpatialModel model);

}  // namespace tpk
