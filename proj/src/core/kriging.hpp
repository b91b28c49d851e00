#pragma once

#include <Eigen/Dense>
#include <span>

#include "core/point_pattern.hpp"

namespace tpk {

/// Leading eigenpairs capturing the requested fraction of eigenvalue mass.
///
/// Eigenvalues are sorted in decreasing order; the retained rank is the
/// smallest r whose leading positive eigenvalues reach threshold * trace.
/// Negative eigenvalues count toward the trace but are never retained.
struct SpectralTruncation {
    Eigen::VectorXd values;   // kept eigenvalues, decreasing
    Eigen::MatrixXd vectors;  // matching columns
    int rank = 0;
};

SpectralTruncation truncate_spectrum(const Eigen::MatrixXd& symmetric, double threshold);

/// Constrained kriging weights with truncated constraint and covariance
/// spectra, solved through the reduced saddle-point system.
struct KrigingSolution {
    Eigen::VectorXd weights;   // c*, length d
    Eigen::VectorXd lagrange;  // multipliers, length rank_m
    int rank_m = 0;
    int rank_sigma = 0;
    double spe_estimate = 0.0;
    double threshold_m = 0.0;
    double threshold_sigma = 0.0;
    double constraint_residual = 0.0;  // ||Mt c* - m0t|| / (1 + ||m0t||)
    double kkt_residual = 0.0;         // reduced-space stationarity
};

KrigingSolution solve_kriging(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& m,
                              const Eigen::VectorXd& sigma0, const Eigen::VectorXd& m0,
                              double sigma00, double threshold_m, double threshold_sigma);

/// Coefficients of the predicted intensity curve: A c*.
Eigen::VectorXd predict_intensity_coeffs(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& weights);

/// Weighted superposition of the observed count functions of replicate i.
CountFunction predict_counts(const PointPattern& pattern, const Eigen::VectorXd& weights,
                             int replicate);

/// Root average squared error between observed and predicted count
/// function lists (exact step-function integration).
double count_prediction_error(std::span<const CountFunction> observed,
                              std::span<const CountFunction> predicted);

}  // namespace tpk
