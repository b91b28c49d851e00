#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/point_pattern.hpp"

namespace tpk {

/// Parameters of the log-Gaussian intensity model on [0, 1]:
///   Lambda(t, s_j) = exp{ nu(t) + U_j phi(t) },
///   U_j = g(s_j) W + E_j,  W ~ N(0, var_common),  E_j ~ N(0, var_site).
/// The shared factor W induces smooth spatial covariance; the independent
/// site factors E_j add a within-site ridge.
struct LgcpParams {
    double var_common = 0.072;
    double var_site = 0.018;
};

/// nu(t) = sin(pi t) + ln 20, peaked at t = 1/2.
double lgcp_log_mean(double t);

/// phi(t) = sqrt(2) sin(pi t), peaked at t = 1/2.
double lgcp_log_factor(double t);

/// Spatial loading g(s): either 1/(1 + |s|) or identically 1.
enum class SpatialModel { inverse_distance = 1, constant = 2 };
double spatial_factor(SpatialModel model, const Eigen::Vector2d& s);

/// The three benchmark site grids.
enum class GridId { sparse16 = 1, dense16 = 2, dense64 = 3 };
SiteSet grid_sites(GridId id);
Rect grid_region(GridId id);

struct Scenario {
    SiteSet sites;
    Rect region;
    Eigen::Vector2d target{0.0, 0.0};
    SpatialModel model = SpatialModel::constant;

    static Scenario standard(GridId grid, SpatialModel model);
};

/// Draw `replicates` independent days of the multivariate Cox process by
/// thinning against the analytic intensity bound
/// exp{nu(1/2) + max(U_j phi(1/2), 0)}. The per-replicate streams are a
/// pure function of (seed, replicate index). When latent_u is non-null it
/// receives the U vector of every replicate, for oracle checks.
PointPattern simulate_dataset(const Scenario& scenario, const LgcpParams& params,
                              int replicates, std::uint64_t seed,
                              std::vector<Eigen::VectorXd>* latent_u = nullptr);

/// Variance of U at a site and covariance between sites (distinct sites
/// share only the common factor).
double u_variance(const LgcpParams& params, SpatialModel model, const Eigen::Vector2d& s);
double u_covariance(const LgcpParams& params, SpatialModel model, const Eigen::Vector2d& s,
                    const Eigen::Vector2d& s2, bool same_site);

/// Lognormal moment formulas for the model.
double lgcp_mean(double t, double sigma2_u);
double lgcp_cov(double t, double t2, double sigma2_u, double sigma2_u2, double cov_u);

/// Exact integrated moments of a scenario, by dense quadrature of the
/// closed-form mean and covariance functions, plus the best attainable
/// squared prediction error spe0 = sigma00 - sigma0^T Sigma^-1 sigma0.
struct TrueMoments {
    Eigen::MatrixXd m;       // d x d
    Eigen::MatrixXd sigma;   // d x d
    Eigen::VectorXd m0;      // d
    Eigen::VectorXd sigma0;  // d
    double sigma00 = 0.0;
    double spe0 = 0.0;
    Eigen::VectorXd sigma2_u;  // per-site U variances
    double sigma2_u0 = 0.0;    // at the target
};

TrueMoments true_moments(const Scenario& scenario, const LgcpParams& params);

/// True squared prediction error of a weight vector under a scenario's
/// moments: c^T Sigma c - 2 c^T sigma0 + sigma00.
double true_spe(const TrueMoments& truth, const Eigen::VectorXd& weights);

}  // namespace tpk
