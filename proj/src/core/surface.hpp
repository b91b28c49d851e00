#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

#include "core/point_pattern.hpp"
#include "core/tensor_basis.hpp"

namespace tpk {

/// Design matrix with rows gamma(s_j)^T.
Eigen::MatrixXd spatial_design(const SpatialBasis& basis, const SiteSet& sites);

struct GcvPoint {
    double xi = 0.0;
    double df = 0.0;
    double gcv = 0.0;
    bool excluded = false;  // degenerate denominator, not eligible as minimizer
};

struct GcvResult {
    double xi = 0.0;
    double df = 0.0;
    double gcv = 0.0;
    std::vector<GcvPoint> curve;
};

/// Log-spaced smoothing-parameter grid (inclusive endpoints).
std::vector<double> log_grid(double lo, double hi, int points);

/// Penalized least-squares fit of the mean surface coefficients:
/// B = A Gamma (Gamma^T Gamma + xi J)^-1, one ridge problem per basis row.
/// Caches per-xi factorizations so GCV sweeps and repeated fits are cheap.
class MeanSurfaceSolver {
public:
    MeanSurfaceSolver(Eigen::MatrixXd gamma, Eigen::MatrixXd penalty);

    int sites() const { return static_cast<int>(gamma_.rows()); }
    int basis_dimension() const { return static_cast<int>(gamma_.cols()); }
    const Eigen::MatrixXd& design() const { return gamma_; }

    void prepare(double xi);

    /// p x q coefficient matrix for the given penalty weight.
    Eigen::MatrixXd fit(const Eigen::MatrixXd& A, double xi) const;

    /// Effective degrees of freedom tr(H) of the linear smoother.
    double df(double xi) const;

    /// Diagonal of the hat matrix (site leverages).
    Eigen::VectorXd leverages(double xi) const;

    /// Generalized cross-validation score at one xi.
    double gcv(const Eigen::MatrixXd& A, double xi) const;

    /// Exact leave-one-site-out score via the linear-smoother shortcut.
    double loo_cv(const Eigen::MatrixXd& A, double xi) const;

    /// Grid minimizer of GCV; ties broken toward the larger (smoother) xi.
    GcvResult select_xi(const Eigen::MatrixXd& A, std::span<const double> xi_grid) const;

private:
    struct XiCache {
        Eigen::LDLT<Eigen::MatrixXd> system;  // Gamma^T Gamma + xi J
        double df = 0.0;
        Eigen::VectorXd leverage;
    };
    XiCache build(double xi) const;
    const XiCache* find(double xi) const;

    Eigen::MatrixXd gamma_;
    Eigen::MatrixXd penalty_;
    Eigen::MatrixXd gtg_;
    std::map<double, XiCache> cache_;
};

Eigen::MatrixXd fit_mean_surface(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gamma,
                                 const Eigen::MatrixXd& penalty, double xi);
GcvResult gcv_mean(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gamma,
                   const Eigen::MatrixXd& penalty, std::span<const double> xi_grid);

/// Penalized least-squares fit of the symmetric covariance-surface
/// coefficients from the off-diagonal entries of Sigma:
///
///   vec(C) solves { (Gamma^T (x) Gamma^T)(I - E^T E)(Gamma (x) Gamma)
///                   + xi (J (x) J) } vec(C)
///               = (Gamma^T (x) Gamma^T) vec(Sigma - diag Sigma).
///
/// The q^2 x q^2 normal matrix Omega is rank-deficient whenever the d(d-1)
/// off-diagonal data cannot identify the penalty's null directions, so the
/// solver computes the ridged solution (Omega + eps I)^-1 rhs with a
/// deterministic scale-relative eps (see ridge()); as eps -> 0 this is the
/// minimum-norm solution. Rather than assembling the q^2 system, it works
/// in the eigenbasis of J, where the penalty is diagonal, and applies the
/// Woodbury push-through identity: one SPD system of size d(d-1) per xi,
/// cached and shared across data sets.
///
/// Effective degrees of freedom are the trace of the smoother over the
/// d(d-1) off-diagonal data positions (the hat-diagonal entries the
/// leave-one-pair-out argument uses), so df lies in [0, d(d-1)).
class CovSurfaceSolver {
public:
    CovSurfaceSolver(Eigen::MatrixXd gamma, const Eigen::MatrixXd& penalty);

    int sites() const { return d_; }
    int basis_dimension() const { return q_; }

    void prepare(double xi);

    /// Ridge added to the normal matrix at this xi (scale-relative).
    double ridge(double xi) const;

    /// Symmetrized q x q coefficient matrix; requires xi > 0.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& sigma, double xi) const;

    /// Exact data-space smoother trace; depends on geometry and xi only.
    double df(double xi) const;

    /// GCV score at one xi.
    double gcv(const Eigen::MatrixXd& sigma, double xi) const;

    GcvResult select_xi(const Eigen::MatrixXd& sigma, std::span<const double> xi_grid) const;

private:
    struct XiCache {
        Eigen::LDLT<Eigen::MatrixXd> system;  // I + G_xi, rho x rho
        Eigen::MatrixXd weight;               // q x q: 1 / (xi l_a l_b + eps)
        double df = 0.0;
    };
    XiCache build(double xi) const;
    const XiCache* find(double xi) const;
    Eigen::MatrixXd solve_with(const Eigen::MatrixXd& sigma, const XiCache& cache) const;

    int d_ = 0, q_ = 0, rho_ = 0;
    Eigen::MatrixXd gamma_;    // d x q, original coordinates
    Eigen::MatrixXd gamma_t_;  // d x q, in the eigenbasis of J
    Eigen::MatrixXd q_basis_;  // eigenvectors of J
    Eigen::VectorXd lambda_;   // eigenvalues of J (ascending, clamped at 0)
    double lambda_max_ = 0.0;
    double row_norm_max_ = 0.0;  // max_j |gamma(s_j)|^2
    std::vector<std::pair<int, int>> pairs_;
    std::map<double, XiCache> cache_;
};

Eigen::MatrixXd fit_cov_surface(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& gamma,
                                const Eigen::MatrixXd& penalty, double xi);
GcvResult gcv_cov(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& gamma,
                  const Eigen::MatrixXd& penalty, std::span<const double> xi_grid);

/// Mean-curve coefficients at a new site: B gamma(s0). s0 must lie in the
/// basis region.
Eigen::VectorXd mean_coeffs_at(const Eigen::MatrixXd& B, const SpatialBasis& basis,
                               const Eigen::Vector2d& s0);

/// Integrated products of the site mean curves with the new-site curve:
/// entries a_j^T G mu0.
Eigen::VectorXd m0_vector(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gram,
                          const Eigen::VectorXd& mu0);

struct CovAtSite {
    Eigen::VectorXd sigma0;  // gamma(s_j)^T C gamma(s0) per site
    double sigma00 = 0.0;    // smooth-surface value at (s0, s0); understates
                             // the total variance because the within-site
                             // ridge is excluded from the fit
};

CovAtSite cov_at(const Eigen::MatrixXd& C, const Eigen::MatrixXd& gamma,
                 const SpatialBasis& basis, const Eigen::Vector2d& s0);

}  // namespace tpk
