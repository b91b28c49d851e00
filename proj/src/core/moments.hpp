#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/bspline.hpp"
#include "core/point_pattern.hpp"

namespace tpk {

/// Spline-coefficient representations of the estimated first and second
/// moment functions at the observed sites, plus the integrated matrices
/// used by the kriging solve.
///
/// Column j of A holds the coefficients of the mean curve at site j. For a
/// site pair (j, k) the second-moment surface is beta(t)^T R(j,k) beta(t'),
/// with R(j,k) = R(k,j)^T. M and Sigma are the d x d integrated mean-product
/// and covariance matrices.
struct MomentEstimates {
    Eigen::MatrixXd A;      // p x d
    Eigen::MatrixXd M;      // d x d, symmetric PSD
    Eigen::MatrixXd Sigma;  // d x d, symmetric (not forced PSD)

    /// Inner coefficient matrix of the second-moment estimate for (j, k).
    Eigen::MatrixXd second_moment_block(int j, int k) const;

    int sites() const { return static_cast<int>(A.cols()); }
    int basis_dimension() const { return static_cast<int>(A.rows()); }

    // Upper-triangle blocks, row-major over j <= k.
    std::vector<Eigen::MatrixXd> upper_blocks;
};

/// Mean coefficients: column j is Ginv * (1/n) sum_i sum_{u in X_i^j} beta(u).
Eigen::MatrixXd mean_coefficients(const PointPattern& pattern, const SplineBasis& basis);

/// Second-moment inner matrices for every site pair. Off the diagonal the
/// double sum runs over all event pairs of the replicate; on the diagonal
/// pairs of one event with itself are excluded.
std::vector<Eigen::MatrixXd> second_moment_blocks(const PointPattern& pattern,
                                                  const SplineBasis& basis);

/// M with entries a_j^T G a_k (the integral of the mean-curve products).
Eigen::MatrixXd m_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gram);

/// Sigma with entries tr((R_jk - a_j a_k^T) G), the integrated covariance
/// of the latent intensities along the diagonal t' = t.
Eigen::MatrixXd sigma_matrix(const Eigen::MatrixXd& A,
                             const std::vector<Eigen::MatrixXd>& upper_blocks,
                             const Eigen::MatrixXd& gram);

/// Full estimation pipeline for a pattern.
MomentEstimates estimate_moments(const PointPattern& pattern, const SplineBasis& basis);

}  // namespace tpk
