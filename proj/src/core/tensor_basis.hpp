#pragma once

#include <Eigen/Dense>

#include "core/bspline.hpp"

namespace tpk {

/// Axis-aligned rectangle, the spatial region R.
struct Rect {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;

    Rect() = default;
    Rect(double x0_, double x1_, double y0_, double y1_);

    bool contains(const Eigen::Vector2d& s) const {
        return s.x() >= x0 && s.x() <= x1 && s.y() >= y0 && s.y() <= y1;
    }
};

/// Tensor-product B-spline basis on a rectangle.
///
/// Entry i*p2 + j is the product of marginal function i on the first axis
/// and marginal function j on the second axis, i.e. the second coordinate
/// varies fastest. Every Kronecker identity used by the surface fits
/// assumes this ordering.
class SpatialBasis {
public:
    SpatialBasis(const Rect& region, int order, int interior_knots_per_axis);
    SpatialBasis(SplineBasis axis1, SplineBasis axis2);

    int dimension() const { return axis1_.dimension() * axis2_.dimension(); }
    const Rect& region() const { return region_; }
    const SplineBasis& axis1() const { return axis1_; }
    const SplineBasis& axis2() const { return axis2_; }

    /// All q basis values at s (must lie inside the region).
    Eigen::VectorXd eval(const Eigen::Vector2d& s) const;

    /// Mixed partial derivative of order (d1, d2) of every basis function.
    Eigen::VectorXd eval_partial(const Eigen::Vector2d& s, int d1, int d2) const;

    /// Roughness penalty Gram matrix J: the q x q matrix such that
    /// tr(B^T B J) integrates the summed squared unmixed second partials
    /// of the surface with coefficient matrix B. Bilinear surfaces are
    /// exactly penalty-free. Assembled from exact marginal derivative Gram
    /// matrices, which equals per-cell Gauss-Legendre quadrature of the
    /// tensor integrand.
    Eigen::MatrixXd roughness() const;

    bool operator==(const SpatialBasis& other) const {
        return axis1_ == other.axis1_ && axis2_ == other.axis2_;
    }

private:
    Rect region_;
    SplineBasis axis1_;
    SplineBasis axis2_;
};

/// kron(A, B) with the index of B varying fastest.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace tpk
