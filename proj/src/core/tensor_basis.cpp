#include "core/tensor_basis.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace tpk {

Rect::Rect(double x0_, double x1_, double y0_, double y1_) : x0(x0_), x1(x1_), y0(y0_), y1(y1_) {
    if (!(x1 > x0) || !(y1 > y0))
        throw invalid_input("Rect: degenerate rectangle");
}

SpatialBasis::SpatialBasis(const Rect& region, int order, int interior_knots_per_axis)
    : region_(region),
      axis1_(TimeDomain(region.x0, region.x1), order, interior_knots_per_axis),
      axis2_(TimeDomain(region.y0, region.y1), order, interior_knots_per_axis) {}

SpatialBasis::SpatialBasis(SplineBasis axis1, SplineBasis axis2)
    : region_(axis1.domain().a, axis1.domain().b, axis2.domain().a, axis2.domain().b),
      axis1_(std::move(axis1)),
      axis2_(std::move(axis2)) {}

Eigen::VectorXd SpatialBasis::eval(const Eigen::Vector2d& s) const {
    return eval_partial(s, 0, 0);
}

Eigen::VectorXd SpatialBasis::eval_partial(const Eigen::Vector2d& s, int d1, int d2) const {
    if (!region_.contains(s))
        throw invalid_input("SpatialBasis: point outside the region");
    const Eigen::VectorXd v1 = axis1_.eval_derivative(s.x(), d1);
    const Eigen::VectorXd v2 = axis2_.eval_derivative(s.y(), d2);
    const int p1 = axis1_.dimension();
    const int p2 = axis2_.dimension();
    Eigen::VectorXd out(p1 * p2);
    for (int i = 0; i < p1; ++i)
        out.segment(static_cast<Eigen::Index>(i) * p2, p2) = v1[i] * v2;
    return out;
}

Eigen::MatrixXd SpatialBasis::roughness() const {
    if (axis1_.order() < 3 || axis2_.order() < 3)
        throw invalid_input("SpatialBasis: roughness needs marginal order >= 3");
    // Additive curvature penalty: the integrand splits into per-axis
    // factors, so the 2-D quadrature factorizes into the marginal
    // derivative Gram matrices:
    //   J = G1'' (x) G2  +  G1 (x) G2''
    // The null space is exactly the bilinear surfaces a + bx + cy + dxy.
    const Eigen::MatrixXd g1_0 = axis1_.derivative_gram(0);
    const Eigen::MatrixXd g1_2 = axis1_.derivative_gram(2);
    const Eigen::MatrixXd g2_0 = axis2_.derivative_gram(0);
    const Eigen::MatrixXd g2_2 = axis2_.derivative_gram(2);
    return kron(g1_2, g2_0) + kron(g1_0, g2_2);
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace tpk
