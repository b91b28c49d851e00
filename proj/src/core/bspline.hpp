#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace tpk {

/// Closed observation interval [a, b] shared by every replicate.
struct TimeDomain {
    double a = 0.0;
    double b = 1.0;

    TimeDomain() = default;
    TimeDomain(double a_, double b_);

    double length() const { return b - a; }
    bool contains(double t) const { return t >= a && t <= b; }
    bool operator==(const TimeDomain& other) const = default;
};

/// Clamped B-spline basis of a given order on a TimeDomain.
///
/// The basis has p = order + k functions, where k is the number of interior
/// knots. End knots carry full multiplicity, so the basis spans all
/// polynomials of degree < order on [a, b], sums to one everywhere, and the
/// first (last) function equals 1 at a (b).
///
/// Interior knots are equally spaced by default. When a positive placement
/// density g is supplied, knot i solves the quantile equation
/// F(tau_i) = i/(k+1) with F the normalized integral of g.
class SplineBasis {
public:
    SplineBasis(TimeDomain domain, int order, int interior_knot_count);
    SplineBasis(TimeDomain domain, int order, int interior_knot_count,
                const std::function<double(double)>& density);

    /// Basis with an explicit interior knot list (strictly increasing,
    /// strictly inside the domain).
    static SplineBasis with_interior_knots(TimeDomain domain, int order,
                                           std::vector<double> interior);

    int order() const { return order_; }
    int dimension() const { return static_cast<int>(knots_.size()) - order_; }
    const TimeDomain& domain() const { return domain_; }

    /// Full clamped knot vector of length dimension() + order().
    const std::vector<double>& knots() const { return knots_; }
    std::vector<double> interior_knots() const;

    /// Index of the knot span containing t, in [order-1, dimension()-1].
    int find_span(double t) const;

    /// Values (or deriv-th derivatives) of the `order` basis functions that
    /// are nonzero at t. Writes them to values[0..order) and returns the
    /// index of the first one. values must hold order() doubles.
    int eval_local(double t, int deriv, double* values) const;

    /// Dense evaluation: all p basis values at t.
    Eigen::VectorXd eval(double t) const;
    Eigen::VectorXd eval_derivative(double t, int deriv) const;

    /// p x p matrix of pairwise integrals of deriv-th derivatives,
    /// computed by per-span Gauss-Legendre quadrature that is exact for
    /// the piecewise-polynomial integrand.
    Eigen::MatrixXd derivative_gram(int deriv) const;

    /// Gram matrix of the basis functions themselves.
    Eigen::MatrixXd gram() const { return derivative_gram(0); }

    bool operator==(const SplineBasis& other) const {
        return domain_ == other.domain_ && order_ == other.order_ && knots_ == other.knots_;
    }

private:
    SplineBasis(TimeDomain domain, int order, std::vector<double> full_knots);

    TimeDomain domain_;
    int order_ = 0;
    std::vector<double> knots_;
};

}  // namespace tpk
