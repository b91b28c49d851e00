#include "core/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace tpk {

TimeDomain::TimeDomain(double a_, double b_) : a(a_), b(b_) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw invalid_input("TimeDomain: need finite bounds with b > a");
}

namespace {

void validate_shape(int order, int interior_knot_count) {
    if (order < 2) throw invalid_input("SplineBasis: order must be >= 2");
    if (interior_knot_count < 0) throw invalid_input("SplineBasis: negative knot count");
}

std::vector<double> clamped_knots(const TimeDomain& domain, int order,
                                  const std::vector<double>& interior) {
    std::vector<double> knots;
    knots.reserve(interior.size() + 2 * order);
    knots.insert(knots.end(), order, domain.a);
    knots.insert(knots.end(), interior.begin(), interior.end());
    knots.insert(knots.end(), order, domain.b);
    return knots;
}

std::vector<double> uniform_interior(const TimeDomain& domain, int order, int k) {
    validate_shape(order, k);
    std::vector<double> interior(k);
    for (int i = 0; i < k; ++i)
        interior[i] = domain.a + (domain.b - domain.a) * (i + 1) / (k + 1.0);
    return interior;
}

// Quantile knots: F(tau_i) = i/(k+1) with F the normalized CDF of g,
// solved by bisection on a high-accuracy cumulative table.
std::vector<double> density_interior(const TimeDomain& domain, int order, int k,
                                     const std::function<double(double)>& g) {
    validate_shape(order, k);
    const int cells = 2048;
    const int nodes = 8;
    const double h = domain.length() / cells;
    std::vector<double> cum(cells + 1, 0.0);
    const QuadRule rule = gauss_legendre(nodes);
    for (int c = 0; c < cells; ++c) {
        const double lo = domain.a + c * h;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = lo + 0.5 * h * (1.0 + rule.nodes[i]);
            const double v = g(t);
            if (!(v > 0.0))
                throw invalid_input("SplineBasis: knot density must be strictly positive");
            s += rule.weights[i] * v;
        }
        cum[c + 1] = cum[c] + 0.5 * h * s;
    }
    const double total = cum[cells];

    auto cdf = [&](double t) {
        const double x = (t - domain.a) / h;
        const int c = std::clamp(static_cast<int>(x), 0, cells - 1);
        double part = 0.0;
        const double lo = domain.a + c * h;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double mid = 0.5 * (lo + t);
            const double half = 0.5 * (t - lo);
            part += rule.weights[i] * g(mid + half * rule.nodes[i]) * half;
        }
        return (cum[c] + part) / total;
    };

    std::vector<double> interior(k);
    for (int i = 0; i < k; ++i) {
        const double target = (i + 1) / (k + 1.0);
        double lo = domain.a, hi = domain.b;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (cdf(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        interior[i] = 0.5 * (lo + hi);
    }
    return interior;
}

}  // namespace

SplineBasis::SplineBasis(TimeDomain domain, int order, std::vector<double> full_knots)
    : domain_(domain), order_(order), knots_(std::move(full_knots)) {}

SplineBasis::SplineBasis(TimeDomain domain, int order, int interior_knot_count)
    : SplineBasis(domain, order,
                  clamped_knots(domain, order,
                                uniform_interior(domain, order, interior_knot_count))) {}

SplineBasis::SplineBasis(TimeDomain domain, int order, int interior_knot_count,
                         const std::function<double(double)>& density)
    : SplineBasis(domain, order,
                  clamped_knots(domain, order,
                                density_interior(domain, order, interior_knot_count, density))) {}

SplineBasis SplineBasis::with_interior_knots(TimeDomain domain, int order,
                                             std::vector<double> interior) {
    validate_shape(order, 0);
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (!(interior[i] > domain.a && interior[i] < domain.b))
            throw invalid_input("SplineBasis: interior knots must lie strictly inside the domain");
        if (i > 0 && !(interior[i] > interior[i - 1]))
            throw invalid_input("SplineBasis: interior knots must be strictly increasing");
    }
    return SplineBasis(domain, order, clamped_knots(domain, order, interior));
}

std::vector<double> SplineBasis::interior_knots() const {
    return {knots_.begin() + order_, knots_.end() - order_};
}

int SplineBasis::find_span(double t) const {
    const int p = dimension();
    if (t >= domain_.b) return p - 1;
    // knots_[span] <= t < knots_[span+1], span in [order-1, p-1]
    auto it = std::upper_bound(knots_.begin() + order_ - 1, knots_.begin() + p, t);
    return static_cast<int>(it - knots_.begin()) - 1;
}

// Cox-de Boor recursion with derivatives (de Boor's algorithm in the
// triangular-table form). Fills values[0..order) for functions
// [span-order+1, span].
int SplineBasis::eval_local(double t, int deriv, double* values) const {
    if (!domain_.contains(t))
        throw invalid_input("SplineBasis: evaluation point outside the domain");
    const int r = order_;
    const int span = find_span(t);
    const int first = span - r + 1;

    std::vector<double> left(r), right(r);
    std::vector<std::vector<double>> ndu(r, std::vector<double>(r));
    ndu[0][0] = 1.0;
    for (int j = 1; j < r; ++j) {
        left[j] = t - knots_[span + 1 - j];
        right[j] = knots_[span + j] - t;
        double saved = 0.0;
        for (int s = 0; s < j; ++s) {
            const double den = right[s + 1] + left[j - s];
            ndu[j][s] = den;
            const double temp = ndu[s][j - 1] / den;
            ndu[s][j] = saved + right[s + 1] * temp;
            saved = left[j - s] * temp;
        }
        ndu[j][j] = saved;
    }
    if (deriv == 0) {
        for (int s = 0; s < r; ++s) values[s] = ndu[s][r - 1];
        return first;
    }
    if (deriv >= r) {
        std::fill(values, values + r, 0.0);
        return first;
    }

    // Derivative via difference coefficients (NURBS book A2.3).
    std::vector<std::vector<double>> a(2, std::vector<double>(r));
    for (int s = 0; s < r; ++s) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        double d = 0.0;
        for (int k = 1; k <= deriv; ++k) {
            d = 0.0;
            const int rk = s - k;
            const int pk = r - 1 - k;
            if (s >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (s - 1 <= pk) ? k - 1 : r - 1 - s;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (s <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][s];
                d += a[s2][k] * ndu[s][pk];
            }
            std::swap(s1, s2);
        }
        values[s] = d;
    }
    double factor = static_cast<double>(r - 1);
    for (int k = 2; k <= deriv; ++k) factor *= (r - k);
    for (int s = 0; s < r; ++s) values[s] *= factor;
    return first;
}

Eigen::VectorXd SplineBasis::eval(double t) const { return eval_derivative(t, 0); }

Eigen::VectorXd SplineBasis::eval_derivative(double t, int deriv) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dimension());
    std::vector<double> local(order_);
    const int first = eval_local(t, deriv, local.data());
    for (int s = 0; s < order_; ++s) out[first + s] = local[s];
    return out;
}

Eigen::MatrixXd SplineBasis::derivative_gram(int deriv) const {
    const int p = dimension();
    Eigen::MatrixXd result = Eigen::MatrixXd::Zero(p, p);
    // Integrand is piecewise polynomial of degree 2(order-1-deriv); an
    // order-point rule per span is exact with margin.
    const QuadRule rule = gauss_legendre(order_);
    std::vector<double> local(order_);
    for (int span = order_ - 1; span < p; ++span) {
        const double lo = knots_[span];
        const double hi = knots_[span + 1];
        if (!(hi > lo)) continue;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = mid + half * rule.nodes[i];
            const double w = half * rule.weights[i];
            const int first = eval_local(t, deriv, local.data());
            for (int s = 0; s < order_; ++s)
                for (int s2 = 0; s2 < order_; ++s2)
                    result(first + s, first + s2) += w * local[s] * local[s2];
        }
    }
    return result;
}

}  // namespace tpk
