#pragma once

#include <functional>
#include <vector>

namespace tpk {

/// Gauss-Legendre rule on the reference interval [-1, 1].
/// An n-point rule integrates polynomials of degree <= 2n-1 exactly.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Nodes and weights for the n-point Gauss-Legendre rule, computed by
/// Newton iteration on the Legendre polynomial. Deterministic.
QuadRule gauss_legendre(int n);

/// Integrate f over [lo, hi] with a single mapped n-point rule.
double integrate(const std::function<double(double)>& f, double lo, double hi, int n);

/// Composite rule: [lo, hi] split into `cells` equal cells, n points each.
double integrate_composite(const std::function<double(double)>& f, double lo, double hi,
                           int n, int cells);

}  // namespace tpk
