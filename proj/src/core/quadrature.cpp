#include "core/quadrature.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace tpk {

QuadRule gauss_legendre(int n) {
    if (n < 1) throw invalid_input("gauss_legendre: need at least one node");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;  // roots come in +/- pairs
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int n) {
    const QuadRule rule = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double integrate_composite(const std::function<double(double)>& f, double lo, double hi,
                           int n, int cells) {
    if (cells < 1) throw invalid_input("integrate_composite: need at least one cell");
    double sum = 0.0;
    const double h = (hi - lo) / cells;
    for (int c = 0; c < cells; ++c)
        sum += integrate(f, lo + c * h, lo + (c + 1) * h, n);
    return sum;
}

}  // namespace tpk
