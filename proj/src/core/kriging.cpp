#include "core/kriging.hpp"

#include <cmath>
#include <vector>

#include "core/errors.hpp"

namespace tpk {

SpectralTruncation truncate_spectrum(const Eigen::MatrixXd& symmetric, double threshold) {
    if (symmetric.rows() != symmetric.cols())
        throw invalid_input("truncate_spectrum: matrix is not square");
    if (!(threshold > 0.0) || threshold > 1.0)
        throw invalid_input("truncate_spectrum: threshold must lie in (0, 1]");
    const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
    const double asym = (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw invalid_input("truncate_spectrum: input is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 *
                                                       (symmetric + symmetric.transpose()));
    if (eig.info() != Eigen::Success)
        throw numeric_error("truncate_spectrum: eigendecomposition failed");
    const int d = static_cast<int>(symmetric.rows());
    // Eigen sorts ascending; flip to decreasing. Signs are canonicalized so
    // the largest-magnitude component of each eigenvector is positive.
    Eigen::VectorXd values(d);
    Eigen::MatrixXd vectors(d, d);
    for (int i = 0; i < d; ++i) {
        values[i] = eig.eigenvalues()[d - 1 - i];
        Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - i);
        int pivot = 0;
        for (int k = 1; k < d; ++k)
            if (std::abs(v[k]) > std::abs(v[pivot])) pivot = k;
        if (v[pivot] < 0.0) v = -v;
        vectors.col(i) = v;
    }
    const double total = values.sum();
    if (!(total > 0.0))
        throw numeric_error("truncate_spectrum: no positive eigenvalue mass");
    int rank = 0;
    double mass = 0.0;
    for (int i = 0; i < d && values[i] > 0.0; ++i) {
        mass += values[i];
        rank = i + 1;
        if (mass >= threshold * total) break;
    }
    if (rank == 0) throw numeric_error("truncate_spectrum: no positive eigenvalues");
    SpectralTruncation out;
    out.values = values.head(rank);
    out.vectors = vectors.leftCols(rank);
    out.rank = rank;
    return out;
}

KrigingSolution solve_kriging(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& m,
                              const Eigen::VectorXd& sigma0, const Eigen::VectorXd& m0,
                              double sigma00, double threshold_m, double threshold_sigma) {
    const int d = static_cast<int>(sigma.rows());
    if (sigma.cols() != d || m.rows() != d || m.cols() != d || sigma0.size() != d ||
        m0.size() != d)
        throw invalid_input("solve_kriging: inconsistent dimensions");

    const SpectralTruncation tm = truncate_spectrum(m, threshold_m);
    const SpectralTruncation ts = truncate_spectrum(sigma, threshold_sigma);
    const int r = tm.rank;
    const int s = ts.rank;

    // Reduced constraint Mt c = m0t with Mt = diag(delta) U_r^T.
    const Eigen::MatrixXd mt = tm.values.asDiagonal() * tm.vectors.transpose();  // r x d
    const Eigen::VectorXd m0t = tm.vectors.transpose() * m0;
    const Eigen::MatrixXd mtv = mt * ts.vectors;  // r x s

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(s + r, s + r);
    block.topLeftCorner(s, s) = ts.values.asDiagonal();
    block.topRightCorner(s, r) = mtv.transpose();
    block.bottomLeftCorner(r, s) = mtv;
    Eigen::VectorXd rhs(s + r);
    rhs.head(s) = ts.vectors.transpose() * sigma0;
    rhs.tail(r) = m0t;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (!lu.isInvertible())
        throw numeric_error("solve_kriging: reduced block system is singular (rank_m=" +
                            std::to_string(r) + ", rank_sigma=" + std::to_string(s) +
                            "); lower the truncation thresholds");
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd cs = sol.head(s);
    const Eigen::VectorXd lagrange = sol.tail(r);

    KrigingSolution out;
    out.weights = ts.vectors * cs;
    out.lagrange = lagrange;
    out.rank_m = r;
    out.rank_sigma = s;
    out.threshold_m = threshold_m;
    out.threshold_sigma = threshold_sigma;
    out.spe_estimate = out.weights.dot(sigma * out.weights) - 2.0 * out.weights.dot(sigma0) +
                       sigma00;
    out.constraint_residual = (mt * out.weights - m0t).norm() / (1.0 + m0t.norm());
    out.kkt_residual = (ts.values.asDiagonal() * cs + mtv.transpose() * lagrange -
                        ts.vectors.transpose() * sigma0)
                           .norm();
    return out;
}

Eigen::VectorXd predict_intensity_coeffs(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& weights) {
    if (A.cols() != weights.size())
        throw invalid_input("predict_intensity_coeffs: weight count mismatch");
    return A * weights;
}

CountFunction predict_counts(const PointPattern& pattern, const Eigen::VectorXd& weights,
                             int replicate) {
    if (weights.size() != pattern.sites())
        throw invalid_input("predict_counts: weight count mismatch");
    std::vector<CountFunction> parts;
    std::vector<double> w(static_cast<std::size_t>(pattern.sites()));
    parts.reserve(w.size());
    for (int j = 0; j < pattern.sites(); ++j) {
        parts.push_back(count_function(pattern, replicate, j));
        w[static_cast<std::size_t>(j)] = weights[j];
    }
    return CountFunction::weighted_sum(parts, w);
}

double count_prediction_error(std::span<const CountFunction> observed,
                              std::span<const CountFunction> predicted) {
    return root_average_squared_error(observed, predicted);
}

}  // namespace tpk
