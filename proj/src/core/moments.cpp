#include "core/moments.hpp"

#include "core/errors.hpp"

namespace tpk {

namespace {

std::size_t upper_index(int j, int k, int d) {
    // row-major over the upper triangle, j <= k
    return static_cast<std::size_t>(j) * d - static_cast<std::size_t>(j) * (j + 1) / 2 + k;
}

void check_domains(const PointPattern& pattern, const SplineBasis& basis) {
    if (!(pattern.domain() == basis.domain()))
        throw invalid_input("moments: pattern and basis domains differ");
}

// Per-replicate, per-site sums S_ij = sum_u beta(u) and, for the diagonal
// exclusion, Q_ij = sum_u beta(u) beta(u)^T.
struct ReplicateSums {
    std::vector<Eigen::VectorXd> s;  // per site
    std::vector<Eigen::MatrixXd> q;  // per site
};

ReplicateSums replicate_sums(const PointPattern& pattern, const SplineBasis& basis, int i,
                             bool with_outer) {
    const int d = pattern.sites();
    const int p = basis.dimension();
    const int r = basis.order();
    ReplicateSums out;
    out.s.assign(static_cast<std::size_t>(d), Eigen::VectorXd::Zero(p));
    if (with_outer) out.q.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(p, p));
    std::vector<double> local(static_cast<std::size_t>(r));
    for (int j = 0; j < d; ++j) {
        for (double u : pattern.events(i, j)) {
            const int first = basis.eval_local(u, 0, local.data());
            for (int a = 0; a < r; ++a) out.s[static_cast<std::size_t>(j)][first + a] += local[a];
            if (with_outer)
                for (int a = 0; a < r; ++a)
                    for (int b = 0; b < r; ++b)
                        out.q[static_cast<std::size_t>(j)](first + a, first + b) +=
                            local[a] * local[b];
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXd mean_coefficients(const PointPattern& pattern, const SplineBasis& basis) {
    check_domains(pattern, basis);
    const int d = pattern.sites();
    const int n = pattern.replicates();
    const int p = basis.dimension();
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(p, d);
    for (int i = 0; i < n; ++i) {
        const ReplicateSums rs = replicate_sums(pattern, basis, i, false);
        for (int j = 0; j < d; ++j) sums.col(j) += rs.s[static_cast<std::size_t>(j)];
    }
    sums /= static_cast<double>(n);
    const Eigen::LLT<Eigen::MatrixXd> gram_llt(basis.gram());
    if (gram_llt.info() != Eigen::Success)
        throw numeric_error("moments: Gram matrix is not positive definite");
    return gram_llt.solve(sums);
}

std::vector<Eigen::MatrixXd> second_moment_blocks(const PointPattern& pattern,
                                                  const SplineBasis& basis) {
    check_domains(pattern, basis);
    const int d = pattern.sites();
    const int n = pattern.replicates();
    const int p = basis.dimension();
    std::vector<Eigen::MatrixXd> blocks(upper_index(d - 1, d - 1, d) + 1,
                                        Eigen::MatrixXd::Zero(p, p));
    for (int i = 0; i < n; ++i) {
        const ReplicateSums rs = replicate_sums(pattern, basis, i, true);
        for (int j = 0; j < d; ++j) {
            const auto& sj = rs.s[static_cast<std::size_t>(j)];
            for (int k = j; k < d; ++k) {
                auto& block = blocks[upper_index(j, k, d)];
                if (k == j)
                    block += sj * sj.transpose() - rs.q[static_cast<std::size_t>(j)];
                else
                    block += sj * rs.s[static_cast<std::size_t>(k)].transpose();
            }
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> gram_llt(basis.gram());
    if (gram_llt.info() != Eigen::Success)
        throw numeric_error("moments: Gram matrix is not positive definite");
    for (auto& block : blocks) {
        block /= static_cast<double>(n);
        block = gram_llt.solve(block);                          // G^-1 K
        block = gram_llt.solve(block.transpose()).transpose();  // ... G^-1
    }
    return blocks;
}

Eigen::MatrixXd m_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gram) {
    if (A.rows() != gram.rows())
        throw invalid_input("m_matrix: dimension mismatch");
    Eigen::MatrixXd m = A.transpose() * gram * A;
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd sigma_matrix(const Eigen::MatrixXd& A,
                             const std::vector<Eigen::MatrixXd>& upper_blocks,
                             const Eigen::MatrixXd& gram) {
    const int d = static_cast<int>(A.cols());
    Eigen::MatrixXd sigma(d, d);
    const Eigen::MatrixXd m = m_matrix(A, gram);
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            const auto& block = upper_blocks[upper_index(j, k, d)];
            const double value = (block * gram).trace() - m(j, k);
            sigma(j, k) = value;
            sigma(k, j) = value;
        }
    return sigma;
}

Eigen::MatrixXd MomentEstimates::second_moment_block(int j, int k) const {
    const int d = sites();
    if (j < 0 || k < 0 || j >= d || k >= d)
        throw invalid_input("MomentEstimates: site index out of range");
    if (j <= k) return upper_blocks[upper_index(j, k, d)];
    return upper_blocks[upper_index(k, j, d)].transpose();
}

MomentEstimates estimate_moments(const PointPattern& pattern, const SplineBasis& basis) {
    MomentEstimates est;
    est.A = mean_coefficients(pattern, basis);
    est.upper_blocks = second_moment_blocks(pattern, basis);
    const Eigen::MatrixXd gram = basis.gram();
    est.M = m_matrix(est.A, gram);
    est.Sigma = sigma_matrix(est.A, est.upper_blocks, gram);
    return est;
}

}  // namespace tpk
