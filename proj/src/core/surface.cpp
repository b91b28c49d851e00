#include "core/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace tpk {

Eigen::MatrixXd spatial_design(const SpatialBasis& basis, const SiteSet& sites) {
    Eigen::MatrixXd gamma(sites.size(), basis.dimension());
    for (int j = 0; j < sites.size(); ++j)
        gamma.row(j) = basis.eval(sites[j].position).transpose();
    return gamma;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo) || points < 1)
        throw invalid_input("log_grid: need 0 < lo <= hi and at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (points - 1.0));
    return grid;
}

namespace {

void check_grid(std::span<const double> xi_grid) {
    if (xi_grid.empty()) throw invalid_input("gcv: empty smoothing-parameter grid");
    for (double xi : xi_grid)
        if (!(xi > 0.0)) throw invalid_input("gcv: smoothing parameters must be positive");
}

GcvResult pick_minimum(std::vector<GcvPoint> curve) {
    // Ties go to the larger xi (the smoother fit).
    std::sort(curve.begin(), curve.end(),
              [](const GcvPoint& a, const GcvPoint& b) { return a.xi < b.xi; });
    GcvResult result;
    result.curve = std::move(curve);
    bool found = false;
    double best = std::numeric_limits<double>::infinity();
    for (const GcvPoint& pt : result.curve) {
        if (pt.excluded || !std::isfinite(pt.gcv)) continue;
        if (!found || pt.gcv <= best) {
            best = pt.gcv;
            result.xi = pt.xi;
            result.df = pt.df;
            result.gcv = pt.gcv;
            found = true;
        }
    }
    if (!found) throw numeric_error("gcv: every grid point was excluded");
    return result;
}

}  // namespace

MeanSurfaceSolver::MeanSurfaceSolver(Eigen::MatrixXd gamma, Eigen::MatrixXd penalty)
    : gamma_(std::move(gamma)), penalty_(std::move(penalty)) {
    if (penalty_.rows() != gamma_.cols() || penalty_.cols() != gamma_.cols())
        throw invalid_input("MeanSurfaceSolver: design/penalty dimension mismatch");
    gtg_ = gamma_.transpose() * gamma_;
}

MeanSurfaceSolver::XiCache MeanSurfaceSolver::build(double xi) const {
    if (!(xi >= 0.0)) throw invalid_input("MeanSurfaceSolver: negative penalty weight");
    XiCache cache;
    cache.system.compute(gtg_ + xi * penalty_);
    const Eigen::VectorXd diag = cache.system.vectorD();
    const double dmax = diag.maxCoeff();
    const double dmin = diag.minCoeff();
    if (cache.system.info() != Eigen::Success || !(dmin > 0.0) || dmax / dmin > 1e14)
        throw numeric_error(
            "mean surface system is singular (condition estimate " +
            std::to_string(dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity()) +
            "); increase the penalty or add sites");
    cache.df = cache.system.solve(gtg_).trace();
    cache.leverage.resize(sites());
    const Eigen::MatrixXd x = cache.system.solve(gamma_.transpose());  // q x d
    for (int j = 0; j < sites(); ++j) cache.leverage[j] = gamma_.row(j).dot(x.col(j));
    return cache;
}

void MeanSurfaceSolver::prepare(double xi) {
    if (cache_.find(xi) == cache_.end()) cache_.emplace(xi, build(xi));
}

const MeanSurfaceSolver::XiCache* MeanSurfaceSolver::find(double xi) const {
    const auto it = cache_.find(xi);
    return it == cache_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd MeanSurfaceSolver::fit(const Eigen::MatrixXd& A, double xi) const {
    if (A.cols() != gamma_.rows())
        throw invalid_input("MeanSurfaceSolver: coefficient matrix has wrong site count");
    const Eigen::MatrixXd rhs = gamma_.transpose() * A.transpose();
    if (const XiCache* cache = find(xi)) return cache->system.solve(rhs).transpose();
    return build(xi).system.solve(rhs).transpose();
}

double MeanSurfaceSolver::df(double xi) const {
    const XiCache* cache = find(xi);
    return cache ? cache->df : build(xi).df;
}

Eigen::VectorXd MeanSurfaceSolver::leverages(double xi) const {
    const XiCache* cache = find(xi);
    return cache ? cache->leverage : build(xi).leverage;
}

double MeanSurfaceSolver::gcv(const Eigen::MatrixXd& A, double xi) const {
    const double d = sites();
    const double dof = df(xi);
    const double denom = 1.0 - dof / d;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    const double resid = (A - fit(A, xi) * gamma_.transpose()).squaredNorm();
    return (resid / d) / (denom * denom);
}

double MeanSurfaceSolver::loo_cv(const Eigen::MatrixXd& A, double xi) const {
    const Eigen::MatrixXd resid = A - fit(A, xi) * gamma_.transpose();
    const Eigen::VectorXd h = leverages(xi);
    double acc = 0.0;
    for (int j = 0; j < sites(); ++j) {
        const double denom = 1.0 - h[j];
        if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
        acc += resid.col(j).squaredNorm() / (denom * denom);
    }
    return acc / sites();
}

GcvResult MeanSurfaceSolver::select_xi(const Eigen::MatrixXd& A,
                                       std::span<const double> xi_grid) const {
    check_grid(xi_grid);
    std::vector<GcvPoint> curve;
    curve.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        GcvPoint pt;
        pt.xi = xi;
        try {
            pt.df = df(xi);
            pt.excluded = pt.df >= sites();
            pt.gcv = pt.excluded ? std::numeric_limits<double>::infinity() : gcv(A, xi);
        } catch (const numeric_error&) {
            pt.excluded = true;
            pt.gcv = std::numeric_limits<double>::infinity();
        }
        curve.push_back(pt);
    }
    return pick_minimum(std::move(curve));
}

Eigen::MatrixXd fit_mean_surface(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gamma,
                                 const Eigen::MatrixXd& penalty, double xi) {
    return MeanSurfaceSolver(gamma, penalty).fit(A, xi);
}

GcvResult gcv_mean(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gamma,
                   const Eigen::MatrixXd& penalty, std::span<const double> xi_grid) {
    MeanSurfaceSolver solver(gamma, penalty);
    for (double xi : xi_grid) solver.prepare(xi);
    return solver.select_xi(A, xi_grid);
}

CovSurfaceSolver::CovSurfaceSolver(Eigen::MatrixXd gamma, const Eigen::MatrixXd& penalty)
    : gamma_(std::move(gamma)) {
    d_ = static_cast<int>(gamma_.rows());
    q_ = static_cast<int>(gamma_.cols());
    if (d_ < 2) throw invalid_input("CovSurfaceSolver: need at least two sites");
    if (penalty.rows() != q_ || penalty.cols() != q_)
        throw invalid_input("CovSurfaceSolver: design/penalty dimension mismatch");
    rho_ = d_ * (d_ - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jeig(penalty);
    if (jeig.info() != Eigen::Success)
        throw numeric_error("CovSurfaceSolver: penalty eigendecomposition failed");
    lambda_ = jeig.eigenvalues().cwiseMax(0.0);
    q_basis_ = jeig.eigenvectors();
    lambda_max_ = lambda_.maxCoeff();
    if (!(lambda_max_ > 0.0)) throw invalid_input("CovSurfaceSolver: penalty matrix is zero");
    gamma_t_ = gamma_ * q_basis_;
    row_norm_max_ = gamma_.rowwise().squaredNorm().maxCoeff();

    pairs_.reserve(static_cast<std::size_t>(rho_));
    for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
            if (j != k) pairs_.emplace_back(j, k);
}

double CovSurfaceSolver::ridge(double xi) const {
    // Relative to the largest scales present in the normal matrix: the data
    // block is bounded by the squared design row norms and the penalty
    // block by xi times the squared top eigenvalue of J.
    return 3e-8 * (row_norm_max_ * row_norm_max_ + xi * lambda_max_ * lambda_max_);
}

CovSurfaceSolver::XiCache CovSurfaceSolver::build(double xi) const {
    if (!(xi > 0.0))
        throw invalid_input("CovSurfaceSolver: penalty weight must be strictly positive");
    XiCache cache;
    const double eps = ridge(xi);
    cache.weight.resize(q_, q_);
    for (int a = 0; a < q_; ++a)
        for (int b = 0; b < q_; ++b)
            cache.weight(a, b) = 1.0 / (xi * lambda_[a] * lambda_[b] + eps);

    // G[(j,k),(j',k')] = sum_{a,b} w_ab gt(j,a) gt(j',a) gt(k,b) gt(k',b),
    // assembled as sum over a of outer products against per-a kernels.
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rho_, rho_);
    Eigen::MatrixXd kernel(d_, d_);
    for (int a = 0; a < q_; ++a) {
        const Eigen::VectorXd w = cache.weight.row(a).transpose();
        kernel.noalias() = gamma_t_ * w.asDiagonal() * gamma_t_.transpose();
        for (int r = 0; r < rho_; ++r) {
            const auto [j1, k1] = pairs_[static_cast<std::size_t>(r)];
            const double gja = gamma_t_(j1, a);
            for (int c = 0; c < rho_; ++c) {
                const auto [j2, k2] = pairs_[static_cast<std::size_t>(c)];
                g(r, c) += gja * gamma_t_(j2, a) * kernel(k1, k2);
            }
        }
    }
    Eigen::MatrixXd system = 0.5 * (g + g.transpose());
    system.diagonal().array() += 1.0;
    cache.system.compute(system);
    if (cache.system.info() != Eigen::Success)
        throw numeric_error("CovSurfaceSolver: factorization of the reduced system failed");
    // df = tr(G (I + G)^-1) = rho - tr((I + G)^-1), trace accumulated in
    // column blocks to bound the workspace.
    cache.df = static_cast<double>(rho_);
    const int block = 256;
    for (int start = 0; start < rho_; start += block) {
        const int width = std::min(block, rho_ - start);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(rho_, width);
        for (int c = 0; c < width; ++c) rhs(start + c, c) = 1.0;
        const Eigen::MatrixXd cols = cache.system.solve(rhs);
        for (int c = 0; c < width; ++c) cache.df -= cols(start + c, c);
    }
    return cache;
}

void CovSurfaceSolver::prepare(double xi) {
    if (cache_.find(xi) == cache_.end()) cache_.emplace(xi, build(xi));
}

const CovSurfaceSolver::XiCache* CovSurfaceSolver::find(double xi) const {
    const auto it = cache_.find(xi);
    return it == cache_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd CovSurfaceSolver::solve(const Eigen::MatrixXd& sigma, double xi) const {
    if (sigma.rows() != d_ || sigma.cols() != d_)
        throw invalid_input("CovSurfaceSolver: Sigma has wrong dimensions");
    const XiCache* cache = find(xi);
    if (cache) return solve_with(sigma, *cache);
    return solve_with(sigma, build(xi));
}

Eigen::MatrixXd CovSurfaceSolver::solve_with(const Eigen::MatrixXd& sigma,
                                             const XiCache& cache) const {
    Eigen::VectorXd y(rho_);
    for (int a = 0; a < rho_; ++a) {
        const auto [j, k] = pairs_[static_cast<std::size_t>(a)];
        y[a] = sigma(j, k);
    }
    // Push-through identity: x = K^-1 A^T (I + A K^-1 A^T)^-1 y with
    // K = diag(xi l_a l_b + eps); alpha is also the fit residual.
    const Eigen::VectorXd alpha = cache.system.solve(y);
    Eigen::MatrixXd am = Eigen::MatrixXd::Zero(d_, d_);
    for (int a = 0; a < rho_; ++a) {
        const auto [j, k] = pairs_[static_cast<std::size_t>(a)];
        am(j, k) = alpha[a];
    }
    const Eigen::MatrixXd c_tilde =
        cache.weight.cwiseProduct(gamma_t_.transpose() * am * gamma_t_);
    const Eigen::MatrixXd c = q_basis_ * c_tilde * q_basis_.transpose();
    return 0.5 * (c + c.transpose());
}

double CovSurfaceSolver::df(double xi) const {
    const XiCache* cache = find(xi);
    return cache ? cache->df : build(xi).df;
}

double CovSurfaceSolver::gcv(const Eigen::MatrixXd& sigma, double xi) const {
    const double pairs = static_cast<double>(rho_);
    const double dof = df(xi);
    const double denom = 1.0 - dof / pairs;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd fitted = gamma_ * solve(sigma, xi) * gamma_.transpose();
    double resid = 0.0;
    for (const auto& [j, k] : pairs_) {
        const double e = sigma(j, k) - fitted(j, k);
        resid += e * e;
    }
    return (resid / pairs) / (denom * denom);
}

GcvResult CovSurfaceSolver::select_xi(const Eigen::MatrixXd& sigma,
                                      std::span<const double> xi_grid) const {
    check_grid(xi_grid);
    std::vector<GcvPoint> curve;
    curve.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        GcvPoint pt;
        pt.xi = xi;
        try {
            pt.df = df(xi);
            pt.excluded = pt.df >= rho_;
            pt.gcv = pt.excluded ? std::numeric_limits<double>::infinity() : gcv(sigma, xi);
        } catch (const numeric_error&) {
            pt.excluded = true;
            pt.gcv = std::numeric_limits<double>::infinity();
        }
        curve.push_back(pt);
    }
    return pick_minimum(std::move(curve));
}

Eigen::MatrixXd fit_cov_surface(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& gamma,
                                const Eigen::MatrixXd& penalty, double xi) {
    return CovSurfaceSolver(gamma, penalty).solve(sigma, xi);
}

GcvResult gcv_cov(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& gamma,
                  const Eigen::MatrixXd& penalty, std::span<const double> xi_grid) {
    CovSurfaceSolver solver(gamma, penalty);
    for (double xi : xi_grid) solver.prepare(xi);
    return solver.select_xi(sigma, xi_grid);
}

Eigen::VectorXd mean_coeffs_at(const Eigen::MatrixXd& B, const SpatialBasis& basis,
                               const Eigen::Vector2d& s0) {
    if (!basis.region().contains(s0))
        throw invalid_input("mean_coeffs_at: target site outside the basis region");
    if (B.cols() != basis.dimension())
        throw invalid_input("mean_coeffs_at: coefficient matrix does not match the basis");
    return B * basis.eval(s0);
}

Eigen::VectorXd m0_vector(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gram,
                          const Eigen::VectorXd& mu0) {
    if (A.rows() != gram.rows() || mu0.size() != gram.cols())
        throw invalid_input("m0_vector: dimension mismatch");
    return A.transpose() * (gram * mu0);
}

CovAtSite cov_at(const Eigen::MatrixXd& C, const Eigen::MatrixXd& gamma,
                 const SpatialBasis& basis, const Eigen::Vector2d& s0) {
    if (!basis.region().contains(s0))
        throw invalid_input("cov_at: target site outside the basis region");
    if (C.rows() != basis.dimension() || C.cols() != basis.dimension() ||
        gamma.cols() != basis.dimension())
        throw invalid_input("cov_at: dimension mismatch");
    const Eigen::VectorXd gamma0 = basis.eval(s0);
    CovAtSite out;
    out.sigma0 = gamma * (C * gamma0);
    out.sigma00 = gamma0.dot(C * gamma0);
    return out;
}

}  // namespace tpk
