#include "core/lgcp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/rng.hpp"

namespace tpk {

double lgcp_log_mean(double t) { return std::sin(M_PI * t) + std::log(20.0); }

double lgcp_log_factor(double t) { return std::sqrt(2.0) * std::sin(M_PI * t); }

double spatial_factor(SpatialModel model, const Eigen::Vector2d& s) {
    switch (model) {
        case SpatialModel::inverse_distance:
            return 1.0 / (1.0 + s.norm());
        case SpatialModel::constant:
            return 1.0;
    }
    throw invalid_input("spatial_factor: unknown model");
}

namespace {

SiteSet square_grid(double lo, double hi, int per_axis) {
    std::vector<Site> sites;
    sites.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int ix = 0; ix < per_axis; ++ix)
        for (int iy = 0; iy < per_axis; ++iy) {
            Site s;
            s.id = "g" + std::to_string(ix) + "_" + std::to_string(iy);
            // lerp keeps boundary sites exactly on the region edge
            s.position = Eigen::Vector2d(std::lerp(lo, hi, ix / (per_axis - 1.0)),
                                         std::lerp(lo, hi, iy / (per_axis - 1.0)));
            sites.push_back(std::move(s));
        }
    return SiteSet(std::move(sites));
}

}  // namespace

SiteSet grid_sites(GridId id) {
    switch (id) {
        case GridId::sparse16:
            return square_grid(-0.5, 0.5, 4);
        case GridId::dense16:
            return square_grid(-0.2, 0.2, 4);
        case GridId::dense64:
            return square_grid(-0.5, 0.5, 8);
    }
    throw invalid_input("grid_sites: unknown grid");
}

Rect grid_region(GridId id) {
    switch (id) {
        case GridId::sparse16:
        case GridId::dense64:
            return Rect(-0.5, 0.5, -0.5, 0.5);
        case GridId::dense16:
            return Rect(-0.2, 0.2, -0.2, 0.2);
    }
    throw invalid_input("grid_region: unknown grid");
}

Scenario Scenario::standard(GridId grid, SpatialModel model) {
    Scenario s{grid_sites(grid), grid_region(grid)};
    s.model = model;
    return s;
}

PointPattern simulate_dataset(const Scenario& scenario, const LgcpParams& params,
                              int replicates, std::uint64_t seed,
                              std::vector<Eigen::VectorXd>* latent_u) {
    if (replicates < 1) throw invalid_input("simulate_dataset: need at least one replicate");
    const int d = scenario.sites.size();
    const TimeDomain domain(0.0, 1.0);
    const double sd_common = std::sqrt(params.var_common);
    const double sd_site = std::sqrt(params.var_site);
    const double peak_log_mean = lgcp_log_mean(0.5);
    const double peak_log_factor = lgcp_log_factor(0.5);

    std::vector<std::vector<std::vector<double>>> events(
        static_cast<std::size_t>(replicates),
        std::vector<std::vector<double>>(static_cast<std::size_t>(d)));
    if (latent_u) latent_u->assign(static_cast<std::size_t>(replicates), Eigen::VectorXd());

    for (int i = 0; i < replicates; ++i) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
        const double w = rng.normal(0.0, sd_common);
        Eigen::VectorXd u(d);
        for (int j = 0; j < d; ++j)
            u[j] = spatial_factor(scenario.model, scenario.sites[j].position) * w +
                   rng.normal(0.0, sd_site);
        for (int j = 0; j < d; ++j) {
            // Thinning against the analytic supremum of the intensity.
            const double log_bound = peak_log_mean + std::max(u[j] * peak_log_factor, 0.0);
            const double bound = std::exp(log_bound);
            const int count = rng.poisson(bound * domain.length());
            auto& list = events[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            list.reserve(static_cast<std::size_t>(count));
            for (int e = 0; e < count; ++e) {
                const double t = domain.a + domain.length() * rng.uniform();
                const double accept = rng.uniform();
                const double log_intensity = lgcp_log_mean(t) + u[j] * lgcp_log_factor(t);
                if (accept < std::exp(log_intensity - log_bound)) list.push_back(t);
            }
            std::sort(list.begin(), list.end());
        }
        if (latent_u) (*latent_u)[static_cast<std::size_t>(i)] = u;
    }
    return PointPattern(domain, scenario.sites, std::move(events));
}

double u_variance(const LgcpParams& params, SpatialModel model, const Eigen::Vector2d& s) {
    const double g = spatial_factor(model, s);
    return g * g * params.var_common + params.var_site;
}

double u_covariance(const LgcpParams& params, SpatialModel model, const Eigen::Vector2d& s,
                    const Eigen::Vector2d& s2, bool same_site) {
    const double cov = spatial_factor(model, s) * spatial_factor(model, s2) * params.var_common;
    return same_site ? cov + params.var_site : cov;
}

double lgcp_mean(double t, double sigma2_u) {
    const double phi = lgcp_log_factor(t);
    return std::exp(lgcp_log_mean(t) + 0.5 * phi * phi * sigma2_u);
}

double lgcp_cov(double t, double t2, double sigma2_u, double sigma2_u2, double cov_u) {
    const double phi = lgcp_log_factor(t);
    const double phi2 = lgcp_log_factor(t2);
    const double base = std::exp(lgcp_log_mean(t) + lgcp_log_mean(t2) +
                                 0.5 * (phi * phi * sigma2_u + phi2 * phi2 * sigma2_u2));
    return base * std::expm1(phi * phi2 * cov_u);
}

namespace {

// Integrals over [0, 1] of entire integrands; a modest composite rule is
// exact to machine precision.
double integrate01(const std::function<double(double)>& f) {
    return integrate_composite(f, 0.0, 1.0, 16, 8);
}

}  // namespace

TrueMoments true_moments(const Scenario& scenario, const LgcpParams& params) {
    const int d = scenario.sites.size();
    TrueMoments truth;
    truth.sigma2_u.resize(d);
    for (int j = 0; j < d; ++j)
        truth.sigma2_u[j] = u_variance(params, scenario.model, scenario.sites[j].position);
    truth.sigma2_u0 = u_variance(params, scenario.model, scenario.target);

    truth.m.resize(d, d);
    truth.sigma.resize(d, d);
    truth.m0.resize(d);
    truth.sigma0.resize(d);
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            const double cov_u = u_covariance(params, scenario.model,
                                              scenario.sites[j].position,
                                              scenario.sites[k].position, j == k);
            const double mjk = integrate01([&](double t) {
                return lgcp_mean(t, truth.sigma2_u[j]) * lgcp_mean(t, truth.sigma2_u[k]);
            });
            const double sjk = integrate01([&](double t) {
                return lgcp_cov(t, t, truth.sigma2_u[j], truth.sigma2_u[k], cov_u);
            });
            truth.m(j, k) = truth.m(k, j) = mjk;
            truth.sigma(j, k) = truth.sigma(k, j) = sjk;
        }
        const double cov_u0 = u_covariance(params, scenario.model, scenario.sites[j].position,
                                           scenario.target, false);
        truth.m0[j] = integrate01([&](double t) {
            return lgcp_mean(t, truth.sigma2_u[j]) * lgcp_mean(t, truth.sigma2_u0);
        });
        truth.sigma0[j] = integrate01([&](double t) {
            return lgcp_cov(t, t, truth.sigma2_u[j], truth.sigma2_u0, cov_u0);
        });
    }
    truth.sigma00 = integrate01([&](double t) {
        return lgcp_cov(t, t, truth.sigma2_u0, truth.sigma2_u0, truth.sigma2_u0);
    });

    // Unconstrained optimum of the prediction error under the true moments.
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(truth.sigma);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
        throw numeric_error("true_moments: true covariance matrix is not positive definite");
    truth.spe0 = truth.sigma00 - truth.sigma0.dot(ldlt.solve(truth.sigma0));
    return truth;
}

double true_spe(const TrueMoments& truth, const Eigen::VectorXd& weights) {
    return weights.dot(truth.sigma * weights) - 2.0 * weights.dot(truth.sigma0) + truth.sigma00;
}

}  // namespace tpk
