#include "tpkrige.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/kriging.hpp"
#include "core/moments.hpp"
#include "core/pattern_io.hpp"
#include "core/point_pattern.hpp"
#include "core/study.hpp"
#include "core/surface.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

tpk_status fail(tpk_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
tpk_status guarded(Fn&& fn) {
    try {
        fn();
        return TPK_OK;
    } catch (const tpk::numeric_error& e) {
        return fail(TPK_ERR_NUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(TPK_ERR_INVALID, e.what());
    }
}

}  // namespace

struct tpk_config {
    tpk::KeyValueConfig kv;
};

struct tpk_pattern {
    std::unique_ptr<tpk::PointPattern> pattern;
};

struct tpk_fit {
    tpk::TimeDomain domain{0.0, 1.0};
    std::vector<tpk::Site> sites;
    std::unique_ptr<tpk::SplineBasis> tbasis;
    std::unique_ptr<tpk::SpatialBasis> sbasis;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd gamma;
    Eigen::MatrixXd A, M, Sigma, B, C;
    tpk::GcvResult gcv_mean;
    tpk::GcvResult gcv_cov;

    tpk::SiteSet site_set() const { return tpk::SiteSet(sites); }
};

struct tpk_krige {
    tpk::KrigingSolution solution;
    Eigen::Vector2d target;
    tpk::TimeDomain domain{0.0, 1.0};
    std::vector<std::string> site_ids;
};

extern "C" {

const char* tpk_last_error(void) { return g_last_error.c_str(); }

const char* tpk_version(void) { return "0.1.0"; }

tpk_status tpk_config_create(tpk_config** out) {
    if (!out) return fail(TPK_ERR_INVALID, "tpk_config_create: null output pointer");
    return guarded([&] { *out = new tpk_config(); });
}

tpk_status tpk_config_load(const char* path, tpk_config** out) {
    if (!path || !out) return fail(TPK_ERR_INVALID, "tpk_config_load: null argument");
    return guarded([&] {
        auto config = std::make_unique<tpk_config>();
        config->kv = tpk::KeyValueConfig::load(path);
        *out = config.release();
    });
}

tpk_status tpk_config_set(tpk_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(TPK_ERR_INVALID, "tpk_config_set: null argument");
    return guarded([&] { config->kv.set(key, value); });
}

tpk_status tpk_config_get(const tpk_config* config, const char* key, char* buf, size_t size) {
    if (!config || !key || !buf) return fail(TPK_ERR_INVALID, "tpk_config_get: null argument");
    if (!config->kv.has(key))
        return fail(TPK_ERR_INVALID, std::string("tpk_config_get: missing key '") + key + "'");
    const std::string value = config->kv.get_string(key);
    if (value.size() + 1 > size)
        return fail(TPK_ERR_INVALID, "tpk_config_get: buffer too small");
    std::memcpy(buf, value.c_str(), value.size() + 1);
    return TPK_OK;
}

void tpk_config_free(tpk_config* config) { delete config; }

tpk_status tpk_pattern_from_events(const char* events_csv, const char* sites_csv, double a,
                                   double b, tpk_pattern** out) {
    if (!events_csv || !sites_csv || !out)
        return fail(TPK_ERR_INVALID, "tpk_pattern_from_events: null argument");
    return guarded([&] {
        const tpk::SiteSet sites = tpk::read_sites_csv(sites_csv);
        auto pattern = std::make_unique<tpk_pattern>();
        pattern->pattern = std::make_unique<tpk::PointPattern>(
            tpk::read_events_csv(events_csv, sites, tpk::TimeDomain(a, b)));
        *out = pattern.release();
    });
}

tpk_status tpk_pattern_from_trips(const char* trips_csv, const char* sites_csv,
                                  const char* calendar_path, tpk_pattern** out) {
    if (!trips_csv || !sites_csv || !calendar_path || !out)
        return fail(TPK_ERR_INVALID, "tpk_pattern_from_trips: null argument");
    return guarded([&] {
        const tpk::SiteSet sites = tpk::read_sites_csv(sites_csv);
        auto pattern = std::make_unique<tpk_pattern>();
        pattern->pattern = std::make_unique<tpk::PointPattern>(
            tpk::read_trips_csv(trips_csv, sites, calendar_path));
        *out = pattern.release();
    });
}

tpk_status tpk_pattern_save_events(const tpk_pattern* pattern, const char* path) {
    if (!pattern || !path) return fail(TPK_ERR_INVALID, "tpk_pattern_save_events: null argument");
    return guarded([&] { tpk::write_events_csv(*pattern->pattern, path); });
}

int tpk_pattern_replicates(const tpk_pattern* pattern) {
    return pattern ? pattern->pattern->replicates() : -1;
}

int tpk_pattern_sites(const tpk_pattern* pattern) {
    return pattern ? pattern->pattern->sites() : -1;
}

void tpk_pattern_free(tpk_pattern* pattern) { delete pattern; }

}  // extern "C"

namespace {

tpk::Rect region_from_config(const tpk::KeyValueConfig& kv, const tpk::SiteSet& sites) {
    if (kv.has("region_x0") || kv.has("region_x1") || kv.has("region_y0") ||
        kv.has("region_y1")) {
        return tpk::Rect(kv.get_double("region_x0"), kv.get_double("region_x1"),
                         kv.get_double("region_y0"), kv.get_double("region_y1"));
    }
    return sites.bounding_box();
}

tpk::SplineBasis time_basis_from_config(const tpk::KeyValueConfig& kv,
                                        const tpk::TimeDomain& domain) {
    const int order = static_cast<int>(kv.get_int("time_order", 4));
    if (kv.has("time_interior_knots")) {
        std::vector<double> knots;
        for (const std::string& item : kv.get_string_list("time_interior_knots"))
            knots.push_back(std::stod(item));
        return tpk::SplineBasis::with_interior_knots(domain, order, std::move(knots));
    }
    return tpk::SplineBasis(domain, order, static_cast<int>(kv.get_int("time_knots", 5)));
}

std::vector<double> xi_grid_from_config(const tpk::KeyValueConfig& kv) {
    return tpk::log_grid(kv.get_double("xi_min", 1e-6), kv.get_double("xi_max", 1e6),
                         static_cast<int>(kv.get_int("xi_points", 25)));
}

json gcv_to_json(const tpk::GcvResult& result) {
    json curve = json::array();
    for (const auto& pt : result.curve)
        curve.push_back({{"xi", pt.xi}, {"df", pt.df}, {"gcv", pt.gcv}, {"excluded", pt.excluded}});
    return {{"xi", result.xi}, {"df", result.df}, {"gcv", result.gcv}, {"curve", curve}};
}

tpk::GcvResult gcv_from_json(const json& j) {
    tpk::GcvResult result;
    result.xi = j.at("xi").get<double>();
    result.df = j.at("df").get<double>();
    result.gcv = j.at("gcv").get<double>();
    for (const auto& pt : j.at("curve")) {
        tpk::GcvPoint p;
        p.xi = pt.at("xi").get<double>();
        p.df = pt.at("df").get<double>();
        p.gcv = pt.at("gcv").get<double>();
        p.excluded = pt.at("excluded").get<bool>();
        result.curve.push_back(p);
    }
    return result;
}

void write_gcv_csv(const tpk::GcvResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw tpk::invalid_input("cannot write file: " + path);
    out.precision(17);
    out << "xi,df,gcv,excluded\n";
    for (const auto& pt : result.curve)
        out << pt.xi << ',' << pt.df << ',' << pt.gcv << ',' << (pt.excluded ? 1 : 0) << '\n';
}

std::vector<double> interior_knots_of(const tpk::SplineBasis& basis) {
    return basis.interior_knots();
}

}  // namespace

extern "C" {

tpk_status tpk_fit_compute(const tpk_pattern* pattern, const tpk_config* config,
                           tpk_fit** out) {
    if (!pattern || !out) return fail(TPK_ERR_INVALID, "tpk_fit_compute: null argument");
    return guarded([&] {
        tpk::KeyValueConfig kv;
        if (config) kv = config->kv;
        const tpk::PointPattern& pat = *pattern->pattern;

        auto fit = std::make_unique<tpk_fit>();
        fit->domain = pat.domain();
        fit->sites.assign(pat.site_set().begin(), pat.site_set().end());
        fit->tbasis = std::make_unique<tpk::SplineBasis>(time_basis_from_config(kv, fit->domain));
        const tpk::Rect region = region_from_config(kv, pat.site_set());
        fit->sbasis = std::make_unique<tpk::SpatialBasis>(
            region, static_cast<int>(kv.get_int("space_order", 4)),
            static_cast<int>(kv.get_int("space_knots", 6)));

        fit->gram = fit->tbasis->gram();
        fit->gamma = tpk::spatial_design(*fit->sbasis, pat.site_set());
        const Eigen::MatrixXd penalty = fit->sbasis->roughness();

        const tpk::MomentEstimates est = tpk::estimate_moments(pat, *fit->tbasis);
        fit->A = est.A;
        fit->M = est.M;
        fit->Sigma = est.Sigma;

        const std::vector<double> xi_grid = xi_grid_from_config(kv);
        tpk::MeanSurfaceSolver mean_solver(fit->gamma, penalty);
        fit->gcv_mean = mean_solver.select_xi(fit->A, xi_grid);
        fit->B = mean_solver.fit(fit->A, fit->gcv_mean.xi);
        tpk::CovSurfaceSolver cov_solver(fit->gamma, penalty);
        fit->gcv_cov = cov_solver.select_xi(fit->Sigma, xi_grid);
        fit->C = cov_solver.solve(fit->Sigma, fit->gcv_cov.xi);

        *out = fit.release();
    });
}

tpk_status tpk_fit_save(const tpk_fit* fit, const char* directory) {
    if (!fit || !directory) return fail(TPK_ERR_INVALID, "tpk_fit_save: null argument");
    return guarded([&] {
        const std::filesystem::path dir(directory);
        std::filesystem::create_directories(dir);
        tpk::write_matrix_csv(fit->A, (dir / "A.csv").string());
        tpk::write_matrix_csv(fit->M, (dir / "M.csv").string());
        tpk::write_matrix_csv(fit->Sigma, (dir / "Sigma.csv").string());
        tpk::write_matrix_csv(fit->B, (dir / "B.csv").string());
        tpk::write_matrix_csv(fit->C, (dir / "C.csv").string());
        write_gcv_csv(fit->gcv_mean, (dir / "gcv_mean.csv").string());
        write_gcv_csv(fit->gcv_cov, (dir / "gcv_cov.csv").string());

        json sites = json::array();
        for (const auto& s : fit->sites)
            sites.push_back({{"id", s.id}, {"x", s.position.x()}, {"y", s.position.y()}});
        const tpk::Rect region = fit->sbasis->region();
        const json manifest = {
            {"format", "tpkrige-fit"},
            {"version", tpk_version()},
            {"domain", {{"a", fit->domain.a}, {"b", fit->domain.b}}},
            {"time_basis",
             {{"order", fit->tbasis->order()},
              {"interior_knots", interior_knots_of(*fit->tbasis)}}},
            {"space_basis",
             {{"order", fit->sbasis->axis1().order()},
              {"interior_knots_x", interior_knots_of(fit->sbasis->axis1())},
              {"interior_knots_y", interior_knots_of(fit->sbasis->axis2())},
              {"region",
               {{"x0", region.x0}, {"x1", region.x1}, {"y0", region.y0}, {"y1", region.y1}}}}},
            {"gcv_mean", gcv_to_json(fit->gcv_mean)},
            {"gcv_cov", gcv_to_json(fit->gcv_cov)},
            {"sites", sites},
        };
        std::ofstream out(dir / "manifest.json");
        if (!out) throw tpk::invalid_input("cannot write manifest in " + dir.string());
        out << manifest.dump(2) << '\n';
    });
}

tpk_status tpk_fit_load(const char* directory, tpk_fit** out) {
    if (!directory || !out) return fail(TPK_ERR_INVALID, "tpk_fit_load: null argument");
    return guarded([&] {
        const std::filesystem::path dir(directory);
        std::ifstream in(dir / "manifest.json");
        if (!in)
            throw tpk::invalid_input("missing fit manifest: " + (dir / "manifest.json").string());
        json manifest;
        in >> manifest;
        if (manifest.value("format", "") != "tpkrige-fit")
            throw tpk::invalid_input("not a fit directory: " + dir.string());

        auto fit = std::make_unique<tpk_fit>();
        fit->domain = tpk::TimeDomain(manifest.at("domain").at("a").get<double>(),
                                      manifest.at("domain").at("b").get<double>());
        for (const auto& s : manifest.at("sites")) {
            tpk::Site site;
            site.id = s.at("id").get<std::string>();
            site.position =
                Eigen::Vector2d(s.at("x").get<double>(), s.at("y").get<double>());
            fit->sites.push_back(std::move(site));
        }
        fit->tbasis = std::make_unique<tpk::SplineBasis>(tpk::SplineBasis::with_interior_knots(
            fit->domain, manifest.at("time_basis").at("order").get<int>(),
            manifest.at("time_basis").at("interior_knots").get<std::vector<double>>()));
        const auto& sb = manifest.at("space_basis");
        const auto& region = sb.at("region");
        const int sorder = sb.at("order").get<int>();
        fit->sbasis = std::make_unique<tpk::SpatialBasis>(
            tpk::SplineBasis::with_interior_knots(
                tpk::TimeDomain(region.at("x0").get<double>(), region.at("x1").get<double>()),
                sorder, sb.at("interior_knots_x").get<std::vector<double>>()),
            tpk::SplineBasis::with_interior_knots(
                tpk::TimeDomain(region.at("y0").get<double>(), region.at("y1").get<double>()),
                sorder, sb.at("interior_knots_y").get<std::vector<double>>()));
        fit->gcv_mean = gcv_from_json(manifest.at("gcv_mean"));
        fit->gcv_cov = gcv_from_json(manifest.at("gcv_cov"));

        fit->gram = fit->tbasis->gram();
        fit->gamma = tpk::spatial_design(*fit->sbasis, fit->site_set());
        fit->A = tpk::read_matrix_csv((dir / "A.csv").string());
        fit->M = tpk::read_matrix_csv((dir / "M.csv").string());
        fit->Sigma = tpk::read_matrix_csv((dir / "Sigma.csv").string());
        fit->B = tpk::read_matrix_csv((dir / "B.csv").string());
        fit->C = tpk::read_matrix_csv((dir / "C.csv").string());

        const auto d = static_cast<Eigen::Index>(fit->sites.size());
        const Eigen::Index p = fit->tbasis->dimension();
        const Eigen::Index q = fit->sbasis->dimension();
        if (fit->A.rows() != p || fit->A.cols() != d || fit->M.rows() != d ||
            fit->Sigma.rows() != d || fit->B.rows() != p || fit->B.cols() != q ||
            fit->C.rows() != q || fit->C.cols() != q)
            throw tpk::invalid_input("fit artifacts do not match the manifest's bases");
        *out = fit.release();
    });
}

tpk_status tpk_pattern_from_events_with_fit_domain(const tpk_fit* fit, const char* events_csv,
                                                   const char* sites_csv, tpk_pattern** out) {
    if (!fit || !events_csv || !sites_csv || !out)
        return fail(TPK_ERR_INVALID, "tpk_pattern_from_events_with_fit_domain: null argument");
    return tpk_pattern_from_events(events_csv, sites_csv, fit->domain.a, fit->domain.b, out);
}

tpk_status tpk_fit_info(const tpk_fit* fit, double* xi_mean, double* df_mean, double* xi_cov,
                        double* df_cov) {
    if (!fit) return fail(TPK_ERR_INVALID, "tpk_fit_info: null fit");
    if (xi_mean) *xi_mean = fit->gcv_mean.xi;
    if (df_mean) *df_mean = fit->gcv_mean.df;
    if (xi_cov) *xi_cov = fit->gcv_cov.xi;
    if (df_cov) *df_cov = fit->gcv_cov.df;
    return TPK_OK;
}

void tpk_fit_free(tpk_fit* fit) { delete fit; }

tpk_status tpk_krige_solve(const tpk_fit* fit, double x, double y, double threshold_m,
                           double threshold_sigma, tpk_krige** out) {
    if (!fit || !out) return fail(TPK_ERR_INVALID, "tpk_krige_solve: null argument");
    return guarded([&] {
        const Eigen::Vector2d target(x, y);
        const Eigen::VectorXd mu0 = tpk::mean_coeffs_at(fit->B, *fit->sbasis, target);
        const Eigen::VectorXd m0 = tpk::m0_vector(fit->A, fit->gram, mu0);
        const tpk::CovAtSite at = tpk::cov_at(fit->C, fit->gamma, *fit->sbasis, target);
        auto solution = std::make_unique<tpk_krige>();
        solution->solution = tpk::solve_kriging(fit->Sigma, fit->M, at.sigma0, m0, at.sigma00,
                                                threshold_m, threshold_sigma);
        solution->target = target;
        solution->domain = fit->domain;
        for (const auto& s : fit->sites) solution->site_ids.push_back(s.id);
        *out = solution.release();
    });
}

int tpk_krige_rank_m(const tpk_krige* solution) {
    return solution ? solution->solution.rank_m : -1;
}

int tpk_krige_rank_sigma(const tpk_krige* solution) {
    return solution ? solution->solution.rank_sigma : -1;
}

double tpk_krige_spe(const tpk_krige* solution) {
    return solution ? solution->solution.spe_estimate : 0.0;
}

tpk_status tpk_krige_weights(const tpk_krige* solution, double* out, size_t size) {
    if (!solution || !out) return fail(TPK_ERR_INVALID, "tpk_krige_weights: null argument");
    const auto d = static_cast<size_t>(solution->solution.weights.size());
    if (size < d) return fail(TPK_ERR_INVALID, "tpk_krige_weights: buffer too small");
    std::memcpy(out, solution->solution.weights.data(), d * sizeof(double));
    return TPK_OK;
}

tpk_status tpk_krige_save(const tpk_krige* solution, const char* directory) {
    if (!solution || !directory) return fail(TPK_ERR_INVALID, "tpk_krige_save: null argument");
    return guarded([&] {
        const std::filesystem::path dir(directory);
        std::filesystem::create_directories(dir);
        std::ofstream weights(dir / "weights.csv");
        if (!weights) throw tpk::invalid_input("cannot write weights in " + dir.string());
        weights.precision(17);
        weights << "site,weight\n";
        for (Eigen::Index j = 0; j < solution->solution.weights.size(); ++j)
            weights << solution->site_ids[static_cast<std::size_t>(j)] << ','
                    << solution->solution.weights[j] << '\n';
        const json manifest = {
            {"format", "tpkrige-solution"},
            {"target", {{"x", solution->target.x()}, {"y", solution->target.y()}}},
            {"domain", {{"a", solution->domain.a}, {"b", solution->domain.b}}},
            {"rank_m", solution->solution.rank_m},
            {"rank_sigma", solution->solution.rank_sigma},
            {"threshold_m", solution->solution.threshold_m},
            {"threshold_sigma", solution->solution.threshold_sigma},
            {"spe_estimate", solution->solution.spe_estimate},
            {"constraint_residual", solution->solution.constraint_residual},
            {"kkt_residual", solution->solution.kkt_residual},
        };
        std::ofstream out(dir / "solution.json");
        if (!out) throw tpk::invalid_input("cannot write solution manifest in " + dir.string());
        out << manifest.dump(2) << '\n';
    });
}

tpk_status tpk_krige_load(const char* directory, const tpk_fit* fit, tpk_krige** out) {
    if (!directory || !fit || !out)
        return fail(TPK_ERR_INVALID, "tpk_krige_load: null argument");
    return guarded([&] {
        const std::filesystem::path dir(directory);
        std::ifstream in(dir / "solution.json");
        if (!in)
            throw tpk::invalid_input("missing solution manifest: " +
                                     (dir / "solution.json").string());
        json manifest;
        in >> manifest;
        if (manifest.value("format", "") != "tpkrige-solution")
            throw tpk::invalid_input("not a solution directory: " + dir.string());
        auto solution = std::make_unique<tpk_krige>();
        solution->target = Eigen::Vector2d(manifest.at("target").at("x").get<double>(),
                                           manifest.at("target").at("y").get<double>());
        solution->domain = tpk::TimeDomain(manifest.at("domain").at("a").get<double>(),
                                           manifest.at("domain").at("b").get<double>());
        auto& sol = solution->solution;
        sol.rank_m = manifest.at("rank_m").get<int>();
        sol.rank_sigma = manifest.at("rank_sigma").get<int>();
        sol.threshold_m = manifest.at("threshold_m").get<double>();
        sol.threshold_sigma = manifest.at("threshold_sigma").get<double>();
        sol.spe_estimate = manifest.at("spe_estimate").get<double>();
        sol.constraint_residual = manifest.at("constraint_residual").get<double>();
        sol.kkt_residual = manifest.at("kkt_residual").get<double>();

        std::ifstream weights(dir / "weights.csv");
        if (!weights) throw tpk::invalid_input("missing weights.csv in " + dir.string());
        std::string line;
        if (!std::getline(weights, line) || line.rfind("site,weight", 0) != 0)
            throw tpk::invalid_input("weights.csv: expected header 'site,weight'");
        std::vector<double> values;
        std::vector<std::string> ids;
        while (std::getline(weights, line)) {
            if (line.empty()) continue;
            const auto comma = line.rfind(',');
            if (comma == std::string::npos)
                throw tpk::invalid_input("weights.csv: malformed row '" + line + "'");
            ids.push_back(line.substr(0, comma));
            values.push_back(std::stod(line.substr(comma + 1)));
        }
        if (static_cast<Eigen::Index>(values.size()) !=
            static_cast<Eigen::Index>(fit->sites.size()))
            throw tpk::invalid_input("weights.csv does not match the fit's site count");
        for (std::size_t j = 0; j < ids.size(); ++j)
            if (ids[j] != fit->sites[j].id)
                throw tpk::invalid_input("weights.csv site order does not match the fit");
        sol.weights = Eigen::Map<Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
        solution->site_ids = ids;
        *out = solution.release();
    });
}

tpk_status tpk_krige_predict_counts(const tpk_krige* solution, const tpk_pattern* pattern,
                                    int grid_points, const char* out_csv) {
    if (!solution || !pattern || !out_csv)
        return fail(TPK_ERR_INVALID, "tpk_krige_predict_counts: null argument");
    return guarded([&] {
        const tpk::PointPattern& pat = *pattern->pattern;
        if (pat.sites() != static_cast<int>(solution->site_ids.size()))
            throw tpk::invalid_input("pattern sites do not match the kriging weights");
        for (int j = 0; j < pat.sites(); ++j)
            if (pat.site_set()[j].id != solution->site_ids[static_cast<std::size_t>(j)])
                throw tpk::invalid_input("pattern site order does not match the kriging weights");
        if (!(pat.domain() == solution->domain))
            throw tpk::invalid_input("pattern domain does not match the fit");
        if (grid_points < 2) grid_points = 241;
        std::ofstream out(out_csv);
        if (!out) throw tpk::invalid_input(std::string("cannot write file: ") + out_csv);
        out.precision(17);
        out << "replicate,time,count\n";
        for (int i = 0; i < pat.replicates(); ++i) {
            const tpk::CountFunction predicted =
                tpk::predict_counts(pat, solution->solution.weights, i);
            const std::vector<double> values = predicted.sample(grid_points);
            for (int g = 0; g < grid_points; ++g) {
                const double t =
                    pat.domain().a + pat.domain().length() * g / (grid_points - 1.0);
                out << (i + 1) << ',' << t << ',' << values[static_cast<std::size_t>(g)] << '\n';
            }
        }
    });
}

tpk_status tpk_krige_count_error(const tpk_krige* solution, const tpk_pattern* pattern,
                                 const tpk_pattern* holdout, double* out_error) {
    if (!solution || !pattern || !holdout || !out_error)
        return fail(TPK_ERR_INVALID, "tpk_krige_count_error: null argument");
    return guarded([&] {
        const tpk::PointPattern& pat = *pattern->pattern;
        const tpk::PointPattern& held = *holdout->pattern;
        if (held.sites() != 1)
            throw tpk::invalid_input("holdout pattern must contain exactly one site");
        if (held.replicates() != pat.replicates())
            throw tpk::invalid_input("holdout replicate count does not match the pattern");
        if (!(held.domain() == pat.domain()))
            throw tpk::invalid_input("holdout domain does not match the pattern");
        std::vector<tpk::CountFunction> observed, predicted;
        observed.reserve(static_cast<std::size_t>(pat.replicates()));
        predicted.reserve(static_cast<std::size_t>(pat.replicates()));
        for (int i = 0; i < pat.replicates(); ++i) {
            observed.push_back(tpk::count_function(held, i, 0));
            predicted.push_back(tpk::predict_counts(pat, solution->solution.weights, i));
        }
        *out_error = tpk::count_prediction_error(observed, predicted);
    });
}

void tpk_krige_free(tpk_krige* solution) { delete solution; }

tpk_status tpk_study_run(const char* config_path, const char* out_csv) {
    if (!config_path || !out_csv) return fail(TPK_ERR_INVALID, "tpk_study_run: null argument");
    return guarded([&] {
        const tpk::KeyValueConfig kv = tpk::KeyValueConfig::load(config_path);
        const tpk::StudyConfig config = tpk::StudyConfig::from_config(kv);
        const std::vector<tpk::StudyCellResult> results = tpk::run_study(config);
        tpk::write_study_table(out_csv, results);
        tpk::write_study_detail(std::string(out_csv) + ".detail.csv", results);
        for (const auto& cell : results)
            if (cell.failed)
                throw tpk::numeric_error("study cell (grid " + tpk::grid_name(cell.grid) +
                                         ", model " + tpk::model_name(cell.model) + ", n=" +
                                         std::to_string(cell.n) + ") failed: " + cell.error);
    });
}

}  // extern "C"
