// Command-line front end. Links the C API only; all numerical work happens
// behind the library boundary.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpkrige.h"

namespace {

// Exit codes: 0 success, 1 numerical failure, 2 usage/input error.
int exit_code(tpk_status status) {
    switch (status) {
        case TPK_OK:
            return 0;
        case TPK_ERR_NUMERIC:
            return 1;
        default:
            return 2;
    }
}

int check(tpk_status status) {
    if (status != TPK_OK) {
        std::fprintf(stderr, "tpkrige: error: %s\n", tpk_last_error());
        std::exit(exit_code(status));
    }
    return 0;
}

struct ConfigHandle {
    tpk_config* ptr = nullptr;
    ~ConfigHandle() { tpk_config_free(ptr); }
};

struct PatternHandle {
    tpk_pattern* ptr = nullptr;
    ~PatternHandle() { tpk_pattern_free(ptr); }
};

struct FitHandle {
    tpk_fit* ptr = nullptr;
    ~FitHandle() { tpk_fit_free(ptr); }
};

struct KrigeHandle {
    tpk_krige* ptr = nullptr;
    ~KrigeHandle() { tpk_krige_free(ptr); }
};

void load_config(ConfigHandle& config, const std::string& path,
                 const std::vector<std::string>& overrides) {
    if (path.empty())
        check(tpk_config_create(&config.ptr));
    else
        check(tpk_config_load(path.c_str(), &config.ptr));
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "tpkrige: error: --set expects key=value, got '%s'\n",
                         kv.c_str());
            std::exit(2);
        }
        check(tpk_config_set(config.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
}

double config_double(const ConfigHandle& config, const char* key, double fallback) {
    char buf[128];
    if (tpk_config_get(config.ptr, key, buf, sizeof(buf)) != TPK_OK) return fallback;
    try {
        return std::stod(buf);
    } catch (const std::exception&) {
        std::fprintf(stderr, "tpkrige: error: config key '%s' is not a number: '%s'\n", key,
                     buf);
        std::exit(2);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial kriging for replicated temporal point processes"};
    app.require_subcommand(1);

    // ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand(
        "ingest", "Convert trip records plus a calendar into an event CSV");
    std::string trips, sites, calendar, ingest_out;
    ingest->add_option("--trips", trips, "Trip CSV (station,start_time)")->required();
    ingest->add_option("--sites", sites, "Site CSV (site,x,y)")->required();
    ingest->add_option("--calendar", calendar, "Calendar file, one ISO date per line")
        ->required();
    ingest->add_option("--out", ingest_out, "Output event CSV")->required();

    // fit ------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand(
        "fit", "Estimate moments and fit the penalized spatial surfaces");
    std::string fit_events, fit_sites, fit_config, fit_out;
    std::vector<std::string> fit_sets;
    double domain_a_flag = 0.0, domain_b_flag = 0.0;
    bool has_domain_a = false, has_domain_b = false;
    fit_cmd->add_option("--events", fit_events, "Event CSV")->required();
    fit_cmd->add_option("--sites", fit_sites, "Site CSV")->required();
    fit_cmd->add_option("--config", fit_config, "key = value config file");
    fit_cmd->add_option("--set", fit_sets, "Override a config key (key=value), repeatable");
    fit_cmd->add_option("--domain-a", domain_a_flag, "Domain lower bound")
        ->each([&](const std::string&) { has_domain_a = true; });
    fit_cmd->add_option("--domain-b", domain_b_flag, "Domain upper bound")
        ->each([&](const std::string&) { has_domain_b = true; });
    fit_cmd->add_option("--out", fit_out, "Output directory for the fit artifacts")
        ->required();

    // krige ----------------------------------------------------------
    auto* krige_cmd = app.add_subcommand(
        "krige", "Solve for kriging weights at a target site and predict counts");
    std::string krige_fit, krige_out, krige_events, krige_sites;
    std::string holdout_events, holdout_sites;
    double target_x = 0.0, target_y = 0.0;
    double threshold_m = 0.9, threshold_sigma = 0.9;
    int krige_grid = 241;
    krige_cmd->add_option("--fit", krige_fit, "Fit artifact directory")->required();
    krige_cmd->add_option("--target-x", target_x, "Target x coordinate")->required();
    krige_cmd->add_option("--target-y", target_y, "Target y coordinate")->required();
    krige_cmd->add_option("--threshold-m", threshold_m,
                          "Eigenvalue mass kept in the constraint matrix (default 0.9)");
    krige_cmd->add_option("--threshold-sigma", threshold_sigma,
                          "Eigenvalue mass kept in the covariance matrix (default 0.9)");
    krige_cmd->add_option("--events", krige_events,
                          "Event CSV for per-replicate count predictions");
    krige_cmd->add_option("--sites", krige_sites, "Site CSV matching --events");
    krige_cmd->add_option("--holdout-events", holdout_events,
                          "Held-out station's event CSV for the error metric");
    krige_cmd->add_option("--holdout-sites", holdout_sites,
                          "Site CSV containing exactly the held-out station");
    krige_cmd->add_option("--grid", krige_grid, "Sample points for output curves (default 241)");
    krige_cmd->add_option("--out", krige_out, "Output directory")->required();

    // predict --------------------------------------------------------
    auto* predict_cmd = app.add_subcommand(
        "predict", "Predict count curves from saved weights and an event file");
    std::string pred_fit, pred_solution, pred_events, pred_sites, pred_out;
    int pred_grid = 241;
    predict_cmd->add_option("--fit", pred_fit, "Fit artifact directory")->required();
    predict_cmd->add_option("--solution", pred_solution, "Kriging solution directory")
        ->required();
    predict_cmd->add_option("--events", pred_events, "Event CSV")->required();
    predict_cmd->add_option("--sites", pred_sites, "Site CSV")->required();
    predict_cmd->add_option("--grid", pred_grid, "Sample points (default 241)");
    predict_cmd->add_option("--out", pred_out, "Output CSV")->required();

    // simulate -------------------------------------------------------
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Run the Monte Carlo study described by a config file");
    std::string sim_config, sim_out;
    sim_cmd->add_option("--config", sim_config, "Study config file")->required();
    sim_cmd->add_option("--out", sim_out, "Output CSV table")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    if (*ingest) {
        PatternHandle pattern;
        check(tpk_pattern_from_trips(trips.c_str(), sites.c_str(), calendar.c_str(),
                                     &pattern.ptr));
        check(tpk_pattern_save_events(pattern.ptr, ingest_out.c_str()));
        std::printf("ingested %d replicates at %d sites -> %s\n",
                    tpk_pattern_replicates(pattern.ptr), tpk_pattern_sites(pattern.ptr),
                    ingest_out.c_str());
        return 0;
    }

    if (*fit_cmd) {
        ConfigHandle config;
        load_config(config, fit_config, fit_sets);
        const double a = has_domain_a ? domain_a_flag : config_double(config, "domain_a", 0.0);
        const double b = has_domain_b ? domain_b_flag : config_double(config, "domain_b", 24.0);
        PatternHandle pattern;
        check(tpk_pattern_from_events(fit_events.c_str(), fit_sites.c_str(), a, b,
                                      &pattern.ptr));
        FitHandle fit;
        check(tpk_fit_compute(pattern.ptr, config.ptr, &fit.ptr));
        check(tpk_fit_save(fit.ptr, fit_out.c_str()));
        double xi_mean = 0, df_mean = 0, xi_cov = 0, df_cov = 0;
        check(tpk_fit_info(fit.ptr, &xi_mean, &df_mean, &xi_cov, &df_cov));
        std::printf("fit %d replicates at %d sites -> %s\n",
                    tpk_pattern_replicates(pattern.ptr), tpk_pattern_sites(pattern.ptr),
                    fit_out.c_str());
        std::printf("mean surface: xi = %.6g (df = %.3f)\n", xi_mean, df_mean);
        std::printf("covariance surface: xi = %.6g (df = %.3f)\n", xi_cov, df_cov);
        return 0;
    }

    if (*krige_cmd) {
        FitHandle fit;
        check(tpk_fit_load(krige_fit.c_str(), &fit.ptr));
        KrigeHandle solution;
        check(tpk_krige_solve(fit.ptr, target_x, target_y, threshold_m, threshold_sigma,
                              &solution.ptr));
        check(tpk_krige_save(solution.ptr, krige_out.c_str()));
        std::printf("kriging at (%g, %g): rank_m = %d, rank_sigma = %d, spe = %.6g -> %s\n",
                    target_x, target_y, tpk_krige_rank_m(solution.ptr),
                    tpk_krige_rank_sigma(solution.ptr), tpk_krige_spe(solution.ptr),
                    krige_out.c_str());
        if (!krige_events.empty()) {
            if (krige_sites.empty()) {
                std::fprintf(stderr, "tpkrige: error: --events requires --sites\n");
                return 2;
            }
            PatternHandle pattern;
            check(tpk_pattern_from_events_with_fit_domain(fit.ptr, krige_events.c_str(),
                                                          krige_sites.c_str(), &pattern.ptr));
            const std::string counts_path = krige_out + "/predicted_counts.csv";
            check(tpk_krige_predict_counts(solution.ptr, pattern.ptr, krige_grid,
                                           counts_path.c_str()));
            std::printf("predicted counts -> %s\n", counts_path.c_str());
            if (!holdout_events.empty()) {
                if (holdout_sites.empty()) {
                    std::fprintf(stderr,
                                 "tpkrige: error: --holdout-events requires --holdout-sites\n");
                    return 2;
                }
                PatternHandle holdout;
                check(tpk_pattern_from_events_with_fit_domain(
                    fit.ptr, holdout_events.c_str(), holdout_sites.c_str(), &holdout.ptr));
                double error = 0.0;
                check(tpk_krige_count_error(solution.ptr, pattern.ptr, holdout.ptr, &error));
                std::printf("root average squared count error: %.6g\n", error);
            }
        }
        return 0;
    }

    if (*predict_cmd) {
        FitHandle fit;
        check(tpk_fit_load(pred_fit.c_str(), &fit.ptr));
        KrigeHandle solution;
        check(tpk_krige_load(pred_solution.c_str(), fit.ptr, &solution.ptr));
        PatternHandle pattern;
        check(tpk_pattern_from_events_with_fit_domain(fit.ptr, pred_events.c_str(),
                                                      pred_sites.c_str(), &pattern.ptr));
        check(tpk_krige_predict_counts(solution.ptr, pattern.ptr, pred_grid, pred_out.c_str()));
        std::printf("predicted counts -> %s\n", pred_out.c_str());
        return 0;
    }

    if (*sim_cmd) {
        check(tpk_study_run(sim_config.c_str(), sim_out.c_str()));
        std::printf("study table -> %s\n", sim_out.c_str());
        return 0;
    }

    return 2;
}
