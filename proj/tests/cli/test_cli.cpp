// Drives the installed CLI binary end to end: exit codes, artifacts on
// disk, byte-level reproducibility. TPK_CLI_PATH is injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("tpk_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string full = (path / name).string();
        std::ofstream out(full);
        out << content;
        return full;
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string command = std::string(TPK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_inputs(const TempDir& dir, std::string& trips, std::string& sites,
                  std::string& calendar) {
    sites = dir.file("sites.csv",
                     "site,x,y\nA,0,0\nB,1,0\nC,0,1\nD,1,1\nE,0.5,0.2\nF,0.2,0.7\n");
    std::ostringstream cal;
    for (int day = 1; day <= 12; ++day)
        cal << "2016-03-" << (day < 10 ? "0" : "") << day << '\n';
    calendar = dir.file("days.txt", cal.str());
    std::ostringstream t;
    t << "station,start_time\n";
    unsigned state = 777;
    auto next = [&state]() {
        state = state * 1664525u + 1013904223u;
        return (state >> 8) / 16777216.0;
    };
    const char* ids[6] = {"A", "B", "C", "D", "E", "F"};
    for (int day = 1; day <= 12; ++day) {
        // shared day-level busyness so the intensity covariance is positive
        const int busy = static_cast<int>(next() * 4);
        for (int j = 0; j < 6; ++j) {
            const int count = 2 + 5 * busy + static_cast<int>(next() * 2);
            for (int k = 0; k < count; ++k) {
                const int hour = 6 + static_cast<int>(next() * 14);
                const int minute = static_cast<int>(next() * 60);
                t << ids[j] << ",2016-03-" << (day < 10 ? "0" : "") << day << "T"
                  << (hour < 10 ? "0" : "") << hour << ':' << (minute < 10 ? "0" : "")
                  << minute << ":00\n";
            }
        }
    }
    trips = dir.file("trips.csv", t.str());
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("ingest --trips missing.csv --sites missing.csv --calendar missing.txt "
                  "--out /dev/null") == 2);
    TempDir dir;
    CHECK(run_cli("fit --events /no/file.csv --sites /no/sites.csv --out " + dir.sub("f")) ==
          2);
}

TEST_CASE("ingest, fit, krige, predict round trip") {
    TempDir dir;
    std::string trips, sites, calendar;
    write_inputs(dir, trips, sites, calendar);

    const std::string events = dir.sub("events.csv");
    REQUIRE(run_cli("ingest --trips " + trips + " --sites " + sites + " --calendar " +
                    calendar + " --out " + events) == 0);
    CHECK(read_file(events).find("replicate,site,time") == 0);

    // identical inputs give byte-identical output
    const std::string events2 = dir.sub("events2.csv");
    REQUIRE(run_cli("ingest --trips " + trips + " --sites " + sites + " --calendar " +
                    calendar + " --out " + events2) == 0);
    CHECK(read_file(events) == read_file(events2));

    const std::string config = dir.file("run.cfg",
                                        "domain_a = 0\n"
                                        "domain_b = 24\n"
                                        "time_order = 4\n"
                                        "time_knots = 2\n"
                                        "space_order = 4\n"
                                        "space_knots = 0\n"
                                        "xi_points = 5\n");
    const std::string fit_dir = dir.sub("fit");
    REQUIRE(run_cli("fit --events " + events + " --sites " + sites + " --config " + config +
                    " --out " + fit_dir) == 0);
    CHECK(std::filesystem::exists(fit_dir + "/manifest.json"));
    CHECK(std::filesystem::exists(fit_dir + "/B.csv"));
    CHECK(std::filesystem::exists(fit_dir + "/C.csv"));
    CHECK(std::filesystem::exists(fit_dir + "/gcv_mean.csv"));

    const std::string krige_dir = dir.sub("krige");
    REQUIRE(run_cli("krige --fit " + fit_dir + " --target-x 0.4 --target-y 0.5 --events " +
                    events + " --sites " + sites + " --out " + krige_dir) == 0);
    CHECK(std::filesystem::exists(krige_dir + "/weights.csv"));
    CHECK(std::filesystem::exists(krige_dir + "/solution.json"));
    CHECK(std::filesystem::exists(krige_dir + "/predicted_counts.csv"));

    const std::string pred = dir.sub("pred.csv");
    REQUIRE(run_cli("predict --fit " + fit_dir + " --solution " + krige_dir + " --events " +
                    events + " --sites " + sites + " --grid 25 --out " + pred) == 0);
    CHECK(read_file(pred).find("replicate,time,count") == 0);

    // target outside the fitted region is a usage error
    CHECK(run_cli("krige --fit " + fit_dir + " --target-x 9 --target-y 9 --out " +
                  dir.sub("bad")) == 2);
    // missing fit artifacts
    CHECK(run_cli("krige --fit " + dir.sub("nofit") + " --target-x 0.4 --target-y 0.5 --out " +
                  dir.sub("bad2")) == 2);
}

TEST_CASE("krige with a held-out station reports the error metric") {
    TempDir dir;
    std::string trips, sites, calendar;
    write_inputs(dir, trips, sites, calendar);
    const std::string events = dir.sub("events.csv");
    REQUIRE(run_cli("ingest --trips " + trips + " --sites " + sites + " --calendar " +
                    calendar + " --out " + events) == 0);
    const std::string fit_dir = dir.sub("fit");
    REQUIRE(run_cli("fit --events " + events + " --sites " + sites +
                    " --set time_knots=2 --set space_knots=0 --set xi_points=5 --out " +
                    fit_dir) == 0);

    const std::string holdout_sites = dir.file("hs.csv", "site,x,y\nH,0.45,0.55\n");
    std::ostringstream he;
    he << "replicate,site,time\n";
    for (int rep = 1; rep <= 12; ++rep) he << rep << ",H,12.0\n";
    const std::string holdout_events = dir.file("he.csv", he.str());

    const std::string krige_dir = dir.sub("krige");
    REQUIRE(run_cli("krige --fit " + fit_dir + " --target-x 0.45 --target-y 0.55 --events " +
                    events + " --sites " + sites + " --holdout-events " + holdout_events +
                    " --holdout-sites " + holdout_sites + " --out " + krige_dir) == 0);
}

TEST_CASE("simulate subcommand emits the study table") {
    TempDir dir;
    const std::string config = dir.file("study.cfg",
                                        "grids = ii\n"
                                        "models = 2\n"
                                        "n = 8\n"
                                        "mc_reps = 2\n"
                                        "seed = 7\n"
                                        "xi_points = 3\n"
                                        "space_knots = 1\n"
                                        "threads = 2\n");
    const std::string out = dir.sub("table.csv");
    REQUIRE(run_cli("simulate --config " + config + " --out " + out) == 0);
    CHECK(read_file(out).find("grid,n") == 0);

    const std::string out2 = dir.sub("table2.csv");
    REQUIRE(run_cli("simulate --config " + config + " --out " + out2) == 0);
    CHECK(read_file(out) == read_file(out2));
}
