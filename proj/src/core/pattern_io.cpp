#include "core/pattern_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace tpk {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw invalid_input(context + ": cannot parse number '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw invalid_input(context + ": cannot parse integer '" + s + "'");
    return v;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path);
    return in;
}

}  // namespace

SiteSet read_sites_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "site,x,y")
        throw invalid_input(path + ": expected header 'site,x,y'");
    std::vector<Site> sites;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (fields.size() != 3) throw invalid_input(where + ": expected 3 fields");
        Site s;
        s.id = trim(fields[0]);
        if (s.id.empty()) throw invalid_input(where + ": empty site id");
        s.position = Eigen::Vector2d(parse_double(fields[1], where), parse_double(fields[2], where));
        sites.push_back(std::move(s));
    }
    return SiteSet(std::move(sites));
}

PointPattern read_events_csv(const std::string& path, const SiteSet& sites,
                             const TimeDomain& domain) {
    std::ifstream in = open_or_throw(path);
    return read_events_csv(in, path, sites, domain);
}

PointPattern read_events_csv(std::istream& in, const std::string& name, const SiteSet& sites,
                             const TimeDomain& domain) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "replicate,site,time")
        throw invalid_input(name + ": expected header 'replicate,site,time'");
    struct Row {
        long replicate;
        int site;
        double time;
    };
    std::vector<Row> rows;
    std::set<long> labels;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = name + ":" + std::to_string(line_no);
        if (fields.size() != 3) throw invalid_input(where + ": expected 3 fields");
        Row row;
        row.replicate = parse_long(fields[0], where);
        const std::string site_id = trim(fields[1]);
        row.site = sites.index_of(site_id);
        if (row.site < 0) throw invalid_input(where + ": unknown site id '" + site_id + "'");
        row.time = parse_double(fields[2], where);
        if (!domain.contains(row.time))
            throw invalid_input(where + ": time " + std::to_string(row.time) +
                                " outside domain [" + std::to_string(domain.a) + ", " +
                                std::to_string(domain.b) + "]");
        labels.insert(row.replicate);
        rows.push_back(row);
    }
    if (labels.empty())
        throw invalid_input(name + ": no events; a pattern needs at least one replicate");
    std::map<long, int> dense;
    int next = 0;
    for (long label : labels) dense[label] = next++;
    std::vector<std::vector<std::vector<double>>> events(
        labels.size(), std::vector<std::vector<double>>(static_cast<std::size_t>(sites.size())));
    for (const Row& row : rows)
        events[static_cast<std::size_t>(dense[row.replicate])][static_cast<std::size_t>(row.site)]
            .push_back(row.time);
    return PointPattern(domain, sites, std::move(events));
}

void write_events_csv(const PointPattern& pattern, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    write_events_csv(pattern, out);
}

void write_events_csv(const PointPattern& pattern, std::ostream& out) {
    out << "replicate,site,time\n";
    out.precision(17);
    for (int i = 0; i < pattern.replicates(); ++i)
        for (int j = 0; j < pattern.sites(); ++j)
            for (double t : pattern.events(i, j))
                out << (i + 1) << ',' << pattern.site_set()[j].id << ',' << t << '\n';
}

namespace {

struct Timestamp {
    int year, month, day;
    double hours;  // wall-clock hours within the day
};

// Accepts YYYY-MM-DD[T ]HH:MM[:SS[.frac]]; any trailing zone designator is
// ignored (times are wall-clock by convention).
Timestamp parse_iso_timestamp(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double second = 0.0;
    if (t.size() < 16 || t[4] != '-' || t[7] != '-' || (t[10] != 'T' && t[10] != ' ') ||
        t[13] != ':')
        throw invalid_input(context + ": cannot parse timestamp '" + s + "'");
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(t.data() + pos, t.data() + pos + len, v);
        if (ec != std::errc() || ptr != t.data() + pos + len)
            throw invalid_input(context + ": cannot parse timestamp '" + s + "'");
        return v;
    };
    year = num(0, 4);
    month = num(5, 2);
    day = num(8, 2);
    hour = num(11, 2);
    minute = num(14, 2);
    if (t.size() >= 19 && t[16] == ':') {
        std::size_t end = 19;
        while (end < t.size() && (std::isdigit(static_cast<unsigned char>(t[end])) || t[end] == '.'))
            ++end;
        second = parse_double(t.substr(17, end - 17), context);
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
        second >= 61.0)
        throw invalid_input(context + ": timestamp fields out of range in '" + s + "'");
    Timestamp ts;
    ts.year = year;
    ts.month = month;
    ts.day = day;
    ts.hours = hour + minute / 60.0 + second / 3600.0;
    return ts;
}

std::string date_key(int year, int month, int day) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

}  // namespace

PointPattern read_trips_csv(const std::string& trips_path, const SiteSet& sites,
                            const std::string& calendar_path) {
    // Calendar: one ISO date per line; every listed date becomes a replicate,
    // in ascending date order, even if it has no trips.
    std::ifstream cal = open_or_throw(calendar_path);
    std::set<std::string> dates;
    std::string line;
    int line_no = 0;
    while (std::getline(cal, line)) {
        ++line_no;
        const std::string d = trim(line);
        if (d.empty() || d[0] == '#') continue;
        if (d.size() != 10 || d[4] != '-' || d[7] != '-')
            throw invalid_input(calendar_path + ":" + std::to_string(line_no) +
                                ": expected ISO date, got '" + d + "'");
        dates.insert(d);
    }
    if (dates.empty()) throw invalid_input(calendar_path + ": empty calendar");
    std::map<std::string, int> replicate_of;
    int next = 0;
    for (const std::string& d : dates) replicate_of[d] = next++;

    const TimeDomain domain(0.0, 24.0);
    std::vector<std::vector<std::vector<double>>> events(
        dates.size(), std::vector<std::vector<double>>(static_cast<std::size_t>(sites.size())));

    std::ifstream in = open_or_throw(trips_path);
    if (!std::getline(in, line) || trim(line) != "station,start_time")
        throw invalid_input(trips_path + ": expected header 'station,start_time'");
    line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = trips_path + ":" + std::to_string(line_no);
        if (fields.size() != 2) throw invalid_input(where + ": expected 2 fields");
        const std::string station = trim(fields[0]);
        const int site = sites.index_of(station);
        if (site < 0) continue;  // restricted to the site file
        const Timestamp ts = parse_iso_timestamp(fields[1], where);
        const auto it = replicate_of.find(date_key(ts.year, ts.month, ts.day));
        if (it == replicate_of.end()) continue;  // date not in calendar
        events[static_cast<std::size_t>(it->second)][static_cast<std::size_t>(site)].push_back(
            ts.hours);
    }
    return PointPattern(domain, sites, std::move(events));
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_double(f, path + ":" + std::to_string(line_no)));
        if (!rows.empty() && row.size() != rows.front().size())
            throw invalid_input(path + ": ragged matrix rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw invalid_input(path + ": empty matrix");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace tpk
