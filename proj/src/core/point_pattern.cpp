#include "core/point_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace tpk {

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw invalid_input("SiteSet: need at least one site");
    for (std::size_t j = 0; j < sites_.size(); ++j)
        for (std::size_t k = j + 1; k < sites_.size(); ++k)
            if ((sites_[j].position - sites_[k].position).norm() == 0.0)
                throw invalid_input("SiteSet: sites '" + sites_[j].id + "' and '" +
                                    sites_[k].id + "' share coordinates");
}

int SiteSet::index_of(const std::string& id) const {
    for (std::size_t j = 0; j < sites_.size(); ++j)
        if (sites_[j].id == id) return static_cast<int>(j);
    return -1;
}

double SiteSet::min_spacing() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sites_.size(); ++j)
        for (std::size_t k = j + 1; k < sites_.size(); ++k)
            best = std::min(best, (sites_[j].position - sites_[k].position).norm());
    return best;
}

Rect SiteSet::bounding_box() const {
    double x0 = sites_[0].position.x(), x1 = x0;
    double y0 = sites_[0].position.y(), y1 = y0;
    for (const Site& s : sites_) {
        x0 = std::min(x0, s.position.x());
        x1 = std::max(x1, s.position.x());
        y0 = std::min(y0, s.position.y());
        y1 = std::max(y1, s.position.y());
    }
    return Rect(x0, x1, y0, y1);
}

PointPattern::PointPattern(TimeDomain domain, SiteSet sites,
                           std::vector<std::vector<std::vector<double>>> events)
    : domain_(domain), site_set_(std::move(sites)), events_(std::move(events)) {
    if (events_.empty()) throw invalid_input("PointPattern: need at least one replicate");
    for (auto& replicate : events_) {
        if (static_cast<int>(replicate.size()) != site_set_.size())
            throw invalid_input("PointPattern: replicate with wrong site count");
        for (auto& list : replicate) {
            std::sort(list.begin(), list.end());
            for (double t : list)
                if (!domain_.contains(t))
                    throw invalid_input("PointPattern: event time outside the domain");
        }
    }
}

std::span<const double> PointPattern::events(int replicate, int site) const {
    if (replicate < 0 || replicate >= replicates() || site < 0 || site >= sites())
        throw invalid_input("PointPattern: index out of range");
    return events_[static_cast<std::size_t>(replicate)][static_cast<std::size_t>(site)];
}

std::size_t PointPattern::total_events() const {
    std::size_t n = 0;
    for (const auto& replicate : events_)
        for (const auto& list : replicate) n += list.size();
    return n;
}

CountFunction::CountFunction(TimeDomain domain, std::vector<double> jump_times,
                             std::vector<double> jump_sizes)
    : domain_(domain), times_(std::move(jump_times)), jumps_(std::move(jump_sizes)) {
    if (times_.size() != jumps_.size())
        throw invalid_input("CountFunction: times/sizes length mismatch");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!domain_.contains(times_[i]))
            throw invalid_input("CountFunction: jump outside the domain");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw invalid_input("CountFunction: jump times must be strictly increasing");
    }
    cumulative_.resize(times_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        run += jumps_[i];
        cumulative_[i] = run;
    }
}

CountFunction CountFunction::from_events(TimeDomain domain, std::span<const double> events) {
    std::vector<double> times;
    std::vector<double> sizes;
    for (double t : events) {
        if (!times.empty() && times.back() == t)
            sizes.back() += 1.0;  // tied events accumulate multiplicity
        else {
            times.push_back(t);
            sizes.push_back(1.0);
        }
    }
    return CountFunction(domain, std::move(times), std::move(sizes));
}

CountFunction CountFunction::weighted_sum(std::span<const CountFunction> parts,
                                          std::span<const double> weights) {
    if (parts.size() != weights.size())
        throw invalid_input("CountFunction: weight count mismatch");
    if (parts.empty()) throw invalid_input("CountFunction: empty superposition");
    const TimeDomain domain = parts[0].domain();
    std::vector<std::pair<double, double>> merged;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        if (!(parts[j].domain() == domain))
            throw invalid_input("CountFunction: mismatched domains in superposition");
        for (std::size_t i = 0; i < parts[j].times_.size(); ++i)
            merged.emplace_back(parts[j].times_[i], weights[j] * parts[j].jumps_[i]);
    }
    std::sort(merged.begin(), merged.end());
    std::vector<double> times, sizes;
    for (const auto& [t, s] : merged) {
        if (!times.empty() && times.back() == t)
            sizes.back() += s;
        else {
            times.push_back(t);
            sizes.push_back(s);
        }
    }
    return CountFunction(domain, std::move(times), std::move(sizes));
}

double CountFunction::value(double t) const {
    // jumps at times <= t count; right-continuous
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

std::vector<double> CountFunction::sample(int points) const {
    if (points < 2) throw invalid_input("CountFunction: need at least two sample points");
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = domain_.a + domain_.length() * i / (points - 1.0);
        out[static_cast<std::size_t>(i)] = value(t);
    }
    return out;
}

double CountFunction::l2_distance(const CountFunction& f, const CountFunction& g) {
    if (!(f.domain() == g.domain()))
        throw invalid_input("CountFunction: mismatched domains");
    double acc = 0.0;
    std::size_t i = 0, j = 0;
    double t_prev = f.domain().a;
    double vf = 0.0, vg = 0.0;
    while (i < f.times_.size() || j < g.times_.size()) {
        double t_next;
        if (i < f.times_.size() && (j >= g.times_.size() || f.times_[i] <= g.times_[j]))
            t_next = f.times_[i];
        else
            t_next = g.times_[j];
        const double diff = vf - vg;
        acc += diff * diff * (t_next - t_prev);
        while (i < f.times_.size() && f.times_[i] == t_next) vf = f.cumulative_[i++];
        while (j < g.times_.size() && g.times_[j] == t_next) vg = g.cumulative_[j++];
        t_prev = t_next;
    }
    const double diff = vf - vg;
    acc += diff * diff * (f.domain().b - t_prev);
    return std::sqrt(std::max(acc, 0.0));
}

CountFunction count_function(const PointPattern& pattern, int replicate, int site) {
    return CountFunction::from_events(pattern.domain(), pattern.events(replicate, site));
}

double root_average_squared_error(std::span<const CountFunction> observed,
                                  std::span<const CountFunction> predicted) {
    if (observed.size() != predicted.size() || observed.empty())
        throw invalid_input("root_average_squared_error: list length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = CountFunction::l2_distance(observed[i], predicted[i]);
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(observed.size()));
}

}  // namespace tpk
