#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "core/bspline.hpp"
#include "core/tensor_basis.hpp"

namespace tpk {

struct Site {
    std::string id;
    Eigen::Vector2d position;
};

/// Ordered collection of distinct spatial sites.
class SiteSet {
public:
    explicit SiteSet(std::vector<Site> sites);

    int size() const { return static_cast<int>(sites_.size()); }
    const Site& operator[](int j) const { return sites_[static_cast<std::size_t>(j)]; }

    /// Index of the site with the given id, or -1.
    int index_of(const std::string& id) const;

    /// Minimum pairwise distance between sites.
    double min_spacing() const;

    /// Smallest axis-aligned rectangle containing every site.
    Rect bounding_box() const;

    auto begin() const { return sites_.begin(); }
    auto end() const { return sites_.end(); }

private:
    std::vector<Site> sites_;
};

/// Replicated multivariate point pattern: for every replicate i and site j,
/// a sorted list of event times inside the common domain. Immutable after
/// construction.
class PointPattern {
public:
    /// events[i][j] holds the times for replicate i at site j; each list is
    /// sorted on construction. Requires at least one replicate.
    PointPattern(TimeDomain domain, SiteSet sites,
                 std::vector<std::vector<std::vector<double>>> events);

    int replicates() const { return static_cast<int>(events_.size()); }
    int sites() const { return site_set_.size(); }
    const TimeDomain& domain() const { return domain_; }
    const SiteSet& site_set() const { return site_set_; }

    std::span<const double> events(int replicate, int site) const;
    std::size_t total_events() const;

    bool operator==(const PointPattern& other) const {
        return domain_ == other.domain_ && events_ == other.events_;
    }

private:
    TimeDomain domain_;
    SiteSet site_set_;
    std::vector<std::vector<std::vector<double>>> events_;
};

/// Right-continuous non-decreasing step function t -> N(t) on a TimeDomain,
/// stored as jump times with jump sizes. Jumps are integer multiplicities
/// for observed data and arbitrary reals for weighted predictions.
class CountFunction {
public:
    CountFunction(TimeDomain domain, std::vector<double> jump_times,
                  std::vector<double> jump_sizes);

    static CountFunction from_events(TimeDomain domain, std::span<const double> events);

    /// Weighted superposition sum_j w_j N_j; jump times are the union of
    /// the inputs' jump times.
    static CountFunction weighted_sum(std::span<const CountFunction> parts,
                                      std::span<const double> weights);

    const TimeDomain& domain() const { return domain_; }
    const std::vector<double>& jump_times() const { return times_; }
    const std::vector<double>& jump_sizes() const { return jumps_; }

    /// N(t) = sum of jumps at times <= t.
    double value(double t) const;
    double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    /// Values on an equally spaced grid of `points` samples over the domain.
    std::vector<double> sample(int points) const;

    /// Exact L2 distance: sqrt(int (f - g)^2) by piecewise-constant
    /// integration over merged jump times.
    static double l2_distance(const CountFunction& f, const CountFunction& g);

private:
    TimeDomain domain_;
    std::vector<double> times_;
    std::vector<double> jumps_;
    std::vector<double> cumulative_;
};

/// Observed counts for one replicate and site.
CountFunction count_function(const PointPattern& pattern, int replicate, int site);

/// Root average squared error {sum_i ||N_i - Nhat_i||^2 / n}^(1/2).
double root_average_squared_error(std::span<const CountFunction> observed,
                                  std::span<const CountFunction> predicted);

}  // namespace tpk
