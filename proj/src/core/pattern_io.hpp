#pragma once

#include <iosfwd>
#include <string>

#include "core/point_pattern.hpp"

namespace tpk {

/// Site CSV with header `site,x,y`.
SiteSet read_sites_csv(const std::string& path);

/// Event CSV with header `replicate,site,time`. Replicate labels must be
/// integers; they are mapped to dense indices in increasing label order.
/// Site ids must exist in `sites`. Times are validated against `domain`;
/// violations are reported with their line number.
PointPattern read_events_csv(const std::string& path, const SiteSet& sites,
                             const TimeDomain& domain);
PointPattern read_events_csv(std::istream& in, const std::string& name, const SiteSet& sites,
                             const TimeDomain& domain);

/// Inverse of read_events_csv: replicates written as 1-based indices in
/// order, sites by id, times with full round-trip precision.
void write_events_csv(const PointPattern& pattern, const std::string& path);
void write_events_csv(const PointPattern& pattern, std::ostream& out);

/// Trip CSV with header `station,start_time` (ISO-8601 timestamps) plus a
/// calendar file of ISO dates, one per line. Every calendar date becomes a
/// replicate on [0, 24] in wall-clock hours; trips at stations absent from
/// `sites` or on dates outside the calendar are dropped.
PointPattern read_trips_csv(const std::string& trips_path, const SiteSet& sites,
                            const std::string& calendar_path);

/// Plain numeric matrix as CSV (no header), one row per line.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

}  // namespace tpk
