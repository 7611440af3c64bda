#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdir/haar.hpp"
#include "pdir/plane.hpp"

namespace pdir {

/**
 * Configuration of a counting run. Counts are plain 64-bit; the radius
 * guard keeps every total well below overflow.
 */
struct ExperimentConfig {
    std::int64_t p = 2;
    std::int64_t radius = 1000;
    std::vector<std::int64_t> radius_schedule; // strictly increasing; optional
    int real_sectors = 4;
    int padic_level = 1;
    int precision = 8; // recorded with every run
    std::int64_t t1 = 0, t2 = 0;
    int psi = 0;
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

struct BinStat {
    int sector;
    std::string arc;
    std::int64_t count = 0;
    double empirical = 0.0;
    mpq_class predicted; // exact probability
    double deviation = 0.0; // |empirical/predicted - 1|
};

struct ScheduleRow {
    std::int64_t radius;
    std::int64_t total;
    double max_rel_deviation;
    double max_abs_deviation; // max over bins of |count - predicted * total|
};

struct CountReport {
    ExperimentConfig config;
    std::int64_t total = 0;
    std::int64_t in_chart = 0;  // first coordinate a p-unit
    std::int64_t off_chart = 0;
    std::int64_t boundary_ties = 0;
    std::vector<BinStat> bins;
    double max_rel_deviation = 0.0;
    double mean_rel_deviation = 0.0;
    std::vector<ScheduleRow> schedule;
    double fit_slope = 0.0; // log|count - predicted*total| vs log R
    bool fitted = false;
    // Per-diagonal-coordinate totals for the scaled-lattice variant.
    std::vector<std::pair<std::int64_t, std::int64_t>> per_t_counts;
};

/// Every primitive integer pair with a^2 + b^2 <= R^2, each exactly once,
/// in deterministic (a, b)-lexicographic order.
void enumerate_prim(std::int64_t R, const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Collecting variant for small radii (tests).
std::vector<std::pair<std::int64_t, std::int64_t>> enumerate_prim_collect(std::int64_t R);

/// Joint real-sector x direction-arc counts with predicted probabilities
/// as products of the normalized circle measures.
CountReport run_joint_count(const ExperimentConfig& cfg);

/// Counts of Z[1/p]-primitive vectors with ||v||_p = p^t, ||v|| <= R for
/// each t in [t1, t2], realized through the p-power scaling bijection.
CountReport run_zinvp_count(const ExperimentConfig& cfg);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace pdir
