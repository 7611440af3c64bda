#include "pdir/count.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pdir/prime.hpp"

namespace pdir {

void ExperimentConfig::validate() const {
    PrimeCtx ctx(p, precision); // primality and precision checks
    (void)ctx;
    if (radius < 1 || radius > 100000)
        throw std::invalid_argument("config: radius must be in [1, 1e5]");
    if (real_sectors < 1) throw std::invalid_argument("config: need at least one sector");
    if (padic_level < 1) throw std::invalid_argument("config: arc level must be >= 1");
    if (t1 > t2) throw std::invalid_argument("config: empty t range");
    if (threads < 1) throw std::invalid_argument("config: need at least one thread");
    for (std::size_t i = 1; i < radius_schedule.size(); ++i)
        if (radius_schedule[i] <= radius_schedule[i - 1])
            throw std::invalid_argument("config: schedule must be strictly increasing");
    for (std::int64_t r : radius_schedule)
        if (r < 1 || r > 100000)
            throw std::invalid_argument("config: schedule radius must be in [1, 1e5]");
}

namespace {

std::int64_t isqrt_i64(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Quadrant sectors admit exact assignment from the signs; general grids go
// through atan2 with boundary-tie flagging.
int sector_of(std::int64_t a, std::int64_t b, int sectors, bool* tie) {
    if (sectors == 1) return 0;
    if (sectors == 4) {
        if (a > 0 && b >= 0) return 0;
        if (b > 0 && a <= 0) return 1;
        if (a < 0 && b <= 0) return 2;
        return 3;
    }
    double angle = std::atan2(static_cast<double>(b), static_cast<double>(a));
    if (angle < 0) angle += 2.0 * M_PI;
    double width = 2.0 * M_PI / sectors;
    double pos = angle / width;
    double nearest = std::round(pos);
    if (std::abs(pos - nearest) * width < kAngleTieTolerance && tie) *tie = true;
    int idx = static_cast<int>(pos);
    if (idx >= sectors) idx = sectors - 1;
    return idx;
}

struct Accumulator {
    std::vector<std::vector<std::int64_t>> bins; // one histogram per schedule radius
    std::vector<std::int64_t> totals;
    std::int64_t in_chart = 0;
    std::int64_t off_chart = 0;
    std::int64_t ties = 0;
};

} // namespace

void enumerate_prim(std::int64_t R, const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (R < 1) throw std::invalid_argument("enumerate_prim: radius must be >= 1");
    std::int64_t r2 = R * R;
    for (std::int64_t a = -R; a <= R; ++a) {
        std::int64_t bmax = isqrt_i64(r2 - a * a);
        for (std::int64_t b = -bmax; b <= bmax; ++b) {
            if (std::gcd(std::llabs(a), std::llabs(b)) == 1) fn(a, b);
        }
    }
}

std::vector<std::pair<std::int64_t, std::int64_t>> enumerate_prim_collect(std::int64_t R) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    enumerate_prim(R, [&](std::int64_t a, std::int64_t b) { out.emplace_back(a, b); });
    return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need at least two points");
    double n = static_cast<double>(x.size());
    double sx = std::accumulate(x.begin(), x.end(), 0.0);
    double sy = std::accumulate(y.begin(), y.end(), 0.0);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CountReport run_joint_count(const ExperimentConfig& cfg) {
    cfg.validate();

    std::vector<std::int64_t> radii = cfg.radius_schedule;
    if (radii.empty()) radii.push_back(cfg.radius);
    std::int64_t rmax = radii.back();

    std::vector<PAdicArc> arcs = arc_partition(cfg.p, cfg.padic_level);
    std::int64_t pn = pow_p_i64(cfg.p, cfg.padic_level);
    std::vector<int> arc_index(static_cast<std::size_t>(pn * pn), -1);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        std::int64_t rx = arcs[i].cx.get_si();
        std::int64_t ry = arcs[i].cy.get_si();
        arc_index[static_cast<std::size_t>(rx * pn + ry)] = static_cast<int>(i);
    }

    int sectors = cfg.real_sectors;
    std::size_t nbins = static_cast<std::size_t>(sectors) * arcs.size();
    std::size_t nsched = radii.size();

    // Threads pull stripes of the a-coordinate; integer accumulation makes
    // the merged result independent of the stripe assignment.
    std::atomic<std::int64_t> next_stripe{0};
    std::int64_t stripe_width = 64;
    std::int64_t stripe_count = (2 * rmax + 1 + stripe_width - 1) / stripe_width;

    std::vector<Accumulator> locals(static_cast<std::size_t>(cfg.threads));
    for (auto& acc : locals) {
        acc.bins.assign(nsched, std::vector<std::int64_t>(nbins, 0));
        acc.totals.assign(nsched, 0);
    }

    auto worker = [&](int tid) {
        Accumulator& acc = locals[static_cast<std::size_t>(tid)];
        for (;;) {
            std::int64_t s = next_stripe.fetch_add(1);
            if (s >= stripe_count) break;
            std::int64_t a_lo = -rmax + s * stripe_width;
            std::int64_t a_hi = std::min(rmax, a_lo + stripe_width - 1);
            for (std::int64_t a = a_lo; a <= a_hi; ++a) {
                std::int64_t bmax = isqrt_i64(rmax * rmax - a * a);
                for (std::int64_t b = -bmax; b <= bmax; ++b) {
                    if (std::gcd(std::llabs(a), std::llabs(b)) != 1) continue;
                    std::int64_t n2 = a * a + b * b;
                    // first schedule radius that contains the vector
                    std::size_t slot = nsched;
                    for (std::size_t i = 0; i < nsched; ++i) {
                        if (n2 <= radii[i] * radii[i]) {
                            slot = i;
                            break;
                        }
                    }
                    if (slot == nsched) continue;
                    bool tie = false;
                    int sec = sector_of(a, b, sectors, &tie);
                    std::int64_t rx = ((a % pn) + pn) % pn;
                    std::int64_t ry = ((b % pn) + pn) % pn;
                    int arc = arc_index[static_cast<std::size_t>(rx * pn + ry)];
                    acc.bins[slot][static_cast<std::size_t>(sec) * arcs.size() +
                                   static_cast<std::size_t>(arc)] += 1;
                    acc.totals[slot] += 1;
                    if (tie) acc.ties += 1;
                    if (a % cfg.p != 0)
                        acc.in_chart += 1;
                    else
                        acc.off_chart += 1;
                }
            }
        }
    };

    if (cfg.threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    // Merge and turn per-slot histograms into cumulative ones.
    std::vector<std::vector<std::int64_t>> bins(nsched, std::vector<std::int64_t>(nbins, 0));
    std::vector<std::int64_t> totals(nsched, 0);
    std::int64_t in_chart = 0, off_chart = 0, ties = 0;
    for (const auto& acc : locals) {
        for (std::size_t i = 0; i < nsched; ++i) {
            totals[i] += acc.totals[i];
            for (std::size_t j = 0; j < nbins; ++j) bins[i][j] += acc.bins[i][j];
        }
        in_chart += acc.in_chart;
        off_chart += acc.off_chart;
        ties += acc.ties;
    }
    for (std::size_t i = 1; i < nsched; ++i) {
        totals[i] += totals[i - 1];
        for (std::size_t j = 0; j < nbins; ++j) bins[i][j] += bins[i - 1][j];
    }

    // Predicted probability: product of the normalized sector and arc
    // measures (both direction measures are used as probability measures).
    mpq_class arc_prob = arc_measure(arcs.front()) / circle_measure(cfg.p);
    arc_prob.canonicalize();
    mpq_class bin_prob = arc_prob / sectors;
    bin_prob.canonicalize();
    double bin_prob_d = bin_prob.get_d();

    CountReport rep;
    rep.config = cfg;
    rep.total = totals.back();
    rep.in_chart = in_chart;
    rep.off_chart = off_chart;
    rep.boundary_ties = ties;

    const auto& final_bins = bins.back();
    double sum_dev = 0.0;
    for (int s = 0; s < sectors; ++s) {
        for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
            BinStat st;
            st.sector = s;
            st.arc = arcs[ai].str();
            st.count = final_bins[static_cast<std::size_t>(s) * arcs.size() + ai];
            st.empirical = rep.total ? static_cast<double>(st.count) / rep.total : 0.0;
            st.predicted = bin_prob;
            st.deviation = std::abs(st.empirical / bin_prob_d - 1.0);
            sum_dev += st.deviation;
            rep.max_rel_deviation = std::max(rep.max_rel_deviation, st.deviation);
            rep.bins.push_back(std::move(st));
        }
    }
    rep.mean_rel_deviation = rep.bins.empty() ? 0.0 : sum_dev / rep.bins.size();

    for (std::size_t i = 0; i < nsched; ++i) {
        ScheduleRow row;
        row.radius = radii[i];
        row.total = totals[i];
        row.max_rel_deviation = 0.0;
        row.max_abs_deviation = 0.0;
        for (std::size_t j = 0; j < nbins; ++j) {
            double predicted_count = bin_prob_d * totals[i];
            double abs_dev = std::abs(bins[i][j] - predicted_count);
            row.max_abs_deviation = std::max(row.max_abs_deviation, abs_dev);
            if (predicted_count > 0)
                row.max_rel_deviation =
                    std::max(row.max_rel_deviation, abs_dev / predicted_count);
        }
        rep.schedule.push_back(row);
    }

    if (nsched >= 4) {
        std::vector<double> xs, ys;
        for (const auto& row : rep.schedule) {
            if (row.max_abs_deviation <= 0) continue;
            xs.push_back(std::log(static_cast<double>(row.radius)));
            ys.push_back(std::log(row.max_abs_deviation));
        }
        if (xs.size() >= 4) {
            rep.fit_slope = fit_slope(xs, ys);
            rep.fitted = true;
        }
    }
    return rep;
}

CountReport run_zinvp_count(const ExperimentConfig& cfg) {
    cfg.validate();
    std::int64_t span = cfg.t2 - cfg.t1;
    if (span > 12) throw std::invalid_argument("run_zinvp_count: t range too wide");

    // v = p^-t * w maps the norm-p^t primitive vectors onto the integer
    // primitive vectors of norm <= R * p^t.
    double scaled = static_cast<double>(cfg.radius) *
                    std::pow(static_cast<double>(cfg.p), static_cast<double>(cfg.t2));
    if (scaled > 2.0e5) throw std::invalid_argument("run_zinvp_count: range infeasible");
    auto rmax = static_cast<std::int64_t>(std::floor(scaled + 1e-9));

    std::vector<std::int64_t> thresholds; // squared radii R^2 p^{2t}
    for (std::int64_t t = cfg.t1; t <= cfg.t2; ++t) {
        double th = static_cast<double>(cfg.radius) *
                    std::pow(static_cast<double>(cfg.p), static_cast<double>(t));
        double th2 = th * th;
        thresholds.push_back(th2 >= 1.0 ? static_cast<std::int64_t>(std::floor(th2 + 1e-6))
                                        : 0);
    }

    std::vector<std::int64_t> first_hits(thresholds.size(), 0);
    enumerate_prim(std::max<std::int64_t>(rmax, 1), [&](std::int64_t a, std::int64_t b) {
        std::int64_t n2 = a * a + b * b;
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (n2 <= thresholds[i]) {
                first_hits[i] += 1;
                break;
            }
        }
    });

    CountReport rep;
    rep.config = cfg;
    std::int64_t running = 0;
    std::int64_t box_total = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        running += first_hits[i];
        rep.per_t_counts.emplace_back(cfg.t1 + static_cast<std::int64_t>(i), running);
        box_total += running; // each t is a disjoint slice of the norm box
    }
    rep.total = box_total;
    return rep;
}

} // namespace pdir
