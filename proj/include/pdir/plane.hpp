#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <gmpxx.h>

#include "pdir/padic_approx.hpp"
#include "pdir/zinvp.hpp"

namespace pdir {

template <typename T>
struct Vec2 {
    T x, y;
};

using Vec2Z = Vec2<ZInvP>;

/// nu of the vector: min of the component valuations; nullopt for (0,0).
std::optional<std::int64_t> vec_valuation(const Vec2Z& v);

/// ||v||_p = p^exp; nullopt encodes ||0|| = 0.
std::optional<std::int64_t> norm_exponent(const Vec2Z& v);

bool in_unit_circle(const Vec2Z& v);
/// |x|_p >= |y|_p, the chart where Bruhat and Iwasawa factorizations agree.
bool in_plus_half(const Vec2Z& v);

/// v scaled onto the unit circle by ||v||_p. Throws on the zero vector.
Vec2Z direction_p(const Vec2Z& v);

/**
 * Ball of radius p^-level around an integer-entry center on the unit
 * circle. Centers are canonicalized to [0, p^level)^2, which makes equality
 * and hashing trivial.
 */
struct PAdicArc {
    std::int64_t p;
    int level; // radius p^-level, level >= 1
    mpz_class cx, cy;

    PAdicArc(std::int64_t p, int level, mpz_class cx, mpz_class cy);

    /// "p^-N@(cx,cy)"
    std::string str() const;
    static PAdicArc parse(const std::string& text);

    bool operator==(const PAdicArc& rhs) const;

    /// The arc of {(y, -x)} for (x, y) in this arc (same radius).
    PAdicArc rotated_perp() const;
};

bool arc_contains(const PAdicArc& arc, const Vec2Z& v);
bool arc_contains(const PAdicArc& arc, const Vec2<PAdicApprox>& v);
/// Rational entries with non-negative valuation.
bool arc_contains(const PAdicArc& arc, const mpq_class& x, const mpq_class& y);

mpq_class arc_measure(const PAdicArc& arc);
mpq_class circle_measure(std::int64_t p);      // 1 - p^-2
mpq_class half_circle_measure(std::int64_t p); // 1 - 1/p

/// Pairwise-disjoint arcs of radius p^-level covering the unit circle,
/// in lexicographic center order; count = p^(2*level) * (1 - p^-2).
std::vector<PAdicArc> arc_partition(std::int64_t p, int level);

/**
 * Half-open angle interval [theta1, theta2) in [0, 2*pi). Membership of a
 * float angle within 1e-12 of a boundary is flagged as a tie rather than
 * silently assigned.
 */
struct RealArc {
    double theta1, theta2;

    RealArc(double t1, double t2);
    bool contains(double angle, bool* boundary_tie = nullptr) const;
    double length() const { return theta2 - theta1; }
};

constexpr double kAngleTieTolerance = 1e-12;

} // namespace pdir
