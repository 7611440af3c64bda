#pragma once

#include "pdir/plane.hpp"

namespace pdir {

/**
 * 2x2 matrix with rows (a c; b d): the first column is (a, b), the second
 * (c, d). Entry types in use: ZInvP, mpq_class, PAdicApprox, double.
 */
template <typename T>
struct Mat2 {
    T a, c;
    T b, d;

    Vec2<T> col1() const { return {a, b}; }
    Vec2<T> col2() const { return {c, d}; }

    T det() const { return a * d - c * b; }

    Mat2 operator*(const Mat2& rhs) const {
        return {a * rhs.a + c * rhs.b, a * rhs.c + c * rhs.d,
                b * rhs.a + d * rhs.b, b * rhs.c + d * rhs.d};
    }

    Vec2<T> operator*(const Vec2<T>& v) const { return {a * v.x + c * v.y, b * v.x + d * v.y}; }

    bool operator==(const Mat2& rhs) const {
        return a == rhs.a && c == rhs.c && b == rhs.b && d == rhs.d;
    }
};

using Mat2Q = Mat2<mpq_class>;
using Mat2Z = Mat2<ZInvP>;

inline Mat2Q identity_q() { return {mpq_class(1), mpq_class(0), mpq_class(0), mpq_class(1)}; }

inline Mat2Z identity_z(std::int64_t p) {
    return {ZInvP::one(p), ZInvP::zero(p), ZInvP::zero(p), ZInvP::one(p)};
}

inline Mat2Q to_rational(const Mat2Z& g) {
    return {g.a.to_rational(), g.c.to_rational(), g.b.to_rational(), g.d.to_rational()};
}

/// Inverse of a determinant-one matrix (the adjugate).
inline Mat2Q inverse_det1(const Mat2Q& g) { return {g.d, -g.c, -g.b, g.a}; }

} // namespace pdir
