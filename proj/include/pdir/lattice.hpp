#pragma once

#include <cstdint>
#include <optional>
#include <gmpxx.h>

#include "pdir/decomp.hpp"
#include "pdir/mat2.hpp"
#include "pdir/plane.hpp"

namespace pdir {

struct PrimVecZ {
    mpz_class a, b;
};

/// gcd(a, b) == 1.
bool is_primitive_z(const mpz_class& a, const mpz_class& b);

struct StripResult {
    std::int64_t alpha; // v = p^alpha * w
    PrimVecZ w;
};

/**
 * Writes a nonzero v as p^alpha * w with w a primitive integer vector.
 * Throws not_primitive_error when no power of p makes the pair coprime.
 */
StripResult strip_p(const Vec2Z& v);

/// A solution (x0, y0) of a*x + b*y = 1 over Z[1/p].
std::pair<ZInvP, ZInvP> gcd_solve(const Vec2Z& v);

/**
 * The unique f = {alpha} + m (m integer) such that
 * (x - f, alpha - f) lands in [-1/2, 1/2) x Z_p. Returned as an exact
 * element of Z[1/p].
 */
ZInvP fund_reduce(std::int64_t p, const mpq_class& x, const mpq_class& alpha);

/**
 * The determinant-one matrix attached to a primitive vector v = (a, b):
 * first column (b, -a), second column the gcd solution shifted so that both
 * unipotent coordinates (the real x and the p-adic beta) land in
 * [-1/2, 1/2) x Z_p. Vectors whose perpendicular falls outside the
 * |a|_p >= |b|_p chart are handled through the swap (a, b) -> (b, a),
 * recorded in `swapped`.
 */
struct GammaMatrix {
    Mat2Z gamma;
    Vec2Z v;       // the vector the matrix was built from (post-swap)
    Vec2Z source;  // the original input vector
    ZInvP shift;   // f applied during the reduction
    bool swapped;
};

GammaMatrix gamma_from_prim(const Vec2Z& v);

/**
 * Counting-box parameters: real angle arc, optional direction arc, real
 * radius, p-adic norm range p^t1..p^t2.
 */
struct BoxParams {
    RealArc theta;
    bool theta_full = false;
    std::optional<PAdicArc> arc; // nullopt = whole circle
    mpq_class radius;
    std::int64_t t1 = 0, t2 = 0;
};

/// Membership decided directly on the vector (norms and directions).
bool membership(const Vec2Z& v, const BoxParams& box, bool* boundary_tie = nullptr);

/// Both factor decompositions of gamma, computed once and reusable across
/// several box tests.
struct GammaFactors {
    IwasawaRealFactors iw;
    BruhatFactors br;
};

GammaFactors gamma_factors(const GammaMatrix& gm);

/// The same decision read off the factor coordinates of gamma. The first
/// column of gamma is v-perp, so the angle test is rotated by pi/2 and the
/// direction arc by (x, y) -> (y, -x).
bool membership_via_factors(const GammaFactors& f, const BoxParams& box,
                            bool* boundary_tie = nullptr);
bool membership_via_factors(const GammaMatrix& gm, const BoxParams& box,
                            bool* boundary_tie = nullptr);

} // namespace pdir
