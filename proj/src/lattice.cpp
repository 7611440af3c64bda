#include "pdir/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace pdir {

bool is_primitive_z(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g == 1;
}

StripResult strip_p(const Vec2Z& v) {
    auto nu = vec_valuation(v);
    if (!nu) throw std::domain_error("strip_p: zero vector");
    Vec2Z scaled = {v.x.scale_p(-*nu), v.y.scale_p(-*nu)};
    if ((!scaled.x.is_zero() && scaled.x.exponent() < 0) ||
        (!scaled.y.is_zero() && scaled.y.exponent() < 0))
        throw std::logic_error("strip_p: scaling failed");
    mpz_class a = scaled.x.is_zero() ? mpz_class(0)
                                     : mpz_class(scaled.x.mantissa() * pow_p(v.x.prime(), scaled.x.exponent()));
    mpz_class b = scaled.y.is_zero() ? mpz_class(0)
                                     : mpz_class(scaled.y.mantissa() * pow_p(v.y.prime(), scaled.y.exponent()));
    if (!is_primitive_z(a, b))
        throw not_primitive_error("strip_p: vector is not primitive over Z[1/p]");
    return {*nu, {a, b}};
}

std::pair<ZInvP, ZInvP> gcd_solve(const Vec2Z& v) {
    StripResult s = strip_p(v); // throws when not primitive
    std::int64_t p = v.x.prime();
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), s.w.a.get_mpz_t(),
               s.w.b.get_mpz_t());
    if (g != 1) throw std::logic_error("gcd_solve: stripped pair not coprime");
    // a*x0 + b*y0 = p^alpha (w.a * x + w.b * y) * p^-alpha = 1
    return {ZInvP(p, x, -s.alpha), ZInvP(p, y, -s.alpha)};
}

ZInvP fund_reduce(std::int64_t p, const mpq_class& x, const mpq_class& alpha) {
    mpq_class f0 = frac_part_q(p, alpha);
    // integer m with x - f0 - m in [-1/2, 1/2): m = floor(x - f0 + 1/2)
    mpq_class shifted = x - f0 + mpq_class(1, 2);
    mpz_class m;
    mpz_fdiv_q(m.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
    mpq_class f = f0 + m;
    return ZInvP::from_rational(p, f);
}

namespace {

// Unipotent coordinates of [vperp | w]: the real x-coordinate and the
// p-adic beta-coordinate, both exact rationals.
struct NCoords {
    mpq_class x;
    mpq_class beta;
};

NCoords n_coords(const Vec2Z& vp, const Vec2Z& w) {
    mpq_class vx = vp.x.to_rational(), vy = vp.y.to_rational();
    mpq_class wx = w.x.to_rational(), wy = w.y.to_rational();
    mpq_class norm_sq = vx * vx + vy * vy;
    mpq_class x = (wx * vx + wy * vy) / norm_sq;
    x.canonicalize();
    mpq_class beta = wx / vx;
    beta.canonicalize();
    return {x, beta};
}

} // namespace

GammaMatrix gamma_from_prim(const Vec2Z& v) {
    std::int64_t p = v.x.prime();
    auto va = valuation(v.x);
    auto vb = valuation(v.y);
    if (!va && !vb) throw std::domain_error("gamma_from_prim: zero vector");

    // Chart condition for [vperp | w]: top-left entry is b, so we need
    // |b|_p >= |a|_p. Otherwise swap the coordinates and record it.
    bool swapped = false;
    Vec2Z vv = v;
    bool in_chart = vb && (!va || *vb <= *va);
    if (!in_chart) {
        vv = {v.y, v.x};
        swapped = true;
    }

    auto [x0, y0] = gcd_solve(vv); // also validates primitivity
    Vec2Z vperp{vv.y, -vv.x};
    Vec2Z w0{x0, y0};

    NCoords c0 = n_coords(vperp, w0);
    ZInvP f = fund_reduce(p, c0.x, c0.beta);
    // Right multiplication by [[1, mu], [0, 1]] shifts both coordinates by
    // mu; mu = -f lands them in the fundamental domain.
    Vec2Z w{w0.x - f * vperp.x, w0.y - f * vperp.y};

    Mat2Z gamma{vperp.x, w.x, vperp.y, w.y};
    if (!(gamma.det() == ZInvP::one(p)))
        throw std::logic_error("gamma_from_prim: determinant is not 1");
    return {gamma, vv, v, f, swapped};
}

bool membership(const Vec2Z& v, const BoxParams& box, bool* boundary_tie) {
    mpq_class a = v.x.to_rational(), b = v.y.to_rational();
    mpq_class norm_sq = a * a + b * b;
    if (norm_sq > box.radius * box.radius) return false;

    auto ne = norm_exponent(v);
    if (!ne) return false;
    if (*ne < box.t1 || *ne > box.t2) return false;

    if (!box.theta_full) {
        double angle = std::atan2(b.get_d(), a.get_d());
        if (angle < 0) angle += 2.0 * M_PI;
        if (!box.theta.contains(angle, boundary_tie)) return false;
    }

    if (box.arc) {
        Vec2Z dir = direction_p(v);
        if (!arc_contains(*box.arc, dir)) return false;
    }
    return true;
}

GammaFactors gamma_factors(const GammaMatrix& gm) {
    std::int64_t p = gm.gamma.a.prime();
    Mat2Q g = to_rational(gm.gamma);
    return {iwasawa_real(g), bruhat_padic(p, g)};
}

bool membership_via_factors(const GammaFactors& f, const BoxParams& box,
                            bool* boundary_tie) {
    const IwasawaRealFactors& iw = f.iw;
    const BruhatFactors& br = f.br;

    if (iw.alpha_sq > box.radius * box.radius) return false;
    if (br.t < box.t1 || br.t > box.t2) return false;

    if (!box.theta_full) {
        // The first column of gamma is v-perp = (b, -a); rotating its angle
        // by +pi/2 recovers the angle of v.
        double angle = iw.theta + M_PI / 2.0;
        if (angle >= 2.0 * M_PI) angle -= 2.0 * M_PI;
        if (!box.theta.contains(angle, boundary_tie)) return false;
    }

    if (box.arc) {
        // Direction of v-perp = (y, -x) for v-direction (x, y).
        PAdicArc rotated = box.arc->rotated_perp();
        if (!arc_contains(rotated, br.u, br.m * br.u)) return false;
    }
    return true;
}

bool membership_via_factors(const GammaMatrix& gm, const BoxParams& box,
                            bool* boundary_tie) {
    return membership_via_factors(gamma_factors(gm), box, boundary_tie);
}

} // namespace pdir
