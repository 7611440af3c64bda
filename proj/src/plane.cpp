#include "pdir/plane.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdir {

std::optional<std::int64_t> vec_valuation(const Vec2Z& v) {
    auto vx = valuation(v.x);
    auto vy = valuation(v.y);
    if (!vx) return vy;
    if (!vy) return vx;
    return std::min(*vx, *vy);
}

std::optional<std::int64_t> norm_exponent(const Vec2Z& v) {
    auto nu = vec_valuation(v);
    if (!nu) return std::nullopt;
    return -*nu;
}

bool in_unit_circle(const Vec2Z& v) {
    auto e = norm_exponent(v);
    return e && *e == 0;
}

bool in_plus_half(const Vec2Z& v) {
    auto vx = valuation(v.x);
    auto vy = valuation(v.y);
    if (!vx) return !vy ? true : false; // |0| >= |y| only for y = 0
    if (!vy) return true;
    return *vx <= *vy;
}

Vec2Z direction_p(const Vec2Z& v) {
    auto nu = vec_valuation(v);
    if (!nu) throw std::domain_error("direction_p: zero vector");
    return {v.x.scale_p(-*nu), v.y.scale_p(-*nu)};
}

PAdicArc::PAdicArc(std::int64_t prime, int lvl, mpz_class centre_x, mpz_class centre_y)
    : p(prime), level(lvl), cx(std::move(centre_x)), cy(std::move(centre_y)) {
    if (level < 1) throw std::invalid_argument("PAdicArc: level must be >= 1");
    mpz_class pk = pow_p(p, level);
    cx %= pk;
    if (cx < 0) cx += pk;
    cy %= pk;
    if (cy < 0) cy += pk;
    if (cx % p == 0 && cy % p == 0)
        throw std::invalid_argument("PAdicArc: center must lie on the unit circle");
}

std::string PAdicArc::str() const {
    std::ostringstream os;
    os << p << "^-" << level << "@(" << cx << "," << cy << ")";
    return os.str();
}

PAdicArc PAdicArc::parse(const std::string& text) {
    auto caret = text.find("^-");
    auto at = text.find('@', caret == std::string::npos ? 0 : caret);
    if (caret == std::string::npos || at == std::string::npos)
        throw std::invalid_argument("PAdicArc::parse: expected p^-N@(cx,cy)");
    std::int64_t p = std::stoll(text.substr(0, caret));
    int level = std::stoi(text.substr(caret + 2, at - caret - 2));
    auto open = text.find('(', at);
    auto comma = text.find(',', open);
    auto close = text.find(')', comma);
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos)
        throw std::invalid_argument("PAdicArc::parse: expected p^-N@(cx,cy)");
    mpz_class cx(text.substr(open + 1, comma - open - 1));
    mpz_class cy(text.substr(comma + 1, close - comma - 1));
    return PAdicArc(p, level, cx, cy);
}

bool PAdicArc::operator==(const PAdicArc& rhs) const {
    return p == rhs.p && level == rhs.level && cx == rhs.cx && cy == rhs.cy;
}

PAdicArc PAdicArc::rotated_perp() const {
    return PAdicArc(p, level, cy, mpz_class(-cx));
}

namespace {

bool entry_in_ball(const ZInvP& x, const mpz_class& c, int level) {
    ZInvP diff = x - ZInvP::from_integer(x.prime(), c);
    auto nu = valuation(diff);
    return !nu || *nu >= level;
}

} // namespace

bool arc_contains(const PAdicArc& arc, const Vec2Z& v) {
    return entry_in_ball(v.x, arc.cx, arc.level) && entry_in_ball(v.y, arc.cy, arc.level);
}

bool arc_contains(const PAdicArc& arc, const Vec2<PAdicApprox>& v) {
    auto check = [&](const PAdicApprox& x, const mpz_class& c) {
        if (x.is_zero()) return c % pow_p(arc.p, arc.level) == 0;
        if (x.val_finite() >= arc.level) return c % pow_p(arc.p, arc.level) == 0;
        if (x.val_finite() < 0) return false;
        if (x.val_finite() + x.prec() < arc.level)
            throw precision_error("arc_contains: insufficient precision");
        mpz_class lift = x.unit() * pow_p(arc.p, x.val_finite());
        return mpz_class((lift - c) % pow_p(arc.p, arc.level)) == 0;
    };
    return check(v.x, arc.cx) && check(v.y, arc.cy);
}

bool arc_contains(const PAdicArc& arc, const mpq_class& x, const mpq_class& y) {
    if (!is_p_integer(arc.p, x) || !is_p_integer(arc.p, y)) return false;
    return residue_mod_pk(arc.p, x, arc.level) == arc.cx &&
           residue_mod_pk(arc.p, y, arc.level) == arc.cy;
}

mpq_class arc_measure(const PAdicArc& arc) {
    mpq_class m(1, pow_p(arc.p, 2 * arc.level));
    m.canonicalize();
    return m;
}

mpq_class circle_measure(std::int64_t p) {
    mpq_class m(mpz_class(p * p - 1), mpz_class(p * p));
    m.canonicalize();
    return m;
}

mpq_class half_circle_measure(std::int64_t p) {
    mpq_class m(mpz_class(p - 1), mpz_class(p));
    m.canonicalize();
    return m;
}

std::vector<PAdicArc> arc_partition(std::int64_t p, int level) {
    if (level < 1) throw std::invalid_argument("arc_partition: level must be >= 1");
    std::int64_t pk = pow_p_i64(p, level);
    std::vector<PAdicArc> arcs;
    for (std::int64_t x = 0; x < pk; ++x) {
        for (std::int64_t y = 0; y < pk; ++y) {
            if (x % p == 0 && y % p == 0) continue;
            arcs.emplace_back(p, level, mpz_class(static_cast<long>(x)),
                              mpz_class(static_cast<long>(y)));
        }
    }
    return arcs;
}

RealArc::RealArc(double t1, double t2) : theta1(t1), theta2(t2) {
    constexpr double two_pi = 2.0 * M_PI;
    if (!(0.0 <= theta1 && theta1 < theta2 && theta2 <= two_pi + kAngleTieTolerance))
        throw std::invalid_argument("RealArc: need 0 <= theta1 < theta2 <= 2*pi");
}

bool RealArc::contains(double angle, bool* boundary_tie) const {
    if (boundary_tie &&
        (std::abs(angle - theta1) < kAngleTieTolerance ||
         std::abs(angle - theta2) < kAngleTieTolerance))
        *boundary_tie = true;
    return theta1 <= angle && angle < theta2;
}

} // namespace pdir
