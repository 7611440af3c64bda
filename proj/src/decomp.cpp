#include "pdir/decomp.hpp"

#include <cmath>
#include <stdexcept>

namespace pdir {

IwasawaRealFactors iwasawa_real(const Mat2Q& g) {
    if (g.det() != 1) throw std::domain_error("iwasawa_real: determinant must be 1");
    mpq_class alpha_sq = g.a * g.a + g.b * g.b;
    // alpha_sq > 0: a = b = 0 is impossible at determinant one.
    mpq_class x = (g.a * g.c + g.b * g.d) / alpha_sq;
    x.canonicalize();
    double theta = std::atan2(g.b.get_d(), g.a.get_d());
    if (theta < 0) theta += 2.0 * M_PI;
    return {theta, std::sqrt(alpha_sq.get_d()), x.get_d(), alpha_sq, x};
}

Mat2<double> compose_iwasawa(double theta, double alpha, double x) {
    double c = std::cos(theta), s = std::sin(theta);
    // K * diag(alpha, 1/alpha) * n_x
    return {alpha * c, (alpha * c * x) - s / alpha,
            alpha * s, (alpha * s * x) + c / alpha};
}

Mat2<double> compose_iwasawa(const IwasawaRealFactors& f) {
    return compose_iwasawa(f.theta, f.alpha, f.x);
}

bool in_gplus(std::int64_t p, const Mat2Q& g) {
    if (g.a == 0) return false;
    if (g.b == 0) return true;
    return valuation_q(p, g.a) <= valuation_q(p, g.b);
}

bool in_gplus(const Mat2Z& g) {
    auto va = valuation(g.a);
    auto vb = valuation(g.b);
    if (!va) return false;
    if (!vb) return true;
    return *va <= *vb;
}

bool in_gplus(const Mat2<PAdicApprox>& g) {
    auto va = g.a.val();
    auto vb = g.b.val();
    if (!va) return false;
    if (!vb) return true;
    return *va <= *vb;
}

BruhatFactors bruhat_padic(std::int64_t p, const Mat2Q& g) {
    if (g.det() != 1) throw std::domain_error("bruhat_padic: determinant must be 1");
    if (!in_gplus(p, g)) throw std::domain_error("bruhat_padic: |a|_p < |b|_p");
    std::int64_t va = valuation_q(p, g.a);
    mpq_class u = unit_part_q(p, g.a);
    mpq_class m = g.b / g.a;
    m.canonicalize();
    mpq_class beta = g.c / g.a;
    beta.canonicalize();
    return {u, m, -va, beta};
}

Mat2Q compose_bruhat(std::int64_t p, const BruhatFactors& f) {
    mpq_class pt(pow_p(p, std::abs(f.t)));
    mpq_class a_hi = f.t >= 0 ? mpq_class(1 / pt) : pt;  // p^-t
    mpq_class a_lo = f.t >= 0 ? pt : mpq_class(1 / pt);  // p^t
    Mat2Q q{f.u, mpq_class(0), f.m * f.u, mpq_class(1) / f.u};
    Mat2Q a{a_hi, mpq_class(0), mpq_class(0), a_lo};
    Mat2Q n{mpq_class(1), f.beta, mpq_class(0), mpq_class(1)};
    Mat2Q r = q * a * n;
    r.a.canonicalize();
    r.b.canonicalize();
    r.c.canonicalize();
    r.d.canonicalize();
    return r;
}

BruhatFactorsApprox bruhat_padic(const Mat2<PAdicApprox>& g) {
    if (!in_gplus(g)) throw std::domain_error("bruhat_padic: |a|_p < |b|_p");
    const PAdicApprox& a = g.a;
    std::int64_t p = a.prime();
    std::int64_t va = a.val_finite();
    PAdicApprox u(p, 0, a.unit(), a.prec());
    PAdicApprox inv_a = a.inverse();
    PAdicApprox m = g.b.is_zero() ? PAdicApprox::zero(p) : g.b * inv_a;
    PAdicApprox beta = g.c.is_zero() ? PAdicApprox::zero(p) : g.c * inv_a;
    return {u, m, -va, beta};
}

Mat2<PAdicApprox> compose_bruhat(std::int64_t p, const BruhatFactorsApprox& f) {
    PAdicApprox zero = PAdicApprox::zero(p);
    PAdicApprox one(p, 0, 1, f.u.prec());
    Mat2<PAdicApprox> q{f.u, zero, f.m * f.u, f.u.inverse()};
    PAdicApprox a_hi(p, -f.t, 1, f.u.prec());
    PAdicApprox a_lo(p, f.t, 1, f.u.prec());
    Mat2<PAdicApprox> a{a_hi, zero, zero, a_lo};
    Mat2<PAdicApprox> n{one, f.beta, zero, one};
    return q * a * n;
}

} // namespace pdir
