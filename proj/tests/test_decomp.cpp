#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pdir/decomp.hpp"
#include "pdir/haar.hpp"
#include "pdir/lattice.hpp"

using namespace pdir;

namespace {

std::mt19937_64 rng(777001);

ZInvP random_entry(std::int64_t p) {
    std::uniform_int_distribution<std::int64_t> mant(-40, 40);
    std::uniform_int_distribution<std::int64_t> expo(-3, 3);
    return ZInvP(p, mpz_class(static_cast<long>(mant(rng))), expo(rng));
}

// Random word in the elementary generators: exact entries in Z[1/p],
// determinant one.
Mat2Z random_sl2_zinvp(std::int64_t p) {
    Mat2Z g = identity_z(p);
    std::uniform_int_distribution<int> len(2, 6);
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        ZInvP x = random_entry(p);
        if (rng() & 1) {
            g = g * Mat2Z{ZInvP::one(p), x, ZInvP::zero(p), ZInvP::one(p)};
        } else {
            g = g * Mat2Z{ZInvP::one(p), ZInvP::zero(p), x, ZInvP::one(p)};
        }
    }
    return g;
}

Mat2Z random_sl2_zinvp_gplus(std::int64_t p) {
    for (;;) {
        Mat2Z g = random_sl2_zinvp(p);
        if (in_gplus(g)) return g;
    }
}

double max_abs_diff(const Mat2<double>& x, const Mat2Q& y) {
    return std::max({std::abs(x.a - y.a.get_d()), std::abs(x.c - y.c.get_d()),
                     std::abs(x.b - y.b.get_d()), std::abs(x.d - y.d.get_d())});
}

} // namespace

TEST_CASE("real factor coordinates of the identity") {
    IwasawaRealFactors f = iwasawa_real(identity_q());
    CHECK(f.theta == doctest::Approx(0.0));
    CHECK(f.alpha == doctest::Approx(1.0));
    CHECK(f.x == doctest::Approx(0.0));
    CHECK(f.alpha_sq == 1);
    CHECK(f.x_exact == 0);
}

TEST_CASE("real factor coordinates, worked example") {
    Mat2Q g{mpq_class(3), mpq_class(2), mpq_class(4), mpq_class(3)};
    REQUIRE(g.det() == 1);
    IwasawaRealFactors f = iwasawa_real(g);
    CHECK(f.alpha_sq == 25);
    CHECK(f.x_exact == mpq_class(18, 25)); // (a*c + b*d) / (a^2 + b^2)
    CHECK(max_abs_diff(compose_iwasawa(f), g) < 1e-12);
}

TEST_CASE("real recomposition on random matrices") {
    for (int i = 0; i < 2000; ++i) {
        Mat2Z gz = random_sl2_zinvp(2);
        Mat2Q g = to_rational(gz);
        IwasawaRealFactors f = iwasawa_real(g);
        // exact x-coordinate, never a float round trip
        mpq_class expect = (g.a * g.c + g.b * g.d) / f.alpha_sq;
        expect.canonicalize();
        CHECK(f.x_exact == expect);
        double scale = std::max(1.0, std::sqrt(f.alpha_sq.get_d()));
        CHECK(max_abs_diff(compose_iwasawa(f), g) / scale < 1e-9);
    }
}

TEST_CASE("quarter turn composes to the rotation") {
    Mat2<double> k = compose_iwasawa(M_PI / 2, 1.0, 0.0);
    CHECK(std::abs(k.a - 0.0) < 1e-12);
    CHECK(std::abs(k.c - (-1.0)) < 1e-12);
    CHECK(std::abs(k.b - 1.0) < 1e-12);
    CHECK(std::abs(k.d - 0.0) < 1e-12);
}

TEST_CASE("chart membership") {
    CHECK(in_gplus(3, identity_q()));
    Mat2Q low{mpq_class(3), mpq_class(1), mpq_class(1), mpq_class(1)};
    Mat2Q ok{mpq_class(1), mpq_class(1), mpq_class(3), mpq_class(4)};
    REQUIRE(low.det() == mpq_class(2)); // chart test ignores the determinant
    CHECK_FALSE(in_gplus(3, low));      // |3|_3 < |1|_3
    CHECK(in_gplus(3, ok));             // |1|_3 >= |3|_3
    Mat2Q zero_a{mpq_class(0), mpq_class(-1), mpq_class(1), mpq_class(0)};
    CHECK_FALSE(in_gplus(3, zero_a));
}

TEST_CASE("factor coordinates, pinned examples") {
    BruhatFactors id = bruhat_padic(3, identity_q());
    CHECK(id.u == 1);
    CHECK(id.m == 0);
    CHECK(id.t == 0);
    CHECK(id.beta == 0);

    // diag(1/p, p)
    Mat2Q d{mpq_class(1, 3), mpq_class(0), mpq_class(0), mpq_class(3)};
    BruhatFactors f = bruhat_padic(3, d);
    CHECK(f.u == 1);
    CHECK(f.m == 0);
    CHECK(f.t == 1); // first column norm is p^1
    CHECK(f.beta == 0);
    CHECK(compose_bruhat(3, f) == d);

    Mat2Q g{mpq_class(2), mpq_class(1), mpq_class(1), mpq_class(1)};
    REQUIRE(g.det() == 1);
    BruhatFactors h = bruhat_padic(3, g);
    CHECK(h.u == 2);
    CHECK(h.m == mpq_class(1, 2)); // b/a, a 3-adic integer with residue 2 mod 3
    CHECK(residue_mod_pk(3, h.m, 1) == 2);
    CHECK(h.t == 0);
    CHECK(h.beta == mpq_class(1, 2));
    CHECK(compose_bruhat(3, h) == g); // recomposition pins the convention
}

TEST_CASE("exact round trip decompose-compose") {
    for (std::int64_t p : {2, 3, 5}) {
        for (int i = 0; i < 1200; ++i) {
            Mat2Z gz = random_sl2_zinvp_gplus(p);
            Mat2Q g = to_rational(gz);
            BruhatFactors f = bruhat_padic(p, g);
            CHECK(valuation_q(p, f.u) == 0);
            CHECK((f.m == 0 || valuation_q(p, f.m) >= 0));
            CHECK(compose_bruhat(p, f) == g);
        }
    }
}

TEST_CASE("factor tuples are coordinates") {
    std::uniform_int_distribution<std::int64_t> tdist(-4, 4);
    std::uniform_int_distribution<std::int64_t> zdist(-50, 50);
    std::uniform_int_distribution<std::int64_t> wdist(1, 50);
    for (std::int64_t p : {2, 5}) {
        for (int i = 0; i < 1500; ++i) {
            // denominators coprime to p keep u a unit and m integral
            std::int64_t un = zdist(rng);
            while (un == 0 || un % p == 0) ++un;
            std::int64_t wd = wdist(rng);
            while (wd % p == 0) ++wd;
            BruhatFactors f;
            f.u = mpq_class(un, wd);
            f.u.canonicalize();
            f.m = mpq_class(zdist(rng), wd);
            f.m.canonicalize();
            f.t = tdist(rng);
            std::int64_t bn = zdist(rng);
            std::int64_t bscale = tdist(rng);
            f.beta = mpq_class(bn, wd);
            if (bscale >= 0)
                f.beta *= pow_p(p, bscale);
            else
                f.beta /= pow_p(p, -bscale);
            f.beta.canonicalize();
            Mat2Q g = compose_bruhat(p, f);
            BruhatFactors back = bruhat_padic(p, g);
            CHECK(back.u == f.u);
            CHECK(back.m == f.m);
            CHECK(back.t == f.t);
            CHECK(back.beta == f.beta);
        }
    }
}

TEST_CASE("factor coordinates of the lattice matrices match the vector data") {
    // For gamma = [v-perp | w] the diagonal coordinate carries the norm of
    // the first column and the compact factor's first column carries its
    // direction.
    std::int64_t p = 3;
    for (std::int64_t a = -14; a <= 14; ++a) {
        for (std::int64_t b = -14; b <= 14; ++b) {
            if (a == 0 && b == 0) continue;
            if (!is_primitive_z(a, b)) continue;
            Vec2Z v{ZInvP::from_integer(p, static_cast<long>(a)),
                    ZInvP::from_integer(p, static_cast<long>(b))};
            GammaMatrix gm = gamma_from_prim(v);
            Mat2Q g = to_rational(gm.gamma);
            BruhatFactors f = bruhat_padic(p, g);
            Vec2Z col{gm.gamma.a, gm.gamma.b};
            CHECK(f.t == *norm_exponent(col));
            Vec2Z dir = direction_p(col);
            CHECK(f.u == dir.x.to_rational());
            mpq_class lower = f.m * f.u;
            lower.canonicalize();
            CHECK(lower == dir.y.to_rational());
        }
    }
}

TEST_CASE("truncated factor coordinates recompose at working precision") {
    for (std::int64_t p : {2, 5}) {
        for (int i = 0; i < 600; ++i) {
            Mat2Z gz = random_sl2_zinvp_gplus(p);
            int prec = 8;
            Mat2<PAdicApprox> g{PAdicApprox::from_zinvp(gz.a, prec),
                                PAdicApprox::from_zinvp(gz.c, prec),
                                PAdicApprox::from_zinvp(gz.b, prec),
                                PAdicApprox::from_zinvp(gz.d, prec)};
            BruhatFactorsApprox f = bruhat_padic(g);
            Mat2<PAdicApprox> back = compose_bruhat(p, f);
            CHECK(back.a.agrees(g.a));
            CHECK(back.b.agrees(g.b));
            CHECK(back.c.agrees(g.c));
            CHECK(back.d.agrees(g.d));
            // consistency with the exact route
            BruhatFactors fe = bruhat_padic(p, to_rational(gz));
            CHECK(f.t == fe.t);
        }
    }
}

TEST_CASE("matrices outside the coordinate patch become rare with precision") {
    // At residue level N the undecomposable elements are those with the
    // top-left entry congruent to zero; their frequency shrinks like p^-N.
    std::int64_t p = 3;
    double prev = 1.0;
    for (int N : {1, 2, 3, 4}) {
        int misses = 0;
        int trials = 20000;
        for (int i = 0; i < trials; ++i) {
            ResidueMat2 k = sample_sl2_residue(p, N, rng);
            if (k.a == 0) ++misses;
        }
        double freq = static_cast<double>(misses) / trials;
        CHECK(freq <= prev + 0.01);
        prev = freq;
    }
    CHECK(prev < 0.02);
}
