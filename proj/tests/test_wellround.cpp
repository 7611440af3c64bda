#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pdir/wellround.hpp"

using namespace pdir;

namespace {

std::mt19937_64 rng(31337);

mpq_class random_p_integer(std::int64_t p, std::mt19937_64& r) {
    std::uniform_int_distribution<std::int64_t> num(-400, 400);
    std::uniform_int_distribution<std::int64_t> den(1, 60);
    std::int64_t d = den(r);
    while (d % p == 0) ++d;
    mpq_class q(static_cast<long>(num(r)), static_cast<long>(d));
    q.canonicalize();
    return q;
}

} // namespace

TEST_CASE("neighborhood membership") {
    std::int64_t p = 3;
    CHECK(nbhd_contains(p, NbhdSpec{1}, identity_q()));
    CHECK(nbhd_contains(p, NbhdSpec{5}, identity_q()));

    // I + p^N * E12 completed to determinant one sits at level N, not N+1
    int N = 2;
    mpq_class pn(pow_p(p, N));
    Mat2Q g{mpq_class(1), pn, mpq_class(0), mpq_class(1)};
    CHECK(nbhd_contains(p, NbhdSpec{N}, g));
    CHECK_FALSE(nbhd_contains(p, NbhdSpec{N + 1}, g));

    // diag(1 + p^{N-1}, (1 + p^{N-1})^-1) misses level N
    mpq_class u = 1 + mpq_class(pow_p(p, N - 1));
    Mat2Q d{u, mpq_class(0), mpq_class(0), mpq_class(1) / u};
    d.d.canonicalize();
    CHECK_FALSE(nbhd_contains(p, NbhdSpec{N}, d));
    CHECK(nbhd_contains(p, NbhdSpec{N - 1}, d));

    CHECK(nbhd_contains(p, NbhdSpec{N, Subgroup::UpperUnipotent}, g));
    CHECK_FALSE(nbhd_contains(p, NbhdSpec{N, Subgroup::LowerCompact}, g));
    CHECK_THROWS_AS(nbhd_contains(p, NbhdSpec{0}, g), std::invalid_argument);
}

TEST_CASE("neighborhood membership at finite precision") {
    std::int64_t p = 3;
    int N = 2;
    auto approx_of = [&](const mpq_class& x, int prec) {
        return PAdicApprox::from_rational(p, x, prec);
    };
    mpq_class pn(pow_p(p, N));
    Mat2<PAdicApprox> g{approx_of(1 + pn, 6), PAdicApprox::zero(p), PAdicApprox::zero(p),
                        approx_of(1 / (1 + pn), 6)};
    CHECK(nbhd_contains(NbhdSpec{N}, g));
    CHECK_FALSE(nbhd_contains(NbhdSpec{N + 1}, g));
    CHECK(nbhd_contains(NbhdSpec{N, Subgroup::DiagonalUnits}, g));

    // one known digit cannot settle level-2 congruence of the unit
    Mat2<PAdicApprox> shallow{PAdicApprox(p, 0, 1 + 3, 1), PAdicApprox::zero(p),
                              PAdicApprox::zero(p), PAdicApprox(p, 0, 1, 6)};
    CHECK_THROWS_AS(nbhd_contains(NbhdSpec{N}, shallow), precision_error);
}

TEST_CASE("closed-form splitting of neighborhood elements") {
    std::int64_t p = 2;
    int N = 2;
    for (int i = 0; i < 10000; ++i) {
        Mat2Q g = sample_nbhd_q(p, N, 4, rng);
        auto [q, n] = split_nbhd(p, N, g);
        CHECK(q * n == g); // exact reconstruction
        CHECK(nbhd_contains(p, NbhdSpec{N, Subgroup::LowerCompact}, q));
        CHECK(nbhd_contains(p, NbhdSpec{N, Subgroup::UpperUnipotent}, n));
        // the closed form: upper-right over the top-left unit
        mpq_class z = g.c / g.a;
        z.canonicalize();
        CHECK(n.c == z);

        auto [nminus, m] = split_q_nbhd(p, N, q);
        CHECK(nminus * m == q);
        CHECK(nbhd_contains(p, NbhdSpec{N, Subgroup::LowerUnipotent}, nminus));
        CHECK(nbhd_contains(p, NbhdSpec{N, Subgroup::DiagonalUnits}, m));
    }
    CHECK_NOTHROW(split_nbhd(p, N, identity_q()));
    Mat2Q off{mpq_class(1), mpq_class(1), mpq_class(0), mpq_class(1)};
    CHECK_THROWS_AS(split_nbhd(p, N, off), std::domain_error);
}

TEST_CASE("adjoint operator norm") {
    std::int64_t p = 5;
    // compact elements have norm one
    CHECK(ad_opnorm_exponent(p, identity_q()) == 0);
    Mat2Q k{mpq_class(2), mpq_class(1), mpq_class(1), mpq_class(1)};
    REQUIRE(k.det() == 1);
    CHECK(ad_opnorm_exponent(p, k) == 0);

    // diag(p^-t, p^t) with t > 0 scales the off-diagonal units by p^{2t}
    CHECK(ad_opnorm_exponent(p, to_rational(mat_diag_power(p, 1))) == 2);
    CHECK(ad_opnorm_exponent(p, to_rational(mat_diag_power(p, -2))) == 4);

    // unipotent n_x with |x| = p^k, k > 0: norm p^{2k}
    mpq_class x = mpq_class(1) / pow_p(p, 3);
    CHECK(ad_opnorm_exponent(p, mat_upper_q(x)) == 6);
    CHECK(ad_opnorm_exponent(p, mat_upper_q(mpq_class(7))) == 0);

    CHECK_THROWS_AS(
        ad_opnorm_exponent(p, Mat2Q{mpq_class(0), mpq_class(0), mpq_class(0), mpq_class(0)}),
        std::domain_error);
}

TEST_CASE("adjoint norm equals the max-entry norm of the 4x4 representation") {
    // The operator norm over the unit ball of 2x2 matrices is attained on
    // a matrix unit; spot-check against a brute force over random unit-ball
    // elements at finite depth.
    std::int64_t p = 3;
    std::uniform_int_distribution<std::int64_t> d(-40, 40);
    for (int i = 0; i < 300; ++i) {
        Mat2Q g = to_rational(mat_diag_power(p, d(rng) % 3)) *
                  mat_upper_q(random_p_integer(p, rng)) *
                  mat_lower_q(random_p_integer(p, rng));
        std::int64_t claimed = ad_opnorm_exponent(p, g);
        mpq_class det = g.det();
        Mat2Q inv{g.d / det, -g.c / det, -g.b / det, g.a / det};
        std::int64_t seen = -1000;
        for (int j = 0; j < 64; ++j) {
            Mat2Q t{random_p_integer(p, rng), random_p_integer(p, rng),
                    random_p_integer(p, rng), random_p_integer(p, rng)};
            Mat2Q img = g * t * inv;
            for (const mpq_class* e : {&img.a, &img.c, &img.b, &img.d}) {
                if (*e != 0) seen = std::max(seen, -valuation_q(p, *e));
            }
        }
        CHECK(seen <= claimed); // never exceeded
    }
}

TEST_CASE("residue-level adjoint norm of compact elements is one") {
    std::mt19937_64 local(555);
    for (std::int64_t p : {2, 3, 5}) {
        for (int i = 0; i < 3400; ++i) {
            ResidueMat2 k = sample_sl2_residue(p, 6, local);
            CHECK(ad_opnorm_residue_exponent(p, 6, k) == 0);
        }
    }
}

TEST_CASE("conjugation inflates neighborhoods by at most the adjoint norm") {
    std::mt19937_64 local(556);
    std::uniform_int_distribution<std::int64_t> td(-2, 2);
    for (std::int64_t p : {2, 3}) {
        for (int i = 0; i < 2500; ++i) {
            Mat2Q g = to_rational(mat_diag_power(p, td(local))) *
                      mat_upper_q(random_p_integer(p, local)) *
                      mat_lower_q(random_p_integer(p, local));
            std::int64_t ad = ad_opnorm_exponent(p, g);
            int N = 6;
            Mat2Q u = sample_nbhd_q(p, N, 3, local);
            mpq_class det = g.det();
            Mat2Q inv{g.d / det, -g.c / det, -g.b / det, g.a / det};
            Mat2Q w = g * u * inv;
            int target = static_cast<int>(N - ad);
            REQUIRE(target >= 1);
            CHECK(nbhd_contains(p, NbhdSpec{target}, w));
        }
    }
}

TEST_CASE("diagonal conjugation identities hold symbolically") {
    std::uniform_int_distribution<std::int64_t> td(-6, 6);
    std::uniform_int_distribution<std::int64_t> md(-50, 50);
    for (std::int64_t p : {2, 3, 5}) {
        for (int i = 0; i < 340; ++i) {
            std::int64_t t = td(rng);
            ZInvP x(p, mpz_class(static_cast<long>(md(rng))), td(rng));
            Mat2Z a = mat_diag_power(p, t);
            Mat2Z ainv = mat_diag_power(p, -t);
            // a^-1 n_x a = n_{x p^{2t}}
            Mat2Z lhs = ainv * mat_upper(x) * a;
            CHECK(lhs == mat_upper(x.scale_p(2 * t)));
            // a n-_y a^-1 = n-_{y p^{2t}}
            ZInvP y(p, mpz_class(static_cast<long>(md(rng))), td(rng));
            Mat2Z lhs2 = a * mat_lower(y) * ainv;
            CHECK(lhs2 == mat_lower(y.scale_p(2 * t)));
        }
    }
}

TEST_CASE("perturbation constants, pinned examples") {
    std::int64_t p = 3;
    EffConstants c0 = effective_constant(p, 0, mpq_class(0));
    CHECK(c0.statement_exp == 0);
    CHECK(c0.proof_exp == 0);

    EffConstants c1 = effective_constant(p, 2, mpq_class(7)); // t >= 0, x integral
    CHECK(c1.statement_exp == 0);
    CHECK(c1.proof_exp == 0);

    // t = -1, |x| = p: the two printed constants diverge
    EffConstants c2 = effective_constant(p, -1, mpq_class(1, 3));
    CHECK(c2.statement_exp == 2 + 1); // ||Ad n|| = p^2, max(p^-t, 1) = p
    CHECK(c2.proof_exp == 4 + 2);     // C(a)^2 = p^4, C(n) = p^2
    CHECK(c2.statement_exp != c2.proof_exp);
}

TEST_CASE("factor-wise stability under two-sided perturbations") {
    std::mt19937_64 local(557);
    for (std::int64_t p : {2, 3, 5}) {
        // q = identity, a = identity, n = identity: epsilon = p^-2
        InclusionResult base = effective_inclusion_check(p, mpq_class(1), mpq_class(0), 0,
                                                         mpq_class(0), 2, 1000, local);
        CHECK(base.ok);

        // generic compact factor and t = 0 box data
        InclusionResult gen = effective_inclusion_check(
            p, mpq_class(1 + p), random_p_integer(p, local), 0, random_p_integer(p, local), 3,
            1000, local);
        CHECK(gen.ok);

        // negative t with the proof constant still passes at high level
        EffConstants c = effective_constant(p, -1, mpq_class(1));
        InclusionResult neg = effective_inclusion_check(p, mpq_class(1), mpq_class(0), -1,
                                                        mpq_class(1),
                                                        static_cast<int>(c.proof_exp) + 3, 400,
                                                        local);
        CHECK(neg.ok);

        CHECK_THROWS_AS(effective_inclusion_check(p, mpq_class(1), mpq_class(0), -2,
                                                  mpq_class(1), 2, 10, local),
                        std::invalid_argument); // epsilon above 1/c
    }
}

TEST_CASE("box equality at residue level, pinned example") {
    // p = 2, arc radius 1/2, t = 0, psi = 0, eps = 1/4
    BruhatBox box;
    box.arc = PAdicArc(2, 1, 1, 0);
    WRVerdict v = wr_box_equality(2, box, 2);
    CHECK(v.in_regime);
    CHECK(v.plus_equal);
    CHECK(v.minus_equal);
    CHECK(v.classes_checked > 0);
    CHECK(v.products_checked > 0);
}

TEST_CASE("box equality rejects eps = 1 and t ranges") {
    BruhatBox box;
    box.arc = PAdicArc(2, 1, 1, 0);
    CHECK_THROWS_AS(wr_box_equality(2, box, 0), std::invalid_argument);
    BruhatBox trange = BruhatBox::full(-1, 1);
    CHECK_THROWS_AS(wr_box_equality(2, trange, 2), std::invalid_argument);
}

TEST_CASE("out-of-regime perturbations do escape") {
    // A level-2 arc perturbed at level 1 must overflow the box: the engine
    // is expected to detect the strict inclusion.
    BruhatBox box;
    box.arc = PAdicArc(2, 2, 1, 0);
    WRVerdict v = wr_box_equality(2, box, 1);
    CHECK_FALSE(v.in_regime);
    CHECK_FALSE(v.plus_equal);
    CHECK(v.witness.has_value());
}

TEST_CASE("equality across the full grid of small boxes") {
    for (std::int64_t p : {2, 3}) {
        for (const PAdicArc& arc : arc_partition(p, 1)) {
            for (int psi : {0, 1}) {
                for (std::int64_t a0 = 0; a0 < (psi ? p : 1); ++a0) {
                    BruhatBox box;
                    box.arc = arc;
                    box.psi = psi;
                    box.alpha0 = static_cast<long>(a0);
                    for (int eps : {2, 3}) {
                        WRVerdict v = wr_box_equality(p, box, eps);
                        CHECK(v.in_regime);
                        CHECK(v.plus_equal);
                        CHECK(v.minus_equal);
                    }
                }
            }
        }
    }
}

TEST_CASE("shrinking epsilon keeps verdicts stable") {
    BruhatBox box;
    box.arc = PAdicArc(3, 1, 2, 1);
    box.psi = 1;
    box.alpha0 = 2;
    auto verdicts = wr_box_equality_grid(3, box, {1, 2, 3, 4});
    for (const WRVerdict& v : verdicts) {
        CHECK(v.plus_equal);
        CHECK(v.minus_equal);
    }
}
