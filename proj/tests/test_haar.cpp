#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "pdir/haar.hpp"

using namespace pdir;

TEST_CASE("residue group orders") {
    // |SL2(Z/p^n)| = p^{3n} (1 - p^-2), verified by direct enumeration
    CHECK(sl2_residue_order(2, 1) == 6);
    CHECK(sl2_residue_order(2, 2) == 48);
    CHECK(sl2_residue_order(3, 1) == 24);
    CHECK(sl2_residue_order(3, 2) == 648);
    CHECK_THROWS_AS(sl2_residue_order(2, 9), std::invalid_argument);
}

TEST_CASE("volume variants on pinned boxes") {
    for (std::int64_t p : {2, 3, 5}) {
        // full direction constraint, psi = 0, t = 0
        BruhatBox full = BruhatBox::full();
        VolumePair v = volume_bruhat_box(p, full);
        CHECK(v.density_variant == half_circle_measure(p));
        // the printed series variant vanishes at psi = 0; the oracle
        // arbitrates between the two (see below)
        CHECK(v.series_variant == 0);

        // a single radius-1/p arc, psi = 0
        BruhatBox one;
        one.arc = PAdicArc(p, 1, 1, 0);
        VolumePair w = volume_bruhat_box(p, one);
        mpq_class expect(1, p * p);
        expect.canonicalize();
        CHECK(w.density_variant == expect);
    }
    CHECK_THROWS_AS(volume_bruhat_box(2, BruhatBox::full(1, 0)), std::invalid_argument);
}

TEST_CASE("variant disagreement on a t-range") {
    // asymmetric range so the two t-sums differ, p != 2 so the coset
    // factors differ as well
    BruhatBox box = BruhatBox::full(0, 1);
    box.psi = 1;
    VolumePair v = volume_bruhat_box(3, box);
    CHECK(v.density_variant != v.series_variant);
    // density variant: (1 - 1/p) * (1 + p^2) * p^-psi
    mpq_class expect = half_circle_measure(3) * mpq_class(10) * mpq_class(1, 3);
    expect.canonicalize();
    CHECK(v.density_variant == expect);
    // series variant as printed: (1 - 1/p) * (1 + p^-2) * (1 - p^-psi)
    mpq_class series = half_circle_measure(3) * mpq_class(10, 9) * mpq_class(2, 3);
    series.canonicalize();
    CHECK(v.series_variant == series);
}

TEST_CASE("exact pushforward oracle at level") {
    // full t = 0 box carries mass 1 - 1/p
    for (std::int64_t p : {2, 3}) {
        mpq_class full = residue_haar_oracle(p, 2, BruhatBox::full());
        CHECK(full == half_circle_measure(p));
    }

    // one radius-1/p arc, psi = 0: mass p^-2
    for (std::int64_t p : {2, 3}) {
        BruhatBox box;
        box.arc = PAdicArc(p, 1, 1, 0);
        mpq_class m = residue_haar_oracle(p, 2, box);
        mpq_class expect(1, p * p);
        expect.canonicalize();
        CHECK(m == expect);
    }
}

TEST_CASE("oracle is additive over disjoint boxes") {
    for (std::int64_t p : {2, 3}) {
        // arcs at level 1 with unit leading coordinate partition the full box
        mpq_class sum(0);
        for (const PAdicArc& arc : arc_partition(p, 1)) {
            if (arc.cx % p == 0) continue;
            BruhatBox box;
            box.arc = arc;
            sum += residue_haar_oracle(p, 2, box);
        }
        CHECK(sum == residue_haar_oracle(p, 2, BruhatBox::full()));

        // coset refinement in the unipotent coordinate
        BruhatBox parent;
        parent.arc = PAdicArc(p, 1, 1, 0);
        mpq_class whole = residue_haar_oracle(p, 2, parent);
        mpq_class parts(0);
        for (std::int64_t r = 0; r < p; ++r) {
            BruhatBox child = parent;
            child.psi = 1;
            child.alpha0 = static_cast<long>(r);
            parts += residue_haar_oracle(p, 2, child);
        }
        CHECK(parts == whole);
    }
}

TEST_CASE("oracle value is stable in the residue level") {
    for (std::int64_t p : {2, 3}) {
        BruhatBox box;
        box.arc = PAdicArc(p, 1, 1, p - 1);
        box.psi = 1;
        box.alpha0 = 1;
        mpq_class at2 = residue_haar_oracle(p, 2, box);
        mpq_class at3 = residue_haar_oracle(p, 3, box);
        CHECK(at2 == at3);
    }
}

TEST_CASE("oracle matches the density variant exactly") {
    for (std::int64_t p : {2, 3}) {
        int N = 2;
        int matches = 0, boxes = 0;
        for (int level = 1; level <= N; ++level) {
            for (const PAdicArc& arc : arc_partition(p, level)) {
                for (int psi = 0; psi <= N; ++psi) {
                    for (std::int64_t a0 = 0; a0 < pow_p_i64(p, psi); ++a0) {
                        BruhatBox box;
                        box.arc = arc;
                        box.psi = psi;
                        box.alpha0 = static_cast<long>(a0);
                        ++boxes;
                        if (residue_haar_oracle(p, N, box) ==
                            volume_bruhat_box(p, box).density_variant)
                            ++matches;
                    }
                }
            }
        }
        CHECK(matches == boxes);
    }
}

TEST_CASE("lattice growth oracle") {
    CHECK(lattice_growth_oracle(2, 10, 0) == primitive_count_leq(10));
    CHECK(lattice_growth_oracle(2, 0.4, 0) == 0); // R p^t < 1

    // R = 1: the four unit vectors
    CHECK(primitive_count_leq(1) == 4);
    // R = 2 adds the four diagonal unit-sum vectors
    CHECK(primitive_count_leq(2) == 8);

    // the count ratio at consecutive t approaches p^2
    double ratio = static_cast<double>(lattice_growth_oracle(2, 800, 1)) /
                   static_cast<double>(lattice_growth_oracle(2, 800, 0));
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("real volume variants") {
    RealVolumePair near_one = real_iwasawa_volume(2.0 * M_PI, 1.0, 1.0);
    CHECK(near_one.inverse_square_density == 0.0);
    CHECK(near_one.quadratic_density == 0.0);

    // the printed 1/alpha^2 density stays bounded in R
    RealVolumePair big = real_iwasawa_volume(2.0 * M_PI, 1e6, 1.0);
    CHECK(big.inverse_square_density < 2.0 * M_PI + 1e-9);

    // the quadratic variant tracks the primitive count: count ~ mu / (pi^2/6)
    double R = 900;
    RealVolumePair v = real_iwasawa_volume(2.0 * M_PI, R, 1.0);
    double predicted = v.quadratic_density / (M_PI * M_PI / 6.0);
    double actual = static_cast<double>(primitive_count_leq(R));
    CHECK(actual / predicted == doctest::Approx(1.0).epsilon(0.02));
    double predicted_e = big.inverse_square_density / (M_PI * M_PI / 6.0);
    CHECK(predicted_e < 10.0); // nowhere near any count at large R
}

TEST_CASE("residue sampling is uniform on the group") {
    std::mt19937_64 rng(100);
    std::int64_t p = 3;
    int N = 1;
    std::map<std::string, int> freq;
    int trials = 24000;
    for (int i = 0; i < trials; ++i) {
        ResidueMat2 k = sample_sl2_residue(p, N, rng);
        std::int64_t pn = pow_p_i64(p, N);
        CHECK(((k.a * k.d - k.c * k.b) % pn + pn) % pn == 1 % pn);
        freq[std::to_string(k.a) + "," + std::to_string(k.c) + "," + std::to_string(k.b) +
             "," + std::to_string(k.d)] += 1;
    }
    CHECK(freq.size() == 24); // |SL2(F_3)|
    for (const auto& [key, count] : freq) {
        CHECK(count > trials / 24 / 2);
        CHECK(count < trials / 24 * 2);
    }
}

TEST_CASE("measure arbitration names unique winners") {
    ArbitrationReport rep = arbitrate_measures(2, 600);
    CHECK(rep.diag_exponent_growth_confirmed);
    CHECK(rep.coset_measure_confirmed);
    CHECK(rep.boxes_matching_density == rep.boxes_checked);
    CHECK(rep.boxes_matching_series < rep.boxes_checked);
    CHECK(rep.real_quadratic_confirmed);
}
