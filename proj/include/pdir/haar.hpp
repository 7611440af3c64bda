#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>
#include <gmpxx.h>

#include "pdir/plane.hpp"

namespace pdir {

/**
 * A coordinate box in the lower-compact/diagonal/unipotent coordinates:
 * direction constraint (an arc, or the full plus-half circle), diagonal
 * range t1..t2, and unipotent coset alpha0 + p^psi * Z_p.
 */
struct BruhatBox {
    std::optional<PAdicArc> arc; // nullopt = full plus-half circle
    std::int64_t t1 = 0, t2 = 0;
    int psi = 0;
    mpz_class alpha0 = 0; // residue mod p^psi

    static BruhatBox full(std::int64_t t1 = 0, std::int64_t t2 = 0) {
        BruhatBox b;
        b.t1 = t1;
        b.t2 = t2;
        return b;
    }
};

/**
 * The two printed volume formulas disagree in the sign of the diagonal
 * exponent and in the unipotent factor, so both are computed and an exact
 * finite-level oracle arbitrates. The confirmed variant is frozen as
 * volume_winning().
 */
struct VolumePair {
    mpq_class density_variant; // mu(arc) * sum p^{2t} * p^{-psi}
    mpq_class series_variant;  // mu(arc) * sum p^{-2t} * (1 - p^{-psi})
};

VolumePair volume_bruhat_box(std::int64_t p, const BruhatBox& box);
mpq_class volume_winning(std::int64_t p, const BruhatBox& box);

/**
 * Exact pushforward of the uniform measure on SL2(Z/p^N) for boxes with
 * t1 = t2 = 0, scaled so the whole group carries the full-circle mass
 * 1 - p^-2 (which gives the full t=0 box mass 1 - 1/p). Requires
 * p^N <= cap and arc level, psi <= N.
 */
mpq_class residue_haar_oracle(std::int64_t p, int N, const BruhatBox& box,
                              std::int64_t cap = 32);

/// |SL2(Z/p^N)| by direct enumeration (same cap).
std::int64_t sl2_residue_order(std::int64_t p, int N, std::int64_t cap = 32);

/// #{primitive integer pairs with norm <= R}.
std::int64_t primitive_count_leq(double R);

/// #{v in Z[1/p]^2 primitive: ||v||_p = p^t, ||v|| <= R}
///   = #{w integer-primitive: ||w|| <= R * p^t}.
std::int64_t lattice_growth_oracle(std::int64_t p, double R, std::int64_t t);

/**
 * The two printed real volume formulas: the 1/alpha^2 density (bounded in
 * R) and the alpha-density (quadratic growth). The primitive counting
 * oracle arbitrates; the quadratic variant is the one frozen downstream.
 */
struct RealVolumePair {
    double inverse_square_density; // leb * |psi| * (1 - 1/R)
    double quadratic_density;      // leb * |psi| * (R^2 - 1) / 2
};

RealVolumePair real_iwasawa_volume(double leb_theta, double R, double psi_length);

/// A uniform element of SL2(Z/p^N) as four residues (a c; b d).
struct ResidueMat2 {
    std::int64_t a, c, b, d;
};

ResidueMat2 sample_sl2_residue(std::int64_t p, int N, std::mt19937_64& rng);

/// Summary of the three printed-formula arbitrations.
struct ArbitrationReport {
    bool diag_exponent_growth_confirmed; // count ratio ~ p^2 (not p^-2)
    double growth_ratio;                 // measured count(t+1)/count(t)
    bool coset_measure_confirmed;        // oracle == density variant on a grid
    int boxes_checked;
    int boxes_matching_density;
    int boxes_matching_series;
    bool real_quadratic_confirmed;       // primitive count grows ~ R^2
    double real_growth_ratio;            // count(2R)/count(R)
};

ArbitrationReport arbitrate_measures(std::int64_t p, double R);

} // namespace pdir
