#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "pdir/mat2.hpp"
#include "pdir/padic_approx.hpp"

namespace pdir {

/**
 * Rotation-diagonal-unipotent coordinates of a real determinant-one matrix:
 *
 *   g = K(theta) * diag(alpha, 1/alpha) * [[1, x], [0, 1]],
 *
 * where K(theta) rotates the first column direction. alpha_sq and x_exact
 * are exact rationals for a rational input, so membership tests never go
 * through floats.
 */
struct IwasawaRealFactors {
    double theta;
    double alpha;
    double x;
    mpq_class alpha_sq;
    mpq_class x_exact;
};

IwasawaRealFactors iwasawa_real(const Mat2Q& g);
Mat2<double> compose_iwasawa(double theta, double alpha, double x);
Mat2<double> compose_iwasawa(const IwasawaRealFactors& f);

/// |a|_p >= |b|_p for the first column (a, b); the chart on which the
/// lower-triangular-compact * diagonal * unipotent coordinates are defined.
bool in_gplus(std::int64_t p, const Mat2Q& g);
bool in_gplus(const Mat2Z& g);
bool in_gplus(const Mat2<PAdicApprox>& g);

/**
 * Coordinates (u, m, t, beta) of g = Q * A * N on the |a| >= |b| chart:
 *
 *   Q = [[u, 0], [m*u, 1/u]],  A = diag(p^-t, p^t),  N = [[1, beta], [0, 1]]
 *
 * with u the unit part of the top-left entry, m = b/a a p-adic integer,
 * p^t the p-adic norm of the first column, and beta = c/a. Exact over the
 * rationals; the recomposition reproduces g exactly.
 */
struct BruhatFactors {
    mpq_class u;
    mpq_class m;
    std::int64_t t;
    mpq_class beta;
};

BruhatFactors bruhat_padic(std::int64_t p, const Mat2Q& g);
Mat2Q compose_bruhat(std::int64_t p, const BruhatFactors& f);

/// Truncated-entry variant; valuations exact, units correct at the working
/// precision.
struct BruhatFactorsApprox {
    PAdicApprox u;
    PAdicApprox m; // exact zero when b = 0
    std::int64_t t;
    PAdicApprox beta; // exact zero when c = 0
};

BruhatFactorsApprox bruhat_padic(const Mat2<PAdicApprox>& g);
Mat2<PAdicApprox> compose_bruhat(std::int64_t p, const BruhatFactorsApprox& f);

} // namespace pdir
