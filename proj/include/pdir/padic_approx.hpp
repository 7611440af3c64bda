#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <gmpxx.h>

#include "pdir/zinvp.hpp"

namespace pdir {

/**
 * Truncated p-adic number u * p^val with the unit u known modulo p^prec.
 * Zero is a distinct exact value (valuation infinity), never a unit with a
 * large valuation. Relative precision is tracked per value; an operation
 * whose result would retain fewer than one known digit throws
 * precision_error instead of returning a silent zero.
 */
class PAdicApprox {
public:
    PAdicApprox(std::int64_t p, std::int64_t val, mpz_class unit, int prec);

    static PAdicApprox zero(std::int64_t p);
    static PAdicApprox from_zinvp(const ZInvP& x, int prec);
    static PAdicApprox from_rational(std::int64_t p, const mpq_class& x, int prec);

    std::int64_t prime() const { return p_; }
    bool is_zero() const { return zero_; }
    /// Valuation; nullopt encodes infinity (exact zero).
    std::optional<std::int64_t> val() const;
    std::int64_t val_finite() const;
    const mpz_class& unit() const;
    int prec() const { return prec_; }

    PAdicApprox operator+(const PAdicApprox& rhs) const;
    PAdicApprox operator-(const PAdicApprox& rhs) const;
    PAdicApprox operator*(const PAdicApprox& rhs) const;
    PAdicApprox operator-() const;
    PAdicApprox inverse() const;

    /// {x} as an exact element of Z[1/p]; needs all digits below p^0.
    ZInvP frac_part() const;

    /// Indistinguishable at the shared precision.
    bool agrees(const PAdicApprox& rhs) const;

    std::string str() const;

private:
    PAdicApprox() = default;

    std::int64_t p_ = 0;
    bool zero_ = false;
    std::int64_t val_ = 0;
    mpz_class unit_;
    int prec_ = 0;
};

std::optional<std::int64_t> valuation(const PAdicApprox& x);
std::optional<std::int64_t> abs_exponent(const PAdicApprox& x);
std::pair<mpz_class, std::int64_t> unit_decompose(const PAdicApprox& x);

} // namespace pdir
