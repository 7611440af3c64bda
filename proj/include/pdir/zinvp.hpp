#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

#include "pdir/prime.hpp"

namespace pdir {

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_primitive_error : std::domain_error {
    using std::domain_error::domain_error;
};

/**
 * Exact element of Z[1/p], kept in the canonical form m * p^e with p not
 * dividing m (and e = 0 when m = 0). The valuation of a non-zero value is
 * therefore its exponent.
 */
class ZInvP {
public:
    ZInvP(std::int64_t p, mpz_class mantissa, std::int64_t exponent);

    static ZInvP zero(std::int64_t p) { return ZInvP(p, 0, 0); }
    static ZInvP one(std::int64_t p) { return ZInvP(p, 1, 0); }
    static ZInvP from_integer(std::int64_t p, const mpz_class& n) { return ZInvP(p, n, 0); }
    /// Throws std::domain_error unless the denominator is a power of p.
    static ZInvP from_rational(std::int64_t p, const mpq_class& q);

    std::int64_t prime() const { return p_; }
    const mpz_class& mantissa() const { return m_; }
    std::int64_t exponent() const { return e_; }
    bool is_zero() const { return m_ == 0; }

    mpq_class to_rational() const;
    double to_double() const { return to_rational().get_d(); }

    /// "m*p^e", e.g. "3*2^-4".
    std::string str() const;
    /// Plain integer or "m/p^k", e.g. "3/16".
    std::string str_fraction() const;
    static ZInvP parse(std::int64_t p, const std::string& text);

    ZInvP operator+(const ZInvP& rhs) const;
    ZInvP operator-(const ZInvP& rhs) const;
    ZInvP operator*(const ZInvP& rhs) const;
    ZInvP operator-() const;
    /// Exact inverse; only defined when the mantissa is +-1.
    ZInvP inverse() const;
    /// Multiply by p^k.
    ZInvP scale_p(std::int64_t k) const;

    bool operator==(const ZInvP& rhs) const;
    bool operator!=(const ZInvP& rhs) const { return !(*this == rhs); }

private:
    std::int64_t p_;
    mpz_class m_;
    std::int64_t e_;
};

/// nu(x); nullopt encodes nu(0) = infinity.
std::optional<std::int64_t> valuation(const ZInvP& x);

/// |x|_p = p^exp; nullopt encodes |0|_p = 0.
std::optional<std::int64_t> abs_exponent(const ZInvP& x);

/// x = unit * p^val with p not dividing unit; throws std::domain_error on 0.
std::pair<mpz_class, std::int64_t> unit_decompose(const ZInvP& x);

// The same p-adic bookkeeping on exact rationals; these carry the Bruhat
// coordinates, which live in Q rather than Z[1/p].

std::int64_t valuation_q(std::int64_t p, const mpq_class& x); // x != 0
std::optional<std::int64_t> valuation_q_opt(std::int64_t p, const mpq_class& x);
bool is_p_integer(std::int64_t p, const mpq_class& x); // nu >= 0
mpq_class unit_part_q(std::int64_t p, const mpq_class& x);

/**
 * The fractional part {x}: the unique element of Z[1/p] with 0 <= {x} < 1
 * and x - {x} a p-adic integer. Defined for every rational x.
 */
mpq_class frac_part_q(std::int64_t p, const mpq_class& x);

/// Residue of a p-adic integer rational modulo p^k (non-negative lift).
mpz_class residue_mod_pk(std::int64_t p, const mpq_class& x, std::int64_t k);

} // namespace pdir
