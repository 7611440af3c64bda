#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace pdir {

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// p^k as an exact integer, k >= 0.
mpz_class pow_p(std::int64_t p, std::int64_t k);

/// p^k as int64, throws std::overflow_error when it does not fit.
std::int64_t pow_p_i64(std::int64_t p, std::int64_t k);

/**
 * Fixed prime together with the default relative precision used for
 * truncated p-adic values. Construction checks primality.
 */
struct PrimeCtx {
    std::int64_t p;
    int precision;

    explicit PrimeCtx(std::int64_t prime, int precision_digits = 8);
};

} // namespace pdir
