#include "pdir/prime.hpp"

#include <stdexcept>

namespace pdir {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic below 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

mpz_class pow_p(std::int64_t p, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("pow_p: negative exponent");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

std::int64_t pow_p_i64(std::int64_t p, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("pow_p_i64: negative exponent");
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        if (r > (std::int64_t{1} << 62) / p) throw std::overflow_error("pow_p_i64: overflow");
        r *= p;
    }
    return r;
}

PrimeCtx::PrimeCtx(std::int64_t prime, int precision_digits)
    : p(prime), precision(precision_digits) {
    if (prime < 2 || !is_prime_u64(static_cast<std::uint64_t>(prime)))
        throw std::invalid_argument("PrimeCtx: p must be prime");
    if (precision_digits < 1)
        throw std::invalid_argument("PrimeCtx: precision must be >= 1");
}

} // namespace pdir
