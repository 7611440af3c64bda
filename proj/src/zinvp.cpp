#include "pdir/zinvp.hpp"

#include <sstream>

namespace pdir {

namespace {

// Strips all factors of p from n (n != 0); returns the number removed.
std::int64_t strip_factors(mpz_class& n, std::int64_t p) {
    mpz_class prime(static_cast<long>(p));
    mpz_class stripped;
    mp_bitcnt_t k = mpz_remove(stripped.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
    n = stripped;
    return static_cast<std::int64_t>(k);
}

} // namespace

ZInvP::ZInvP(std::int64_t p, mpz_class mantissa, std::int64_t exponent)
    : p_(p), m_(std::move(mantissa)), e_(exponent) {
    if (m_ == 0) {
        e_ = 0;
    } else {
        e_ += strip_factors(m_, p_);
    }
}

ZInvP ZInvP::from_rational(std::int64_t p, const mpq_class& q) {
    if (q == 0) return zero(p);
    mpq_class c = q;
    c.canonicalize();
    mpz_class num = c.get_num();
    mpz_class den = c.get_den();
    std::int64_t e = strip_factors(num, p);
    e -= strip_factors(den, p);
    if (den != 1)
        throw std::domain_error("ZInvP::from_rational: denominator is not a power of p");
    return ZInvP(p, num, e);
}

mpq_class ZInvP::to_rational() const {
    if (m_ == 0) return mpq_class(0);
    mpq_class r(m_);
    if (e_ >= 0) {
        r *= pow_p(p_, e_);
    } else {
        r /= pow_p(p_, -e_);
    }
    r.canonicalize();
    return r;
}

std::string ZInvP::str() const {
    std::ostringstream os;
    os << m_ << "*" << p_ << "^" << e_;
    return os.str();
}

std::string ZInvP::str_fraction() const {
    std::ostringstream os;
    if (e_ >= 0) {
        os << mpz_class(m_ * pow_p(p_, e_));
    } else {
        os << m_ << "/" << pow_p(p_, -e_);
    }
    return os.str();
}

ZInvP ZInvP::parse(std::int64_t p, const std::string& text) {
    auto star = text.find('*');
    if (star != std::string::npos) {
        auto caret = text.find('^', star);
        if (caret == std::string::npos)
            throw std::invalid_argument("ZInvP::parse: expected m*p^e");
        mpz_class m(text.substr(0, star));
        mpz_class base(text.substr(star + 1, caret - star - 1));
        if (base != p) throw std::invalid_argument("ZInvP::parse: base mismatch");
        std::int64_t e = std::stoll(text.substr(caret + 1));
        return ZInvP(p, m, e);
    }
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpq_class q(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
        q.canonicalize();
        return from_rational(p, q);
    }
    return from_integer(p, mpz_class(text));
}

ZInvP ZInvP::operator+(const ZInvP& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("ZInvP: prime mismatch");
    if (is_zero()) return rhs;
    if (rhs.is_zero()) return *this;
    std::int64_t e = std::min(e_, rhs.e_);
    mpz_class m = m_ * pow_p(p_, e_ - e) + rhs.m_ * pow_p(p_, rhs.e_ - e);
    return ZInvP(p_, m, e);
}

ZInvP ZInvP::operator-(const ZInvP& rhs) const { return *this + (-rhs); }

ZInvP ZInvP::operator*(const ZInvP& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("ZInvP: prime mismatch");
    return ZInvP(p_, m_ * rhs.m_, e_ + rhs.e_);
}

ZInvP ZInvP::operator-() const { return ZInvP(p_, -m_, e_); }

ZInvP ZInvP::inverse() const {
    if (is_zero()) throw std::domain_error("ZInvP::inverse: division by zero");
    if (m_ != 1 && m_ != -1)
        throw std::domain_error("ZInvP::inverse: inverse leaves Z[1/p]; use a truncated value");
    return ZInvP(p_, m_, -e_);
}

ZInvP ZInvP::scale_p(std::int64_t k) const {
    if (is_zero()) return *this;
    return ZInvP(p_, m_, e_ + k);
}

bool ZInvP::operator==(const ZInvP& rhs) const {
    return p_ == rhs.p_ && m_ == rhs.m_ && e_ == rhs.e_;
}

std::optional<std::int64_t> valuation(const ZInvP& x) {
    if (x.is_zero()) return std::nullopt;
    return x.exponent();
}

std::optional<std::int64_t> abs_exponent(const ZInvP& x) {
    if (x.is_zero()) return std::nullopt;
    return -x.exponent();
}

std::pair<mpz_class, std::int64_t> unit_decompose(const ZInvP& x) {
    if (x.is_zero()) throw std::domain_error("unit_decompose: zero input");
    return {x.mantissa(), x.exponent()};
}

std::int64_t valuation_q(std::int64_t p, const mpq_class& x) {
    if (x == 0) throw std::domain_error("valuation_q: zero input");
    mpz_class num = x.get_num();
    mpz_class den = x.get_den();
    return strip_factors(num, p) - strip_factors(den, p);
}

std::optional<std::int64_t> valuation_q_opt(std::int64_t p, const mpq_class& x) {
    if (x == 0) return std::nullopt;
    return valuation_q(p, x);
}

bool is_p_integer(std::int64_t p, const mpq_class& x) {
    return x == 0 || valuation_q(p, x) >= 0;
}

mpq_class unit_part_q(std::int64_t p, const mpq_class& x) {
    std::int64_t v = valuation_q(p, x);
    mpq_class r = x;
    if (v >= 0) {
        r /= pow_p(p, v);
    } else {
        r *= pow_p(p, -v);
    }
    r.canonicalize();
    return r;
}

mpq_class frac_part_q(std::int64_t p, const mpq_class& x) {
    if (x == 0 || valuation_q(p, x) >= 0) return mpq_class(0);
    // x = n / (d * p^k) in lowest terms with p coprime to n and d, k > 0.
    mpz_class num = x.get_num();
    mpz_class den = x.get_den();
    std::int64_t k = strip_factors(den, p);
    mpz_class pk = pow_p(p, k);
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::logic_error("frac_part_q: non-invertible denominator");
    mpz_class s = (num * dinv) % pk;
    if (s < 0) s += pk;
    mpq_class r(s, pk);
    r.canonicalize();
    return r;
}

mpz_class residue_mod_pk(std::int64_t p, const mpq_class& x, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("residue_mod_pk: negative level");
    if (!is_p_integer(p, x)) throw std::domain_error("residue_mod_pk: not a p-adic integer");
    mpz_class pk = pow_p(p, k);
    mpz_class den = x.get_den();
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::domain_error("residue_mod_pk: denominator not invertible");
    mpz_class r = (x.get_num() * dinv) % pk;
    if (r < 0) r += pk;
    return r;
}

} // namespace pdir
