#include "pdir/padic_approx.hpp"

#include <sstream>

namespace pdir {

PAdicApprox::PAdicApprox(std::int64_t p, std::int64_t val, mpz_class unit, int prec)
    : p_(p), zero_(false), val_(val), unit_(std::move(unit)), prec_(prec) {
    if (prec_ < 1) throw std::invalid_argument("PAdicApprox: precision must be >= 1");
    mpz_class pk = pow_p(p_, prec_);
    unit_ %= pk;
    if (unit_ < 0) unit_ += pk;
    if (unit_ % p_ == 0) throw std::invalid_argument("PAdicApprox: unit divisible by p");
}

PAdicApprox PAdicApprox::zero(std::int64_t p) {
    PAdicApprox z;
    z.p_ = p;
    z.zero_ = true;
    z.prec_ = 0;
    return z;
}

PAdicApprox PAdicApprox::from_zinvp(const ZInvP& x, int prec) {
    if (x.is_zero()) return zero(x.prime());
    return PAdicApprox(x.prime(), x.exponent(), x.mantissa(), prec);
}

PAdicApprox PAdicApprox::from_rational(std::int64_t p, const mpq_class& x, int prec) {
    if (x == 0) return zero(p);
    std::int64_t v = valuation_q(p, x);
    mpq_class u = unit_part_q(p, x);
    mpz_class pk = pow_p(p, prec);
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), u.get_den().get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::logic_error("PAdicApprox::from_rational: bad denominator");
    return PAdicApprox(p, v, mpz_class(u.get_num() * dinv), prec);
}

std::optional<std::int64_t> PAdicApprox::val() const {
    if (zero_) return std::nullopt;
    return val_;
}

std::int64_t PAdicApprox::val_finite() const {
    if (zero_) throw std::domain_error("PAdicApprox: valuation of zero is infinite");
    return val_;
}

const mpz_class& PAdicApprox::unit() const {
    if (zero_) throw std::domain_error("PAdicApprox: zero has no unit part");
    return unit_;
}

PAdicApprox PAdicApprox::operator+(const PAdicApprox& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("PAdicApprox: prime mismatch");
    if (zero_) return rhs;
    if (rhs.zero_) return *this;
    std::int64_t known = std::min(val_ + prec_, rhs.val_ + rhs.prec_);
    std::int64_t vmin = std::min(val_, rhs.val_);
    mpz_class s = unit_ * pow_p(p_, val_ - vmin) + rhs.unit_ * pow_p(p_, rhs.val_ - vmin);
    mpz_class mod = pow_p(p_, known - vmin);
    s %= mod;
    if (s < 0) s += mod;
    if (s == 0)
        throw precision_error("PAdicApprox: result indistinguishable from zero at current precision");
    mpz_class stripped;
    mpz_class prime(static_cast<long>(p_));
    auto k = static_cast<std::int64_t>(
        mpz_remove(stripped.get_mpz_t(), s.get_mpz_t(), prime.get_mpz_t()));
    std::int64_t v = vmin + k;
    return PAdicApprox(p_, v, stripped, static_cast<int>(known - v));
}

PAdicApprox PAdicApprox::operator-(const PAdicApprox& rhs) const { return *this + (-rhs); }

PAdicApprox PAdicApprox::operator*(const PAdicApprox& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("PAdicApprox: prime mismatch");
    if (zero_ || rhs.zero_) return zero(p_);
    int prec = std::min(prec_, rhs.prec_);
    return PAdicApprox(p_, val_ + rhs.val_, mpz_class(unit_ * rhs.unit_), prec);
}

PAdicApprox PAdicApprox::operator-() const {
    if (zero_) return *this;
    return PAdicApprox(p_, val_, mpz_class(-unit_), prec_);
}

PAdicApprox PAdicApprox::inverse() const {
    if (zero_) throw std::domain_error("PAdicApprox::inverse: division by zero");
    mpz_class pk = pow_p(p_, prec_);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::logic_error("PAdicApprox::inverse: unit not invertible");
    return PAdicApprox(p_, -val_, inv, prec_);
}

ZInvP PAdicApprox::frac_part() const {
    if (zero_) return ZInvP::zero(p_);
    if (val_ >= 0) return ZInvP::zero(p_);
    if (val_ + prec_ < 0)
        throw precision_error("PAdicApprox::frac_part: digits below p^0 unknown");
    mpz_class low = unit_ % pow_p(p_, -val_);
    return ZInvP(p_, low, val_);
}

bool PAdicApprox::agrees(const PAdicApprox& rhs) const {
    if (p_ != rhs.p_) return false;
    if (zero_ || rhs.zero_) return zero_ && rhs.zero_;
    if (val_ != rhs.val_) return false;
    int prec = std::min(prec_, rhs.prec_);
    mpz_class pk = pow_p(p_, prec);
    return ((unit_ - rhs.unit_) % pk) == 0;
}

std::string PAdicApprox::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "0 (exact, p=" << p_ << ")";
    } else {
        os << unit_ << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << (val_ + prec_) << ")";
    }
    return os.str();
}

std::optional<std::int64_t> valuation(const PAdicApprox& x) { return x.val(); }

std::optional<std::int64_t> abs_exponent(const PAdicApprox& x) {
    auto v = x.val();
    if (!v) return std::nullopt;
    return -*v;
}

std::pair<mpz_class, std::int64_t> unit_decompose(const PAdicApprox& x) {
    if (x.is_zero()) throw std::domain_error("unit_decompose: zero input");
    return {x.unit(), x.val_finite()};
}

} // namespace pdir
