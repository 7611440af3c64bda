#include "pdir/wellround.hpp"

#include <sstream>
#include <stdexcept>

#include "pdir/prime.hpp"

namespace pdir {

namespace {

bool q_entry_zero(const mpq_class& x) { return x == 0; }

bool congruent_to_identity(std::int64_t p, int level, const Mat2Q& g) {
    auto ge = [&](const mpq_class& x) { return x == 0 || valuation_q(p, x) >= level; };
    return ge(g.a - 1) && ge(g.c) && ge(g.b) && ge(g.d - 1);
}

bool subgroup_shape(Subgroup s, const Mat2Q& g) {
    switch (s) {
        case Subgroup::Full: return true;
        case Subgroup::LowerCompact: return q_entry_zero(g.c);
        case Subgroup::UpperUnipotent: return q_entry_zero(g.b) && g.a == 1 && g.d == 1;
        case Subgroup::LowerUnipotent: return q_entry_zero(g.c) && g.a == 1 && g.d == 1;
        case Subgroup::DiagonalUnits: return q_entry_zero(g.b) && q_entry_zero(g.c);
    }
    return false;
}

} // namespace

bool nbhd_contains(std::int64_t p, const NbhdSpec& spec, const Mat2Q& g) {
    if (spec.level < 1) throw std::invalid_argument("nbhd_contains: level must be >= 1");
    if (g.det() != 1) return false;
    return congruent_to_identity(p, spec.level, g) && subgroup_shape(spec.subgroup, g);
}

bool nbhd_contains(const NbhdSpec& spec, const Mat2<PAdicApprox>& g) {
    if (spec.level < 1) throw std::invalid_argument("nbhd_contains: level must be >= 1");
    // Decides nu(x - target) >= level for target 0 or 1. Valuations are
    // exact in the representation, so only the target-1 case can run out
    // of digits.
    auto ge = [&](const PAdicApprox& x, int target) {
        if (x.is_zero()) return target == 0;
        std::int64_t v = x.val_finite();
        if (target == 0) return v >= spec.level;
        if (v < 0) return false;
        if (v >= spec.level) return false; // x = 0 mod p^level but 1 required
        if (v + x.prec() < spec.level)
            throw precision_error("nbhd_contains: insufficient precision");
        mpz_class pl = pow_p(x.prime(), spec.level);
        mpz_class lift = (x.unit() * pow_p(x.prime(), v)) % pl;
        return lift == 1;
    };
    bool id_like = ge(g.a, 1) && ge(g.c, 0) && ge(g.b, 0) && ge(g.d, 1);
    if (!id_like) return false;
    auto zero_shape = [&](const PAdicApprox& x) { return x.is_zero(); };
    switch (spec.subgroup) {
        case Subgroup::Full: return true;
        case Subgroup::LowerCompact: return zero_shape(g.c);
        case Subgroup::UpperUnipotent: return zero_shape(g.b);
        case Subgroup::LowerUnipotent: return zero_shape(g.c);
        case Subgroup::DiagonalUnits: return zero_shape(g.b) && zero_shape(g.c);
    }
    return false;
}

std::pair<Mat2Q, Mat2Q> split_nbhd(std::int64_t p, int level, const Mat2Q& g) {
    if (!nbhd_contains(p, NbhdSpec{level, Subgroup::Full}, g))
        throw std::domain_error("split_nbhd: not in the level-N neighborhood");
    // (A C; B D) = (A 0; B 1/A) * (1 C/A; 0 1)
    mpq_class z = g.c / g.a;
    z.canonicalize();
    Mat2Q q{g.a, mpq_class(0), g.b, mpq_class(1) / g.a};
    q.d.canonicalize();
    Mat2Q n{mpq_class(1), z, mpq_class(0), mpq_class(1)};
    return {q, n};
}

std::pair<Mat2Q, Mat2Q> split_q_nbhd(std::int64_t p, int level, const Mat2Q& q) {
    if (!nbhd_contains(p, NbhdSpec{level, Subgroup::LowerCompact}, q))
        throw std::domain_error("split_q_nbhd: not in the compact-factor neighborhood");
    // (A 0; B 1/A) = (1 0; B/A 1) * (A 0; 0 1/A)
    mpq_class z = q.b / q.a;
    z.canonicalize();
    Mat2Q nminus{mpq_class(1), mpq_class(0), z, mpq_class(1)};
    Mat2Q m{q.a, mpq_class(0), mpq_class(0), q.d};
    return {nminus, m};
}

std::int64_t ad_opnorm_exponent(std::int64_t p, const Mat2Q& g) {
    mpq_class det = g.det();
    if (det == 0) throw std::domain_error("ad_opnorm_exponent: singular matrix");
    Mat2Q inv{g.d / det, -g.c / det, -g.b / det, g.a / det};
    std::optional<std::int64_t> best;
    auto consider = [&](const mpq_class& x) {
        if (x == 0) return;
        std::int64_t e = -valuation_q(p, x);
        if (!best || e > *best) best = e;
    };
    // Images of the four matrix units under T -> g T g^-1.
    for (int i = 0; i < 4; ++i) {
        Mat2Q basis{mpq_class(i == 0), mpq_class(i == 1), mpq_class(i == 2), mpq_class(i == 3)};
        Mat2Q img = g * basis * inv;
        consider(img.a);
        consider(img.c);
        consider(img.b);
        consider(img.d);
    }
    if (!best) throw std::logic_error("ad_opnorm_exponent: all images vanished");
    return *best;
}

std::int64_t ad_opnorm_residue_exponent(std::int64_t p, int N, const ResidueMat2& k) {
    std::int64_t pn = pow_p_i64(p, N);
    auto mod = [&](std::int64_t x) { return ((x % pn) + pn) % pn; };
    // Adjugate is the inverse at determinant 1 (mod p^N).
    ResidueMat2 inv{mod(k.d), mod(-k.c), mod(-k.b), mod(k.a)};
    std::int64_t maxexp = -N; // all entries divisible by p^N
    auto consider = [&](std::int64_t x) {
        x = mod(x);
        if (x == 0) return;
        std::int64_t e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        if (-e > maxexp) maxexp = -e;
    };
    std::int64_t bas[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (auto& e : bas) {
        // t = k * E * inv, with E = (e0 e1; e2 e3)
        std::int64_t ta = k.a * e[0] + k.c * e[2], tc = k.a * e[1] + k.c * e[3];
        std::int64_t tb = k.b * e[0] + k.d * e[2], td = k.b * e[1] + k.d * e[3];
        consider(ta * inv.a + tc * inv.b);
        consider(ta * inv.c + tc * inv.d);
        consider(tb * inv.a + td * inv.b);
        consider(tb * inv.c + td * inv.d);
    }
    return maxexp;
}

EffConstants effective_constant(std::int64_t p, std::int64_t t, const mpq_class& x) {
    std::int64_t ad_n = 0;
    if (x != 0) {
        std::int64_t v = valuation_q(p, x);
        ad_n = 2 * std::max<std::int64_t>(0, -v);
    }
    std::int64_t statement = ad_n + std::max<std::int64_t>(0, -t);
    std::int64_t proof = 2 * std::max<std::int64_t>(0, -2 * t) + ad_n;
    return {statement, proof};
}

Mat2Z mat_diag_power(std::int64_t p, std::int64_t t) {
    return {ZInvP(p, 1, -t), ZInvP::zero(p), ZInvP::zero(p), ZInvP(p, 1, t)};
}

Mat2Z mat_upper(const ZInvP& x) {
    std::int64_t p = x.prime();
    return {ZInvP::one(p), x, ZInvP::zero(p), ZInvP::one(p)};
}

Mat2Z mat_lower(const ZInvP& y) {
    std::int64_t p = y.prime();
    return {ZInvP::one(p), ZInvP::zero(p), y, ZInvP::one(p)};
}

Mat2Q mat_diag_power_q(std::int64_t p, std::int64_t t) {
    mpq_class hi = t >= 0 ? mpq_class(1, pow_p(p, t)) : mpq_class(pow_p(p, -t));
    mpq_class lo = t >= 0 ? mpq_class(pow_p(p, t)) : mpq_class(1, pow_p(p, -t));
    hi.canonicalize();
    lo.canonicalize();
    return {hi, mpq_class(0), mpq_class(0), lo};
}

Mat2Q mat_upper_q(const mpq_class& x) {
    return {mpq_class(1), x, mpq_class(0), mpq_class(1)};
}

Mat2Q mat_lower_q(const mpq_class& y) {
    return {mpq_class(1), mpq_class(0), y, mpq_class(1)};
}

Mat2Q sample_nbhd_q(std::int64_t p, int N, int depth, std::mt19937_64& rng) {
    auto draw = [&]() {
        mpz_class r = 0;
        for (int i = 0; i < depth; ++i) {
            r = r * p + static_cast<long>(rng() % static_cast<std::uint64_t>(p));
        }
        return r;
    };
    mpz_class pn = pow_p(p, N);
    mpq_class y(draw() * pn), w(draw() * pn), z(draw() * pn);
    Mat2Q m{mpq_class(1 + w), mpq_class(0), mpq_class(0), mpq_class(1) / (1 + w)};
    m.d.canonicalize();
    return mat_lower_q(y) * m * mat_upper_q(z);
}

InclusionResult effective_inclusion_check(std::int64_t p, const mpq_class& q_u,
                                          const mpq_class& q_m, std::int64_t t,
                                          const mpq_class& x, int N, int samples,
                                          std::mt19937_64& rng, bool use_proof_constant) {
    if (q_u == 0 || valuation_q(p, q_u) != 0)
        throw std::invalid_argument("effective_inclusion_check: q unit part must be a unit");
    if (q_m != 0 && valuation_q(p, q_m) < 0)
        throw std::invalid_argument("effective_inclusion_check: q lower part must be integral");

    EffConstants c = effective_constant(p, t, x);
    std::int64_t c_exp = use_proof_constant ? c.proof_exp : c.statement_exp;
    if (N <= c_exp)
        throw std::invalid_argument("effective_inclusion_check: epsilon not below 1/c");
    auto target = static_cast<int>(N - c_exp);

    Mat2Q q{q_u, mpq_class(0), q_m * q_u, mpq_class(1) / q_u};
    q.b.canonicalize();
    q.d.canonicalize();
    Mat2Q g = q * mat_diag_power_q(p, t) * mat_upper_q(x);

    InclusionResult res;
    res.samples = samples;
    for (int i = 0; i < samples; ++i) {
        Mat2Q u = sample_nbhd_q(p, N, 4, rng);
        Mat2Q v = sample_nbhd_q(p, N, 4, rng);
        Mat2Q w = u * g * v;
        BruhatFactors f = bruhat_padic(p, w);

        bool ok = f.t == t;
        if (ok) {
            // q^-1 * q_w must lie in the level-(N - c) compact neighborhood.
            Mat2Q qw{f.u, mpq_class(0), f.m * f.u, mpq_class(1) / f.u};
            qw.b.canonicalize();
            qw.d.canonicalize();
            Mat2Q dq = inverse_det1(q) * qw;
            ok = nbhd_contains(p, NbhdSpec{target, Subgroup::LowerCompact}, dq);
        }
        if (ok) {
            mpq_class dbeta = f.beta - x;
            ok = dbeta == 0 || valuation_q(p, dbeta) >= target;
        }
        if (!ok) {
            std::ostringstream os;
            os << "sample " << i << ": factors left the level-" << target << " neighborhoods";
            res.ok = false;
            res.witness = InclusionWitness{os.str()};
            return res;
        }
    }
    return res;
}

namespace {

struct ResidueEngine {
    std::int64_t p;
    std::int64_t pm;   // modulus p^M
    int M;
    std::vector<std::int64_t> unit_inv; // inverse table, 0 for non-units

    ResidueEngine(std::int64_t prime, int level) : p(prime), M(level) {
        pm = pow_p_i64(p, M);
        if (pm > (std::int64_t{1} << 20))
            throw std::invalid_argument("wr engine: residue level too large");
        unit_inv.assign(static_cast<std::size_t>(pm), 0);
        for (std::int64_t x = 1; x < pm; ++x) {
            if (x % p == 0) continue;
            // Fermat-style scan is fine at these sizes.
            std::int64_t t0 = 0, t1 = 1, r0 = pm, r1 = x;
            while (r1 != 0) {
                std::int64_t qq = r0 / r1;
                std::int64_t tmp = t0 - qq * t1;
                t0 = t1;
                t1 = tmp;
                tmp = r0 - qq * r1;
                r0 = r1;
                r1 = tmp;
            }
            unit_inv[static_cast<std::size_t>(x)] = ((t0 % pm) + pm) % pm;
        }
    }

    std::int64_t mod(std::int64_t x) const { return ((x % pm) + pm) % pm; }

    ResidueMat2 mul(const ResidueMat2& l, const ResidueMat2& r) const {
        return {mod(l.a * r.a + l.c * r.b), mod(l.a * r.c + l.c * r.d),
                mod(l.b * r.a + l.d * r.b), mod(l.b * r.c + l.d * r.d)};
    }
};

} // namespace

WRVerdict wr_box_equality(std::int64_t p, const BruhatBox& box, int eps_exponent) {
    if (box.t1 != 0 || box.t2 != 0)
        throw std::invalid_argument(
            "wr_box_equality: set-equality engine covers t1 = t2 = 0 boxes; "
            "t-ranges are exercised through effective_inclusion_check");
    if (eps_exponent < 1)
        throw std::invalid_argument("wr_box_equality: epsilon must be p^-N with N >= 1");
    if (box.psi < 0) throw std::invalid_argument("wr_box_equality: psi must be >= 0");
    if (box.arc && box.arc->cx % p == 0) {
        // Arc off the chart: the box is empty and so are its thickenings.
        WRVerdict trivial;
        trivial.box = box;
        trivial.eps_exponent = eps_exponent;
        trivial.in_regime = true;
        trivial.plus_equal = true;
        trivial.minus_equal = true;
        return trivial;
    }

    int k = box.arc ? box.arc->level : 0;
    int L = std::max({k, box.psi, 1});
    int N = eps_exponent;
    int J = std::max(N, L); // box classes enumerated mod p^J
    int M = J + 1;          // products computed mod p^M

    ResidueEngine eng(p, M);
    std::int64_t pj = pow_p_i64(p, J);
    std::int64_t pk = box.arc ? pow_p_i64(p, k) : 1;
    std::int64_t ppsi = pow_p_i64(p, box.psi);
    std::int64_t pn = pow_p_i64(p, N);

    std::int64_t cx = box.arc ? box.arc->cx.get_si() : 1; // representative unit
    std::int64_t cy = box.arc ? box.arc->cy.get_si() : 0;
    std::int64_t a0 = box.alpha0.get_si() % ppsi;
    if (a0 < 0) a0 += ppsi;

    auto in_box = [&](const ResidueMat2& g) {
        if (g.a % p == 0) return false; // diagonal coordinate left 0
        if (box.arc && ((g.a - cx) % pk != 0 || (g.b - cy) % pk != 0)) return false;
        if (box.psi > 0) {
            std::int64_t beta = eng.mod(g.c * eng.unit_inv[static_cast<std::size_t>(g.a)]);
            if ((beta - a0) % ppsi != 0) return false;
        }
        return true;
    };

    // Perturbation classes: I + p^N * T mod p^M with determinant 1 mod p^M.
    std::vector<ResidueMat2> nbhd;
    std::int64_t tmod = pow_p_i64(p, M - N);
    for (std::int64_t ta = 0; ta < tmod; ++ta)
        for (std::int64_t tc = 0; tc < tmod; ++tc)
            for (std::int64_t tb = 0; tb < tmod; ++tb)
                for (std::int64_t td = 0; td < tmod; ++td) {
                    ResidueMat2 u{eng.mod(1 + pn * ta), eng.mod(pn * tc), eng.mod(pn * tb),
                                  eng.mod(1 + pn * td)};
                    if (eng.mod(u.a * u.d - u.c * u.b) == 1) nbhd.push_back(u);
                }

    WRVerdict verdict;
    verdict.box = box;
    verdict.eps_exponent = eps_exponent;
    verdict.in_regime = N >= L;
    verdict.plus_equal = true;
    verdict.minus_equal = true;

    // One box class per (first column, unipotent coordinate) residue
    // triple mod p^J, lifted to a determinant-one representative mod p^M.
    std::int64_t arc_step = box.arc ? pk : 1;
    std::int64_t col_lim = pj;
    for (std::int64_t a = box.arc ? cx : 1; a < col_lim; a += arc_step) {
        if (a % p == 0) continue; // only unit leading coordinates when full
        for (std::int64_t b = box.arc ? cy : 0; b < col_lim; b += box.arc ? pk : 1) {
            for (std::int64_t beta = a0; beta < pj; beta += ppsi) {
                std::int64_t c = eng.mod(a * beta);
                std::int64_t d =
                    eng.mod(eng.unit_inv[static_cast<std::size_t>(a % eng.pm)] * (1 + b * c));
                ResidueMat2 g{a, c, b, d};
                ++verdict.classes_checked;
                for (const ResidueMat2& u : nbhd) {
                    ++verdict.products_checked;
                    if (!in_box(eng.mul(u, g)) || !in_box(eng.mul(g, u))) {
                        verdict.plus_equal = false;
                        verdict.minus_equal = false;
                        if (!verdict.witness) {
                            std::ostringstream os;
                            os << "class (a=" << a << ", b=" << b << ", beta=" << beta
                               << ") escapes under a level-" << N << " perturbation";
                            verdict.witness = InclusionWitness{os.str()};
                        }
                    }
                }
            }
        }
    }
    return verdict;
}

std::vector<WRVerdict> wr_box_equality_grid(std::int64_t p, const BruhatBox& box,
                                            const std::vector<int>& eps_exponents) {
    std::vector<WRVerdict> out;
    out.reserve(eps_exponents.size());
    for (int e : eps_exponents) out.push_back(wr_box_equality(p, box, e));
    return out;
}

} // namespace pdir
