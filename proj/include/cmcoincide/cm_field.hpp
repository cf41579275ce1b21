#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cmcoincide/residue.hpp"

namespace cmcoincide {

class CMField;

// u + v*t with t^2 + a t + b = 0
class ElemK {
public:
    ElemK() : K_(nullptr) {}
    ElemK(const CMField* K, FieldElem u, FieldElem v) : K_(K), u_(std::move(u)), v_(std::move(v)) {}

    const FieldElem& u() const { return u_; }
    const FieldElem& v() const { return v_; }
    const CMField* field() const { return K_; }

    bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
    bool is_integral() const { return u_.is_integral() && v_.is_integral(); }

    ElemK operator+(const ElemK& o) const { return {K_, u_ + o.u_, v_ + o.v_}; }
    ElemK operator-(const ElemK& o) const { return {K_, u_ - o.u_, v_ - o.v_}; }
    ElemK operator-() const { return {K_, -u_, -v_}; }
    ElemK operator*(const ElemK& o) const;
    ElemK operator*(const FieldElem& s) const { return {K_, u_ * s, v_ * s}; }
    ElemK operator/(const ElemK& o) const;
    bool operator==(const ElemK& o) const { return u_ == o.u_ && v_ == o.v_; }
    bool operator!=(const ElemK& o) const { return !(*this == o); }

    ElemK conj() const;              // t -> -a - t
    FieldElem rel_norm() const;      // N_{K/L}
    FieldElem rel_trace() const;     // Tr_{K/L}
    Rational abs_norm() const { return rel_norm().norm(); }

    std::string str() const { return "[" + u_.str() + ", " + v_.str() + "t]"; }

private:
    const CMField* K_;
    FieldElem u_, v_;
};

// Quartic CM field K = L(t), t^2 + a t + b = 0 with O_K = O_L[t]; the
// constructor enforces d = a^2 - 4b totally negative, odd, squarefree and K
// primitive, which together make O_L[t] maximal.
class CMField {
public:
    CMField(const RealQuadraticField& L, FieldElem a, FieldElem b)
        : L_(&L), a_(std::move(a)), b_(std::move(b)) {
        if (!a_.is_integral() || !b_.is_integral())
            throw HypothesisViolation("a and b must be integral");
        d_ = a_ * a_ - L.integer(4) * b_;
        if (!d_.is_totally_negative())
            throw HypothesisViolation("d = a^2 - 4b is not totally negative");
        for (const PrimeOfL& eta : L.dyadic_primes()) {
            if (L.val(a_, eta) >= 1) {
                QuotientRing R(L, eta.gen);
                bool bsq = false;
                FieldElem br = R.reduce(b_);
                for (const FieldElem& s : R.all_elements())
                    if (R.mul(s, s) == br) { bsq = true; break; }
                if (bsq)
                    throw HypothesisViolation(
                        "dyadic condition: a = 0 and b a square at a prime over 2");
            }
            if (L.val(d_, eta) != 0) throw HypothesisViolation("d is not coprime to 2");
        }
        auto fac = L.factor_element(d_);
        for (auto& [P, e] : fac) {
            if (e > 1) throw HypothesisViolation("d is not squarefree");
            ram_primes_.push_back(P);
        }
        std::sort(ram_primes_.begin(), ram_primes_.end());
        Integer nd = num(d_.norm());
        if (is_perfect_square(nd))
            throw HypothesisViolation("K is not primitive (biquadratic resolvent)");
        disc_abs_ = nd * L.disc() * L.disc();
    }

    const RealQuadraticField& base() const { return *L_; }
    const FieldElem& a() const { return a_; }
    const FieldElem& b() const { return b_; }
    const FieldElem& d() const { return d_; }
    int tau() const { return int(ram_primes_.size()); }
    const Integer& disc_abs() const { return disc_abs_; }
    const std::vector<PrimeOfL>& ramified_primes() const { return ram_primes_; }

    ElemK elem(FieldElem u, FieldElem v) const { return {this, std::move(u), std::move(v)}; }
    ElemK from_base(FieldElem u) const { return {this, std::move(u), L_->zero()}; }
    ElemK zero() const { return from_base(L_->zero()); }
    ElemK one() const { return from_base(L_->one()); }
    ElemK t_gen() const { return {this, L_->zero(), L_->one()}; }
    ElemK sqrt_d() const { return {this, a_, L_->integer(2)}; }  // 2t + a

    bool operator==(const CMField& o) const {
        return L_ == o.L_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    const RealQuadraticField* L_;
    FieldElem a_, b_, d_;
    std::vector<PrimeOfL> ram_primes_;
    Integer disc_abs_;
};

inline ElemK ElemK::operator*(const ElemK& o) const {
    const CMField* K = K_ ? K_ : o.K_;
    FieldElem uu = u_ * o.u_ - K->b() * (v_ * o.v_);
    FieldElem vv = u_ * o.v_ + v_ * o.u_ - K->a() * (v_ * o.v_);
    return {K, uu, vv};
}

inline ElemK ElemK::conj() const {
    return {K_, u_ - K_->a() * v_, -v_};
}

inline FieldElem ElemK::rel_norm() const {
    return u_ * u_ - K_->a() * u_ * v_ + K_->b() * v_ * v_;
}

inline FieldElem ElemK::rel_trace() const {
    return u_ + u_ - K_->a() * v_;
}

inline ElemK ElemK::operator/(const ElemK& o) const {
    FieldElem n = o.rel_norm();
    if (n.is_zero()) throw Error("ElemK: division by zero");
    ElemK t = *this * o.conj();
    return {K_ ? K_ : o.K_, t.u() / n, t.v() / n};
}

// Fractional ideal of O_K in O_L-pseudo-triangular normal form:
//   I = ( O_L * n  +  O_L * (c + m t) ) / den
// with n, m, den canonical totally positive, c reduced mod (n), and
// gcd(content, den) trivial. Equality of ideals is equality of the tuple.
class IdealK {
public:
    IdealK() : K_(nullptr) {}

    static IdealK unit_ideal(const CMField& K) {
        return from_generators(K, {K.one()});
    }

    static IdealK principal(const ElemK& g) {
        if (g.is_zero()) throw Error("IdealK: zero ideal");
        return from_generators(*g.field(), {g});
    }

    static IdealK from_generators(const CMField& K, std::vector<ElemK> gens) {
        const RealQuadraticField& L = K.base();
        std::vector<ElemK> all;
        for (const ElemK& g : gens) {
            all.push_back(g);
            all.push_back(g * K.t_gen());
        }
        // clear denominators
        Integer Delta = 1;
        for (const ElemK& g : all) {
            Delta = Delta / gcd_int(Delta, g.u().den()) * g.u().den();
            Delta = Delta / gcd_int(Delta, g.v().den()) * g.v().den();
        }
        FieldElem dEl = L.integer(Delta);
        for (ElemK& g : all) g = g * dEl;
        // O_L-module triangularization
        ElemK pivot = K.zero();
        for (const ElemK& g : all) {
            if (g.v().is_zero()) continue;
            if (pivot.v().is_zero()) { pivot = g; continue; }
            FieldElem h = L.gcd(pivot.v(), g.v());
            FieldElem s, t;
            L.bezout(pivot.v(), g.v(), h, s, t);
            pivot = pivot * s + g * t;
        }
        if (pivot.v().is_zero()) throw Error("IdealK: module has rank < 2");
        FieldElem m0 = pivot.v();
        FieldElem nacc = L.zero();
        for (const ElemK& g : all) {
            if (g.v().is_zero()) {
                nacc = L.gcd(nacc, g.u());
                continue;
            }
            ElemK r = g - pivot * (g.v() / m0);
            if (!r.v().is_zero()) throw Error("IdealK: elimination failed");
            nacc = L.gcd(nacc, r.u());
        }
        if (nacc.is_zero()) throw Error("IdealK: module has rank < 2");
        IdealK I;
        I.K_ = &K;
        I.m_ = L.canonical_tp_generator(m0);
        FieldElem unit = I.m_ / m0;
        I.c_ = pivot.u() * unit;
        I.n_ = nacc;  // already canonical from gcd
        I.den_ = L.integer(Delta);
        I.normalize();
        return I;
    }

    const CMField& field() const { return *K_; }
    const FieldElem& n() const { return n_; }
    const FieldElem& c() const { return c_; }
    const FieldElem& m() const { return m_; }
    const FieldElem& den() const { return den_; }
    bool is_integral() const { return den_.is_one(); }

    bool operator==(const IdealK& o) const {
        return n_ == o.n_ && c_ == o.c_ && m_ == o.m_ && den_ == o.den_;
    }
    bool operator!=(const IdealK& o) const { return !(*this == o); }

    IdealK operator*(const IdealK& o) const {
        ElemK g1 = K_->elem(n_, K_->base().zero());
        ElemK g2 = K_->elem(c_, m_);
        ElemK h1 = K_->elem(o.n_, K_->base().zero());
        ElemK h2 = K_->elem(o.c_, o.m_);
        IdealK P = from_generators(*K_, {g1 * h1, g1 * h2, g2 * h1, g2 * h2});
        return P.scaled(K_->base().one() / (den_ * o.den_));
    }

    IdealK scaled(const FieldElem& s) const {
        // ideal * (s); multiply the module by the numerator, den by the denominator
        FieldElem snum = K_->base().elem(s.x(), s.y());
        ElemK g1 = K_->elem(n_ * snum, K_->base().zero());
        ElemK g2 = K_->elem(c_ * snum, m_ * snum);
        IdealK I = from_generators(*K_, {g1, g2});
        I.den_ = den_ * K_->base().integer(s.den());
        I.normalize();
        return I;
    }

    IdealK conj() const {
        const RealQuadraticField& L = K_->base();
        ElemK g1 = K_->elem(n_, L.zero());
        ElemK g2 = K_->elem(c_ - m_ * K_->a(), -m_);
        IdealK I = from_generators(*K_, {g1, g2});
        I.den_ = den_;
        I.normalize();
        return I;
    }

    FieldElem rel_norm_gen() const {
        return K_->base().canonical_tp_generator(n_ * m_ / (den_ * den_));
    }

    IdealK inverse() const {
        return conj().scaled(K_->base().one() / rel_norm_gen());
    }

    Rational norm_abs() const {
        Rational n = rel_norm_gen().norm();
        return n < 0 ? -n : n;
    }

    bool contains(const ElemK& g) const {
        ElemK w = g * den_;
        FieldElem k = w.v() / m_;
        if (!k.is_integral()) return false;
        FieldElem r = (w.u() - k * c_) / n_;
        return r.is_integral();
    }

    std::vector<ElemK> z_basis() const {
        const RealQuadraticField& L = K_->base();
        FieldElem inv_den = L.one() / den_;
        ElemK g1 = K_->elem(n_ * inv_den, L.zero());
        ElemK g2 = K_->elem(c_ * inv_den, m_ * inv_den);
        return {g1, g1 * L.omega(), g2, g2 * L.omega()};
    }

    std::string str() const {
        return "[(" + n_.str() + "), (" + c_.str() + ")+(" + m_.str() + ")t]/" + den_.str();
    }

private:
    void normalize() {
        const RealQuadraticField& L = K_->base();
        FieldElem content = L.gcd(L.gcd(n_, m_), L.elem(c_.x(), c_.y()));
        FieldElem g = L.gcd(content, L.elem(den_.x(), den_.y()));
        if (!g.is_one() && !(g.norm() == 1)) {
            n_ = n_ / g;
            c_ = c_ / g;
            m_ = m_ / g;
            den_ = den_ / g;
        }
        n_ = L.canonical_tp_generator(n_);
        FieldElem mc = L.canonical_tp_generator(m_);
        c_ = c_ * (mc / m_);
        m_ = mc;
        den_ = L.canonical_tp_generator(den_);
        c_ = L.reduce_mod(c_, n_);
    }

    const CMField* K_;
    FieldElem n_, c_, m_, den_;
};

// prime of K with its arithmetic data
struct PrimeK {
    IdealK ideal;
    PrimeOfL below;
    int e = 1;      // ramification over the prime of L
    int f_rel = 1;  // residue degree over the prime of L
    Integer norm_abs() const { return pow_int(below.p, unsigned(below.f * f_rel)); }
};

struct SplittingK {
    SplitType type;
    std::vector<PrimeK> primes;  // 2 for split, else 1
};

// decomposition of a prime of L in K, via the factorization of t^2 + at + b
// over the residue field
inline SplittingK splitting_in_K(const PrimeOfL& P, const CMField& K) {
    const RealQuadraticField& L = K.base();
    auto make_prime = [&](const FieldElem& t0, SplitType ty) {
        IdealK I = IdealK::from_generators(
            K, {K.from_base(P.gen), K.t_gen() - K.from_base(t0)});
        return PrimeK{I, P, ty == SplitType::ramified ? 2 : 1, 1};
    };
    if (P.p == 2) {
        // direct root search in the tiny residue field
        QuotientRing R(L, P.gen);
        std::vector<FieldElem> roots;
        FieldElem ar = R.reduce(K.a()), br = R.reduce(K.b());
        for (const FieldElem& s : R.all_elements())
            if (R.reduce(s * s + ar * s + br).is_zero()) roots.push_back(s);
        if (roots.size() == 2)
            return {SplitType::split, {make_prime(roots[0], SplitType::split),
                                       make_prime(roots[1], SplitType::split)}};
        if (roots.size() == 1)
            return {SplitType::ramified, {make_prime(roots[0], SplitType::ramified)}};
        return {SplitType::inert, {PrimeK{IdealK::principal(K.from_base(P.gen)), P, 1, 2}}};
    }
    if (L.val(K.d(), P) > 0) {
        // ramified: double root -a/2
        ResidueField RF(L, P);
        auto t0 = RF.mul(RF.neg(RF.reduce(K.a())), RF.inv(RF.reduce(L.integer(2))));
        return {SplitType::ramified, {make_prime(RF.lift(t0), SplitType::ramified)}};
    }
    ResidueField RF(L, P);
    auto dr = RF.reduce(K.d());
    int leg = RF.legendre(dr);
    if (leg == -1)
        return {SplitType::inert, {PrimeK{IdealK::principal(K.from_base(P.gen)), P, 1, 2}}};
    auto sq = RF.sqrt(dr);
    auto inv2 = RF.inv(RF.reduce(L.integer(2)));
    auto na = RF.neg(RF.reduce(K.a()));
    auto r1 = RF.mul(RF.add(na, *sq), inv2);
    auto r2 = RF.mul(RF.sub(na, *sq), inv2);
    return {SplitType::split,
            {make_prime(RF.lift(r1), SplitType::split), make_prime(RF.lift(r2), SplitType::split)}};
}

inline int val_at(const IdealK& I, const PrimeK& P) {
    const CMField& K = I.field();
    const RealQuadraticField& L = K.base();
    IdealK J = I;
    int shift = 0;
    if (!J.is_integral()) {
        // scale to an integral ideal by the denominator
        FieldElem dn = J.den();
        J = J.scaled(dn);
        shift = P.e * L.val(dn, P.below);
    }
    IdealK Pinv = P.ideal.inverse();
    int v = 0;
    while (true) {
        IdealK J2 = J * Pinv;
        if (!J2.is_integral()) break;
        J = J2;
        ++v;
    }
    return v - shift;
}

// complete list of gamma in I with gamma*conj(gamma) = target (totally
// positive), by exact enumeration under the definite form Tr(gamma gammabar)
inline std::vector<ElemK> enumerate_with_relative_norm(const IdealK& I, const FieldElem& target) {
    if (!target.is_totally_positive())
        throw Error("enumerate_with_relative_norm: target must be totally positive");
    auto basis = I.z_basis();
    QMat G(4, QVec(4, 0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            G[i][j] = (basis[std::size_t(i)] * basis[std::size_t(j)].conj()).rel_trace().trace() /
                      2;
    std::vector<ElemK> out;
    enumerate_quadform(G, QVec(4, Rational(0)), target.trace(), [&](const IVec& c) {
        ElemK g = I.field().zero();
        for (int i = 0; i < 4; ++i)
            g = g + basis[std::size_t(i)] * I.field().base().integer(c[std::size_t(i)]);
        if (!g.is_zero() && g.rel_norm() == target) out.push_back(g);
    });
    std::sort(out.begin(), out.end(), [](const ElemK& a, const ElemK& b) {
        if (a.u() != b.u()) return lex_less(a.u(), b.u());
        return lex_less(a.v(), b.v());
    });
    return out;
}

// definitive principality test: a generator exists iff one exists with
// gamma*conj(gamma) equal to the canonical norm generator
inline std::optional<ElemK> is_principal(const IdealK& I0) {
    IdealK I = I0;
    if (!I.is_integral()) I = I.scaled(I.den());
    FieldElem nu = I.rel_norm_gen();
    auto sols = enumerate_with_relative_norm(I, nu);
    for (const ElemK& g : sols) {
        if (!I.contains(g)) continue;
        if (IdealK::principal(g) == I) return g;
    }
    return std::nullopt;
}

inline int roots_of_unity_count(const CMField& K) {
    auto sols = enumerate_with_relative_norm(IdealK::unit_ideal(K), K.base().one());
    return int(sols.size());
}

struct ClassGroupOptions {
    Integer relation_budget = 600;  // bound on Tr_{K/Q}(gamma gammabar) in the element search
    Integer rep_prime_bound = 600;  // rational prime bound for representative search
};

class ClassGroup {
public:
    Integer h = 1;
    std::vector<Integer> structure;                  // nontrivial cyclic factor orders
    std::vector<std::vector<Integer>> vectors;       // all class vectors, [0] = identity
    std::vector<IdealK> representatives;             // integral, coprime to the avoid ideal
    std::vector<PrimeK> factor_base;
    std::map<std::vector<Integer>, std::size_t> index_of_vector;

    std::size_t class_index_of(const IdealK& I0) const {
        IdealK I = I0;
        if (!I.is_integral()) I = I.scaled(I.den());
        for (std::size_t i = 0; i < representatives.size(); ++i) {
            if (is_principal(I * representatives[i].conj())) return i;
        }
        throw Error("class_index_of: no matching class");
    }
    const std::vector<Integer>& class_of(const IdealK& I) const {
        return vectors[class_index_of(I)];
    }

    std::vector<Integer> compose(const std::vector<Integer>& x, const std::vector<Integer>& y) const {
        std::vector<Integer> z(structure.size());
        for (std::size_t i = 0; i < structure.size(); ++i)
            z[i] = mod_floor(x[i] + y[i], structure[i]);
        return z;
    }
};

namespace detail {

inline bool ideal_coprime_to(const IdealK& I, const FieldElem& avoid) {
    if (avoid.is_zero()) return true;
    const RealQuadraticField& L = I.field().base();
    FieldElem nm = I.rel_norm_gen();
    return abs(num(L.gcd(L.elem(nm.x(), nm.y()), avoid).norm())) == 1;
}

}  // namespace detail

// Class group by factor-base relations, Smith normal form and a full
// certification pass: every surviving nontrivial class is proved
// non-principal by complete enumeration, so the result is unconditional.
inline ClassGroup class_group(const CMField& K, const IdealL& avoid,
                              const ClassGroupOptions& opts = {}) {
    const RealQuadraticField& L = K.base();
    ClassGroup G;
    // factor base: primes with 15625 * N^2 <= 361 * |disc K|  (N <= 0.152 sqrt(dK),
    // a rational upper bound for the Minkowski constant 3/(2 pi^2))
    Integer dK = K.disc_abs();
    std::vector<PrimeK> fb;
    for (Integer q = 2; 15625 * q * q <= 361 * dK; ++q) {
        if (!is_probable_prime(q)) continue;
        for (auto& [P, e] : L.factor_rational_prime(q)) {
            auto sp = splitting_in_K(P, K);
            for (const PrimeK& PK : sp.primes)
                if (15625 * PK.norm_abs() * PK.norm_abs() <= 361 * dK) fb.push_back(PK);
        }
    }
    G.factor_base = fb;
    const std::size_t nfb = fb.size();

    // powers of the factor-base primes, for cheap element valuations
    std::vector<std::vector<IdealK>> fb_powers(nfb);
    auto fb_power = [&](std::size_t i, int k) -> const IdealK& {
        auto& pw = fb_powers[i];
        if (pw.empty()) pw.push_back(fb[i].ideal);
        while (int(pw.size()) < k) pw.push_back(pw.back() * fb[i].ideal);
        return pw[std::size_t(k) - 1];
    };
    auto fb_valuations = [&](const ElemK& g) -> std::optional<IVec> {
        // exponents of (g) over the factor base, if smooth; integer smoothness
        // of the absolute norm is checked first
        Integer n = abs(num(g.abs_norm()));
        for (std::size_t i = 0; i < nfb; ++i)
            while (n % fb[i].norm_abs() == 0) n /= fb[i].norm_abs();
        if (n != 1) return std::nullopt;
        n = abs(num(g.abs_norm()));
        IVec v(nfb, 0);
        for (std::size_t i = 0; i < nfb; ++i) {
            int e = 0;
            while (fb_power(i, e + 1).contains(g)) ++e;
            v[i] = e;
            for (int k = 0; k < e; ++k) n /= fb[i].norm_abs();
        }
        if (n != 1) return std::nullopt;
        return v;
    };

    IMat relations;
    // structural relations
    for (std::size_t i = 0; i < nfb; ++i) {
        IVec r(nfb, 0);
        if (fb[i].f_rel == 2) {
            r[i] = 1;  // inert extension is principal
        } else if (fb[i].e == 2) {
            r[i] = 2;  // square of a ramified prime is extended from L
        } else {
            // split: P * Pbar is extended from L
            IdealK cj = fb[i].ideal.conj();
            r[i] += 1;
            for (std::size_t j = 0; j < nfb; ++j)
                if (fb[j].ideal == cj) { r[j] += 1; break; }
        }
        relations.push_back(r);
    }
    // element relations from short vectors of O_K
    if (nfb > 0) {
        IdealK OK = IdealK::unit_ideal(K);
        auto basis = OK.z_basis();
        QMat Gm(4, QVec(4, 0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                Gm[i][j] =
                    (basis[std::size_t(i)] * basis[std::size_t(j)].conj()).rel_trace().trace() / 2;
        enumerate_quadform(Gm, QVec(4, Rational(0)), Rational(opts.relation_budget),
                           [&](const IVec& c) {
                               ElemK g = K.zero();
                               for (int i = 0; i < 4; ++i)
                                   g = g + basis[std::size_t(i)] * L.integer(c[std::size_t(i)]);
                               if (g.is_zero()) return;
                               if (auto v = fb_valuations(g)) relations.push_back(*v);
                           });
    }

    auto rebuild = [&](const IMat& rels) {
        IMat V;
        IVec diag = snf_with_col_transform(rels, V);
        for (const Integer& d : diag)
            if (d == 0)
                throw RelationSearchIncomplete(
                    "class group relation lattice is rank deficient; enlarge relation_budget");
        std::vector<Integer> str;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < diag.size(); ++i)
            if (diag[i] > 1) { str.push_back(diag[i]); cols.push_back(i); }
        // dlog of factor-base prime j: (e_j * V) mod diag on the nontrivial columns
        std::vector<std::vector<Integer>> dlog(nfb);
        for (std::size_t j = 0; j < nfb; ++j) {
            std::vector<Integer> w(str.size());
            for (std::size_t k = 0; k < cols.size(); ++k)
                w[k] = mod_floor(V[j][cols[k]], str[k]);
            dlog[j] = w;
        }
        return std::make_pair(str, dlog);
    };

    std::vector<Integer> structure;
    std::vector<std::vector<Integer>> fb_dlog;
    std::vector<IdealK> reps;                      // representative per class vector
    std::vector<std::vector<Integer>> vecs;        // class vectors
    while (true) {
        auto [str, dlog] = rebuild(relations);
        structure = str;
        fb_dlog = dlog;
        // enumerate the group
        vecs.assign(1, std::vector<Integer>(structure.size(), 0));
        for (std::size_t i = 0; i < structure.size(); ++i) {
            std::vector<std::vector<Integer>> next;
            for (const auto& v : vecs)
                for (Integer k = 0; k < structure[i]; ++k) {
                    auto w = v;
                    w[i] = k;
                    next.push_back(w);
                }
            vecs = next;
        }
        std::sort(vecs.begin(), vecs.end());
        // representative per class as a product of factor-base primes (BFS)
        std::map<std::vector<Integer>, IdealK> rep;
        rep[std::vector<Integer>(structure.size(), 0)] = IdealK::unit_ideal(K);
        bool grew = true;
        while (grew && rep.size() < vecs.size()) {
            grew = false;
            auto snapshot = rep;
            for (const auto& [v, I] : snapshot) {
                for (std::size_t j = 0; j < nfb; ++j) {
                    std::vector<Integer> w(structure.size());
                    for (std::size_t k = 0; k < structure.size(); ++k)
                        w[k] = mod_floor(v[k] + fb_dlog[j][k], structure[k]);
                    if (!rep.count(w)) {
                        rep[w] = I * fb[j].ideal;
                        grew = true;
                    }
                }
            }
        }
        if (rep.size() != vecs.size())
            throw RelationSearchIncomplete("factor base fails to generate the candidate group");
        // certification: every nontrivial class must be non-principal
        bool refined = false;
        for (const auto& v : vecs) {
            bool trivial = true;
            for (const Integer& x : v) trivial = trivial && x == 0;
            if (trivial) continue;
            if (auto g = is_principal(rep[v])) {
                auto extra = fb_valuations(*g);
                if (!extra) throw Error("class group: generator not factor-base smooth");
                relations.push_back(*extra);
                refined = true;
                break;
            }
        }
        if (!refined) {
            reps.clear();
            for (const auto& v : vecs) reps.push_back(rep[v]);
            break;
        }
    }

    G.structure = structure;
    G.vectors = vecs;
    G.h = 1;
    for (const Integer& d : structure) G.h *= d;
    for (std::size_t i = 0; i < vecs.size(); ++i) G.index_of_vector[vecs[i]] = i;

    // representatives coprime to the avoid ideal
    const FieldElem avoid_gen = avoid.is_zero() ? L.zero() : avoid.generator();
    G.representatives.assign(vecs.size(), IdealK::unit_ideal(K));
    std::vector<bool> done(vecs.size(), false);
    // identity class: the unit ideal is coprime to everything
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        bool trivial = true;
        for (const Integer& x : vecs[i]) trivial = trivial && x == 0;
        if (trivial) { done[i] = true; break; }
    }
    std::size_t remaining = vecs.size() - 1;
    // first try the certified representatives themselves
    for (std::size_t i = 0; i < vecs.size() && remaining > 0; ++i) {
        if (done[i]) continue;
        if (detail::ideal_coprime_to(reps[i], avoid_gen)) {
            G.representatives[i] = reps[i];
            done[i] = true;
            --remaining;
        }
    }
    for (Integer q = 2; remaining > 0 && q <= opts.rep_prime_bound; ++q) {
        if (!is_probable_prime(q)) continue;
        for (auto& [P, e] : L.factor_rational_prime(q)) {
            if (remaining == 0) break;
            auto sp = splitting_in_K(P, K);
            if (sp.type == SplitType::inert) continue;
            for (const PrimeK& PK : sp.primes) {
                if (!detail::ideal_coprime_to(PK.ideal, avoid_gen)) continue;
                for (std::size_t i = 0; i < vecs.size(); ++i) {
                    if (done[i]) continue;
                    if (is_principal(PK.ideal * reps[i].conj())) {
                        G.representatives[i] = PK.ideal;
                        done[i] = true;
                        --remaining;
                        break;
                    }
                }
            }
        }
    }
    if (remaining > 0)
        throw RelationSearchIncomplete("no coprime class representatives below the prime bound");
    return G;
}

// number of integral ideals b with N_{K/L}(b) = n and class vector cls,
// together with the witnesses
inline std::pair<Integer, std::vector<IdealK>> count_ideals_norm_in_class(
    const IdealL& n, const std::vector<Integer>& cls, const CMField& K, const ClassGroup& G) {
    const RealQuadraticField& L = K.base();
    if (!n.is_integral()) throw Error("count_ideals_norm_in_class: integral norm required");
    std::vector<std::pair<IdealK, std::vector<Integer>>> partial;
    partial.emplace_back(IdealK::unit_ideal(K), std::vector<Integer>(G.structure.size(), 0));
    if (!n.generator().is_one()) {
        for (auto& [P, e] : L.factor_element(n.generator())) {
            auto sp = splitting_in_K(P, K);
            std::vector<std::pair<IdealK, std::vector<Integer>>> local;
            if (sp.type == SplitType::inert) {
                if (e % 2 == 1) return {0, {}};
                IdealK half = IdealK::unit_ideal(K);
                for (int k = 0; k < e / 2; ++k) half = half * sp.primes[0].ideal;
                local.emplace_back(half, G.class_of(half));
            } else if (sp.type == SplitType::ramified) {
                IdealK pe = IdealK::unit_ideal(K);
                for (int k = 0; k < e; ++k) pe = pe * sp.primes[0].ideal;
                local.emplace_back(pe, G.class_of(pe));
            } else {
                for (int i = 0; i <= e; ++i) {
                    IdealK w = IdealK::unit_ideal(K);
                    for (int k = 0; k < i; ++k) w = w * sp.primes[0].ideal;
                    for (int k = 0; k < e - i; ++k) w = w * sp.primes[1].ideal;
                    local.emplace_back(w, G.class_of(w));
                }
            }
            std::vector<std::pair<IdealK, std::vector<Integer>>> next;
            for (auto& [I, v] : partial)
                for (auto& [J, w] : local) next.emplace_back(I * J, G.compose(v, w));
            partial = std::move(next);
        }
    }
    Integer count = 0;
    std::vector<IdealK> witnesses;
    for (auto& [I, v] : partial) {
        if (v == cls) {
            ++count;
            witnesses.push_back(I);
        }
    }
    return {count, witnesses};
}

}  // namespace cmcoincide
