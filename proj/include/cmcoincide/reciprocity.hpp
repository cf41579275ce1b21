#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cmcoincide/cm_field.hpp"

namespace cmcoincide {

struct Place {
    enum class Kind { finite, real };
    Kind kind = Kind::real;
    PrimeOfL prime;  // when finite
    int emb = 1;     // when real: 1 or 2, with sigma_1(sqrt D) > 0

    static Place at_prime(PrimeOfL P) {
        Place pl;
        pl.kind = Kind::finite;
        pl.prime = std::move(P);
        return pl;
    }
    static Place at_real(int emb) {
        Place pl;
        pl.kind = Kind::real;
        pl.emb = emb;
        return pl;
    }
    bool operator==(const Place& o) const {
        if (kind != o.kind) return false;
        return kind == Kind::real ? emb == o.emb : prime == o.prime;
    }
    std::string str() const {
        if (kind == Kind::real) return "real_" + std::to_string(emb);
        return "(" + prime.gen.str() + ")";
    }
};

// quadratic residue symbol in the residue field of an odd prime of L
inline int legendre(const FieldElem& gamma, const PrimeOfL& q) {
    if (q.p == 2) throw Error("legendre: dyadic prime");
    const RealQuadraticField& L = *gamma.field();
    ResidueField RF(L, q);
    return RF.legendre(RF.reduce(gamma));
}

namespace detail {

// strip the denominator (a square scaling leaves every symbol unchanged)
inline FieldElem integralize_square(const FieldElem& g) {
    const RealQuadraticField& L = *g.field();
    FieldElem d = L.integer(g.den());
    return g * d * d;
}

inline int hilbert_odd(const FieldElem& gamma, const FieldElem& delta, const PrimeOfL& eta) {
    const RealQuadraticField& L = *gamma.field();
    int a = L.val(gamma, eta), b = L.val(delta, eta);
    FieldElem pi = eta.gen;
    FieldElem u = gamma, v = delta;
    for (int i = 0; i < a; ++i) u = u / pi;
    for (int i = 0; i < b; ++i) v = v / pi;
    a &= 1;
    b &= 1;
    int eps = int((eta.norm_abs() - 1) / 2 % 2);  // (q-1)/2 mod 2
    int s = (a & b & eps) ? -1 : 1;
    if (b) s *= legendre(u, eta);
    if (a) s *= legendre(v, eta);
    return s;
}

// dyadic place: solvability of x^2 - gamma y^2 - delta z^2 = 0 over the
// completion, decided by exhaustive search modulo eta^(2e+3); a primitive
// solution at that precision lifts by Hensel's lemma.
inline int hilbert_dyadic(const FieldElem& gamma0, const FieldElem& delta0, const PrimeOfL& eta) {
    const RealQuadraticField& L = *gamma0.field();
    int e = L.val(L.integer(2), eta);
    int M = 2 * e + 3;
    FieldElem pi = eta.gen;
    auto strip = [&](FieldElem g) {
        int v = L.val(g, eta);
        for (int i = 0; i + 1 < v; i += 2) g = g / (pi * pi);
        return g;
    };
    FieldElem gamma = strip(gamma0), delta = strip(delta0);
    FieldElem mod = L.one();
    for (int i = 0; i < M; ++i) mod = mod * pi;
    QuotientRing R(L, mod);
    auto elements = R.all_elements();
    std::size_t size = std::size_t(R.size().convert_to<long long>());
    std::vector<bool> any_sq(size, false), unit_sq(size, false);
    std::vector<bool> is_unit(size, false);
    for (const FieldElem& x : elements) {
        bool xu = !x.is_zero() && !(x / pi).is_integral();
        std::size_t i2 = std::size_t(R.index_of(R.mul(x, x)).convert_to<long long>());
        any_sq[i2] = true;
        if (xu) unit_sq[i2] = true;
    }
    struct Val { FieldElem w; bool unit; };
    auto side_values = [&](const FieldElem& coeff) {
        std::map<std::pair<Integer, Integer>, Val> vals;
        FieldElem cr = R.reduce(coeff);
        for (const FieldElem& y : elements) {
            bool yu = y.is_zero() ? false : L.val(y, eta) == 0;
            FieldElem w = R.mul(cr, R.mul(y, y));
            auto key = std::make_pair(w.x(), w.y());
            auto it = vals.find(key);
            if (it == vals.end())
                vals.emplace(key, Val{w, yu});
            else
                it->second.unit = it->second.unit || yu;
        }
        return vals;
    };
    auto bs = side_values(gamma);
    auto cs = side_values(delta);
    for (const auto& [kb, b] : bs) {
        for (const auto& [kc, c] : cs) {
            FieldElem s = R.add(b.w, c.w);
            std::size_t idx = std::size_t(R.index_of(s).convert_to<long long>());
            if (b.unit || c.unit) {
                if (any_sq[idx]) return 1;
            } else {
                if (unit_sq[idx]) return 1;
            }
        }
    }
    return -1;
}

}  // namespace detail

inline int hilbert_symbol(const FieldElem& gamma0, const FieldElem& delta0, const Place& pl) {
    if (gamma0.is_zero() || delta0.is_zero()) throw Error("hilbert_symbol: zero argument");
    FieldElem gamma = detail::integralize_square(gamma0);
    FieldElem delta = detail::integralize_square(delta0);
    if (pl.kind == Place::Kind::real)
        return (gamma.sign_at(pl.emb) < 0 && delta.sign_at(pl.emb) < 0) ? -1 : 1;
    if (pl.prime.p == 2) return detail::hilbert_dyadic(gamma, delta, pl.prime);
    return detail::hilbert_odd(gamma, delta, pl.prime);
}

// all places where (gamma, delta / L) can ramify, with their symbols
inline std::vector<std::pair<Place, int>> local_symbols(const FieldElem& gamma,
                                                        const FieldElem& delta) {
    const RealQuadraticField& L = *gamma.field();
    std::vector<std::pair<Place, int>> out;
    out.emplace_back(Place::at_real(1), hilbert_symbol(gamma, delta, Place::at_real(1)));
    out.emplace_back(Place::at_real(2), hilbert_symbol(gamma, delta, Place::at_real(2)));
    std::vector<PrimeOfL> support;
    auto add_support = [&](const FieldElem& g0) {
        FieldElem g = detail::integralize_square(g0);
        for (auto& [P, e] : L.factor_element(g)) {
            bool seen = false;
            for (const PrimeOfL& Q : support) seen = seen || Q == P;
            if (!seen) support.push_back(P);
        }
    };
    add_support(L.integer(2));
    add_support(gamma);
    add_support(delta);
    std::sort(support.begin(), support.end());
    for (const PrimeOfL& P : support)
        out.emplace_back(Place::at_prime(P), hilbert_symbol(gamma, delta, Place::at_prime(P)));
    return out;
}

inline bool product_formula_check(const FieldElem& gamma, const FieldElem& delta) {
    int prod = 1;
    for (auto& [pl, s] : local_symbols(gamma, delta)) prod *= s;
    return prod == 1;
}

struct QuaternionShape {
    FieldElem gamma, delta;
    std::vector<Place> ramified_places;
};

inline QuaternionShape quaternion_shape(const FieldElem& gamma, const FieldElem& delta) {
    QuaternionShape B{gamma, delta, {}};
    for (auto& [pl, s] : local_symbols(gamma, delta))
        if (s == -1) B.ramified_places.push_back(pl);
    if (B.ramified_places.size() % 2 != 0)
        throw VerificationFailed("odd number of ramified places");
    return B;
}

struct ProgressionOptions {
    long budget = 400000;  // lattice points examined
    int skip = 0;          // return the (skip+1)-th hit of the canonical enumeration
};

// prime element alpha = r mod modulus with prescribed signs at the two real
// embeddings, by deterministic box enumeration of the translate lattice
inline FieldElem find_prime_in_progression(const FieldElem& r, const IdealL& modulus,
                                           std::pair<int, int> signs,
                                           const ProgressionOptions& opts = {}) {
    const RealQuadraticField& L = *r.field();
    const FieldElem g = modulus.generator();
    if (abs(num(L.gcd(L.elem(r.x(), r.y()), g).norm())) != 1)
        throw Error("find_prime_in_progression: residue not coprime to modulus");
    const FieldElem g1 = g, g2 = g * L.omega();
    long examined = 0;
    int remaining = opts.skip;
    for (long R = 0;; ++R) {
        for (long i = -R; i <= R; ++i) {
            for (long j = -R; j <= R; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != R) continue;
                if (++examined > opts.budget)
                    throw SearchBudgetExceeded("find_prime_in_progression: budget exhausted");
                FieldElem alpha = r + g1 * L.integer(i) + g2 * L.integer(j);
                if (alpha.is_zero()) continue;
                if (alpha.sign_at(1) != signs.first || alpha.sign_at(2) != signs.second) continue;
                Integer n = abs(num(alpha.norm()));
                bool prime = false;
                if (is_probable_prime(n)) {
                    prime = true;  // degree-one prime element
                } else {
                    Integer q;
                    if (is_perfect_square(n, &q) && is_probable_prime(q) &&
                        L.rational_split_type(q) == SplitType::inert) {
                        prime = abs(num((alpha / L.integer(q)).norm())) == 1;
                    }
                }
                if (!prime) continue;
                if (remaining-- == 0) return alpha;
            }
        }
    }
}

// prime-of-L wrapper around a prime element
inline PrimeOfL prime_of_element(const RealQuadraticField& L, const FieldElem& alpha) {
    Integer n = abs(num(alpha.norm()));
    if (is_probable_prime(n)) {
        for (auto& [P, e] : L.factor_rational_prime(n))
            if (L.val(alpha, P) > 0) return P;
        throw Error("prime_of_element: lost prime");
    }
    Integer q;
    if (is_perfect_square(n, &q) && is_probable_prime(q))
        return L.factor_rational_prime(q)[0].first;
    throw Error("prime_of_element: not a prime element");
}

struct Alpha0 {
    FieldElem alpha0;
    IdealK A;  // a chosen prime of K above (alpha0)
};

struct Alpha0Options {
    long budget = 400000;
    int skip = 0;        // take the (skip+1)-th alpha0 of the canonical search
    bool swap_A = false;  // choose the conjugate prime factor instead
};

// totally negative prime element alpha0 with alpha0 = p at every prime over
// 2 (to dyadic precision) and over d, alpha0 = 1 mod p; realizes
// B_{p,L} = (d, alpha0 p / L) with ramified set S0 and both real places.
inline Alpha0 find_alpha0(const CMField& K, const Integer& p, const Alpha0Options& opts = {}) {
    const RealQuadraticField& L = K.base();
    if (p == 2 || !is_probable_prime(p)) throw HypothesisViolation("p must be an odd prime");
    if (L.disc() % p == 0) throw HypothesisViolation("p ramified in L");
    std::vector<std::pair<FieldElem, IdealL>> congs;
    const FieldElem pe = L.integer(p);
    for (const PrimeOfL& q : K.ramified_primes())
        congs.emplace_back(pe, IdealL::principal(L, q.gen));
    for (const PrimeOfL& eta : L.dyadic_primes()) {
        int e = L.val(L.integer(2), eta);
        FieldElem mod = L.one();
        for (int i = 0; i < 2 * e + 3; ++i) mod = mod * eta.gen;
        congs.emplace_back(pe, IdealL::principal(L, mod));
    }
    congs.emplace_back(L.one(), IdealL::principal(L, pe));
    FieldElem r = L.crt(congs);
    FieldElem modulus = L.one();
    for (auto& [res, m] : congs) modulus = modulus * m.generator();
    FieldElem alpha0 = find_prime_in_progression(
        r, IdealL::principal(L, modulus), {-1, -1}, ProgressionOptions{opts.budget, opts.skip});

    // postconditions
    for (auto& [res, m] : congs)
        if (!((alpha0 - res) / m.generator()).is_integral())
            throw VerificationFailed("alpha0 congruence failed");
    PrimeOfL Pa = prime_of_element(L, alpha0);
    auto sp = splitting_in_K(Pa, K);
    if (sp.type != SplitType::split) throw VerificationFailed("(alpha0) does not split in K");
    if (legendre(K.d(), Pa) != 1) throw VerificationFailed("(d/alpha0) != 1");

    // ramified places of (d, alpha0 p) must be S0 and the two real places
    FieldElem a0p = alpha0 * pe;
    auto shape = quaternion_shape(K.d(), a0p);
    std::vector<Place> expected = {Place::at_real(1), Place::at_real(2)};
    for (auto& [P, e] : L.factor_rational_prime(p))
        if (P.f % 2 == 1) expected.push_back(Place::at_prime(P));
    auto matches = [&]() {
        if (shape.ramified_places.size() != expected.size()) return false;
        for (const Place& pl : expected) {
            bool found = false;
            for (const Place& q : shape.ramified_places) found = found || q == pl;
            if (!found) return false;
        }
        return true;
    };
    if (!matches())
        throw VerificationFailed("ramified set of (d, alpha0 p) is not S0 + real places");

    // canonical choice of A: the lexicographically smaller normal form
    IdealK A1 = sp.primes[0].ideal, A2 = sp.primes[1].ideal;
    bool first = lex_less(A1.c(), A2.c());
    IdealK A = first == !opts.swap_A ? A1 : A2;
    return {alpha0, A};
}

}  // namespace cmcoincide
