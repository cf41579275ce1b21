#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cmcoincide/orders.hpp"

namespace cmcoincide {

struct Eligibility {
    bool ok = true;
    std::string reason = "ok";
};

// superspecial eligibility: p odd, unramified in L and K, (d, 2p) = 1,
// every prime of S \ S0 split in K and every prime of S0 inert in K
inline Eligibility superspecial_eligible(const CMField& K, const Integer& p) {
    const RealQuadraticField& L = K.base();
    if (p == 2) return {false, "p = 2 (dyadic)"};
    if (!is_probable_prime(p)) return {false, "p is not prime"};
    if (L.disc() % p == 0) return {false, "ramified in L"};
    for (const PrimeOfL& q : K.ramified_primes())
        if (q.p == p) return {false, "ramified in K"};
    for (auto& [P, e] : L.factor_rational_prime(p)) {
        auto sp = splitting_in_K(P, K);
        if (P.f % 2 == 1) {
            if (sp.type != SplitType::inert)
                return {false, std::string("a prime of S0 is not inert in K (") +
                                   (sp.type == SplitType::split ? "split" : "ramified") + ")"};
        } else {
            if (sp.type != SplitType::split)
                return {false, std::string("a prime of S\\S0 is not split in K (") +
                                   (sp.type == SplitType::inert ? "inert" : "ramified") + ")"};
        }
    }
    return {};
}

struct ConditionCParams {
    FieldElem aK;       // a with a = -Tr(t) for K
    FieldElem trW, nW;  // Tr(w), N(w) for the generator w of O_K'
    FieldElem d, dprime;
    Integer p;
    FieldElem ell;
};

inline ConditionCParams condition_c_params(const CMField& K, const CMField& Kprime,
                                           const Integer& p, const FieldElem& ell) {
    // O_K' = O_L[w] with w = t'; Tr(w) = -a', N(w) = b'
    return {K.a(), -Kprime.a(), Kprime.b(), K.d(), Kprime.d(), p, ell};
}

inline bool satisfies_C(const FieldElem& x, const ConditionCParams& P) {
    const RealQuadraticField& L = *x.field();
    if (!((x - P.aK * P.trW) / L.integer(2)).is_integral()) return false;
    FieldElem e = x * x - P.d * P.dprime;
    if (!e.is_totally_negative()) return false;
    FieldElem q = (-e) / (L.integer(4 * P.p) * P.ell * P.ell);
    return q.is_integral();
}

// delta(x) = 2^#{ q | d : x = 0 mod q }
inline Integer delta_weight(const FieldElem& x, const CMField& K) {
    const RealQuadraticField& L = K.base();
    int cnt = 0;
    for (const PrimeOfL& q : K.ramified_primes())
        if (x.is_zero() || L.val(x, q) >= 1) ++cnt;
    return pow_int(2, unsigned(cnt));
}

// the x-values of condition C, enumerated completely
inline std::vector<FieldElem> condition_c_values(const ConditionCParams& P) {
    const RealQuadraticField& L = *P.d.field();
    FieldElem dd = P.d * P.dprime;
    std::vector<FieldElem> out;
    for (const FieldElem& x :
         L.enumerate_totally_bounded(dd, P.aK * P.trW, IdealL::principal(L, L.integer(2))))
        if (satisfies_C(x, P)) out.push_back(x);
    return out;
}

// w_K * sum_{x in C} delta(x) * #S2(a, x, ell), the right side of the main
// counting identity for one class representative
inline Integer count_S2_weighted(const CMField& K, const CMField& Kprime,
                                 const EmbeddingContext& ctx, const IdealK& a_ideal,
                                 const ClassGroup& G, std::vector<FieldElem>* xs_out = nullptr) {
    const RealQuadraticField& L = K.base();
    ConditionCParams P = condition_c_params(K, Kprime, ctx.p, ctx.ell);
    std::vector<Integer> cls = G.class_of(a_ideal * a_ideal * ctx.A);
    Integer sum = 0;
    FieldElem dd = P.d * P.dprime;
    for (const FieldElem& x : condition_c_values(P)) {
        FieldElem nu = (dd - x * x) / (L.integer(4 * ctx.p) * ctx.ell * ctx.ell);
        auto [cnt, wit] = count_ideals_norm_in_class(IdealL::principal(L, nu), cls, K, G);
        if (cnt != 0 && xs_out) xs_out->push_back(x);
        sum += delta_weight(x, K) * cnt;
    }
    return Integer(roots_of_unity_count(K)) * sum;
}

struct PerClassCount {
    std::size_t class_index;
    Integer s2_weighted;  // w_K sum_x delta(x) #S2
};

struct CoincidenceReport {
    Integer p;
    int n = 1;
    bool eligible = false;           // K-side hypothesis (the formula's own)
    bool eligible_kprime = false;    // K'-side superspecial condition
    std::string reason;
    FieldElem alpha0;
    Integer w_K = 0;
    int tau = 0;
    std::vector<PerClassCount> per_class;
    Integer total_raw = 0;           // sum over classes of #S(a, lambda_a, p^{n-1})
    std::optional<Integer> multiplicity;
    Integer total = 0;               // total_raw times multiplicity when given
    long long elapsed_ms = 0;
};

struct CoincidenceOptions {
    bool allow_self = false;
    Alpha0Options alpha0;
    ClassGroupOptions class_group;
};

// sum over class representatives of #S(a, lambda_a, p^(n-1)), computed as
// 2^(-tau) * sum_a [ w_K sum_x delta(x) #S2 ]; the division is exact because
// summing the ramified twists over all classes covers each class 2^tau times
inline CoincidenceReport coincidence_total(const CMField& K, const CMField& Kprime,
                                           const Integer& p, int n,
                                           std::optional<Integer> multiplicity = std::nullopt,
                                           const CoincidenceOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    const RealQuadraticField& L = K.base();
    if (K == Kprime && !opts.allow_self)
        throw HypothesisViolation("K = K' requires the self-coincidence flag");
    Eligibility eK = superspecial_eligible(K, p);
    if (!eK.ok) throw IneligiblePrime(eK.reason);
    Eligibility eKp = superspecial_eligible(Kprime, p);

    CoincidenceReport rep;
    rep.p = p;
    rep.n = n;
    rep.eligible = true;
    rep.eligible_kprime = eKp.ok;
    rep.reason = eKp.ok ? "ok" : "K' side: " + eKp.reason;
    rep.multiplicity = multiplicity;
    rep.tau = K.tau();
    rep.w_K = roots_of_unity_count(K);

    EmbeddingContext ctx = make_embedding_context(K, p, n, opts.alpha0);
    rep.alpha0 = ctx.alpha0;
    FieldElem avoid = L.integer(2 * p) * K.d() * ctx.alpha0;
    ClassGroup G = class_group(K, IdealL::principal(L, avoid), opts.class_group);

    Integer sum = 0;
    for (std::size_t i = 0; i < G.representatives.size(); ++i) {
        Integer s2w = count_S2_weighted(K, Kprime, ctx, G.representatives[i], G);
        rep.per_class.push_back({i, s2w});
        sum += s2w;
    }
    Integer twotau = pow_int(2, unsigned(rep.tau));
    if (sum % twotau != 0)
        throw VerificationFailed("class-summed count is not divisible by 2^tau");
    rep.total_raw = sum / twotau;
    rep.total = multiplicity ? *multiplicity * rep.total_raw : rep.total_raw;
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
}

// #(O_K^x / O_L^x): the unit index [O_K^x : mu_K O_L^x] is 1 whenever the
// fundamental unit of L has norm -1 (a square root of zeta eps_L would have
// totally positive relative norm +-eps_L, impossible), so the order is w_K/2.
inline Integer unit_group_quotient_order(const CMField& K) {
    if (num(K.base().fundamental_unit().norm()) != -1)
        throw HypothesisViolation("unit index needs the norm -1 witness");
    Integer w = roots_of_unity_count(K);
    if (w % 2 != 0) throw VerificationFailed("w_K must be even");
    return w / 2;
}

// number of optimal triples up to conjugation at level 1
inline Rational optimal_triples_count(const CMField& K, const CMField& Kprime, const Integer& p,
                                      const CoincidenceOptions& opts = {}) {
    if (K == Kprime) throw HypothesisViolation("optimal triples require K != K'");
    CoincidenceReport rep = coincidence_total(K, Kprime, p, 1, std::nullopt, opts);
    Integer idx = unit_group_quotient_order(K);
    if (rep.total_raw % idx != 0)
        throw NonIntegerResult("sum of #S not divisible by #(O_K^x/O_L^x)");
    return Rational(rep.total_raw / idx);
}

// ---- the classical degenerate mode over Q ------------------------------

inline int kronecker_at_prime(const Integer& disc, const Integer& q) {
    if (q == 2) {
        Integer r = mod_floor(disc, 8);
        if (r % 2 == 0) return 0;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    Integer r = mod_floor(disc, q);
    if (r == 0) return 0;
    return powmod(r, (q - 1) / 2, q) == 1 ? 1 : -1;
}

// R(m): ideals of norm m in the imaginary quadratic field of discriminant disc
inline Integer gz1_ideal_count(const Integer& disc, const Integer& m) {
    if (m <= 0) return 0;
    Integer cnt = 1;
    for (auto& [q, e] : factor_integer(m)) {
        int chi = kronecker_at_prime(disc, q);
        if (chi == 1)
            cnt *= e + 1;
        else if (chi == -1 && e % 2 == 1)
            return 0;
    }
    return cnt;
}

inline bool is_fundamental_discriminant(const Integer& d) {
    if (d >= 0) return false;
    if (mod_floor(d, 4) == 1) {
        for (auto& [p, e] : factor_integer(-d))
            if (e > 1) return false;
        return true;
    }
    if (mod_floor(d, 4) != 0) return false;
    Integer m = d / 4;
    Integer r = mod_floor(m, 4);
    if (r != 2 && r != 3) return false;
    for (auto& [p, e] : factor_integer(abs(m)))
        if (e > 1) return false;
    return true;
}

// (1/2) sum_x sum_{n >= 1} delta(x) R((d d' - x^2) / (4 p^n)), with R and
// delta read from the designated side field
inline Rational gz1_valuation(const Integer& d, const Integer& dprime, const Integer& p,
                              int side) {
    if (!is_fundamental_discriminant(d) || !is_fundamental_discriminant(dprime))
        throw HypothesisViolation("gz1: fundamental negative discriminants required");
    if (gcd_int(abs(d), abs(dprime)) != 1)
        throw HypothesisViolation("gz1: discriminants must be coprime");
    if (!is_probable_prime(p)) throw HypothesisViolation("gz1: p must be prime");
    const Integer dd = d * dprime;
    const Integer sided = side == 0 ? d : dprime;
    Integer sum = 0;
    Integer X = isqrt_floor(dd);
    for (Integer x = -X; x <= X; ++x) {
        if (x * x >= dd) continue;
        Integer rem = dd - x * x;
        Integer q = 4 * p;
        while (q <= rem) {
            if (rem % q == 0) {
                Integer delta = (mod_floor(x, abs(sided)) == 0) ? 2 : 1;
                sum += delta * gz1_ideal_count(sided, rem / q);
            }
            q *= p;
        }
    }
    return Rational(sum) / 2;
}

}  // namespace cmcoincide
