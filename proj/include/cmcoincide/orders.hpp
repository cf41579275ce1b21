#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cmcoincide/reciprocity.hpp"

namespace cmcoincide {

// [alpha, beta] = (alpha, beta; alpha0 p conj(beta), conj(alpha)) in M_2(K)
struct QuaternionElem {
    ElemK alpha, beta;

    bool operator==(const QuaternionElem& o) const { return alpha == o.alpha && beta == o.beta; }
    bool is_zero() const { return alpha.is_zero() && beta.is_zero(); }

    FieldElem trd() const { return alpha.rel_trace(); }
    // theta = alpha0 * p
    FieldElem nrd(const FieldElem& theta) const {
        return alpha.rel_norm() - theta * beta.rel_norm();
    }
    QuaternionElem quat_conj() const { return {alpha.conj(), -beta}; }
    QuaternionElem mul(const QuaternionElem& o, const FieldElem& theta) const {
        // [x, y][z, w] = [x z + theta y conj(w), x w + y conj(z)]
        ElemK a = alpha * o.alpha + (beta * o.beta.conj()) * theta;
        ElemK b = alpha * o.beta + beta * o.alpha.conj();
        return {a, b};
    }
    QuaternionElem add(const QuaternionElem& o) const { return {alpha + o.alpha, beta + o.beta}; }
};

// The data realizing B_{p,L} = (d, alpha0 p / L) with the embedding of K,
// the fixed square roots lambda_q of alpha0 p mod q, and the level ell.
struct EmbeddingContext {
    const CMField* K = nullptr;
    Integer p;
    int n = 1;
    FieldElem ell;     // p^(n-1)
    FieldElem alpha0;
    FieldElem theta;   // alpha0 * p
    IdealK A;          // prime of K over (alpha0)
    std::vector<std::pair<PrimeOfL, FieldElem>> lambda_q;  // q | d -> fixed root
    std::vector<PrimeOfL> S, S0;
    IdealK D_inv;      // inverse different (1 / sqrt(d))
};

inline EmbeddingContext make_embedding_context(const CMField& K, const Integer& p, int n,
                                               const Alpha0Options& a0opts = {}) {
    const RealQuadraticField& L = K.base();
    EmbeddingContext ctx;
    ctx.K = &K;
    ctx.p = p;
    ctx.n = n;
    if (n < 1) throw Error("level n must be >= 1");
    for (auto& [P, e] : L.factor_rational_prime(p)) {
        ctx.S.push_back(P);
        if (P.f % 2 == 1) ctx.S0.push_back(P);
    }
    if (n > 1) {
        // ell = p^(n-1) must be split in K/L
        for (const PrimeOfL& P : ctx.S)
            if (splitting_in_K(P, K).type != SplitType::split)
                throw HypothesisViolation("ell = p^(n-1) is not split in K/L");
    }
    FieldElem ell = L.one();
    for (int i = 1; i < n; ++i) ell = ell * L.integer(p);
    ctx.ell = ell;
    auto a0 = find_alpha0(K, p, a0opts);
    ctx.alpha0 = a0.alpha0;
    ctx.A = a0.A;
    ctx.theta = a0.alpha0 * L.integer(p);
    for (const PrimeOfL& q : K.ramified_primes()) {
        FieldElem lq = L.reduce_mod(L.integer(p), q.gen);
        if (!((lq * lq - ctx.theta) / q.gen).is_integral())
            throw VerificationFailed("lambda_q^2 != alpha0 p mod q");
        ctx.lambda_q.emplace_back(q, lq);
    }
    ctx.D_inv = IdealK::principal(K.sqrt_d()).inverse();
    return ctx;
}

// lambda for the sign vector: lambda = sign(q) lambda_q mod q for q | d and
// lambda * A^-1 a^-1 abar integral, via CRT with the denominator ideal
inline FieldElem solve_lambda(const EmbeddingContext& ctx, const IdealK& a_ideal,
                              const std::vector<int>& signs) {
    const CMField& K = *ctx.K;
    const RealQuadraticField& L = K.base();
    if (signs.size() != ctx.lambda_q.size()) throw Error("solve_lambda: sign vector size");
    FieldElem ngen = a_ideal.rel_norm_gen();
    if (abs(num(L.gcd(L.elem(ngen.x(), ngen.y()), K.d()).norm())) != 1)
        throw NonCoprimeIdeal("solve_lambda: ideal not coprime to d");
    IdealK M = ctx.A.inverse() * a_ideal.inverse() * a_ideal.conj();
    // L-part of M^-1 is (n/den); its numerator ideal is the denominator ideal of M
    IdealK Minv = M.inverse();
    FieldElem frac = Minv.n() / Minv.den();
    FieldElem numf = L.elem(frac.x(), frac.y());
    FieldElem c = numf / L.gcd(numf, L.integer(frac.den()));
    if (abs(num(L.gcd(c, K.d()).norm())) != 1)
        throw NonCoprimeIdeal("solve_lambda: denominator ideal not coprime to d");
    std::vector<std::pair<FieldElem, IdealL>> congs;
    for (std::size_t i = 0; i < ctx.lambda_q.size(); ++i) {
        FieldElem r = ctx.lambda_q[i].second;
        if (signs[i] == -1) r = -r;
        congs.emplace_back(r, IdealL::principal(L, ctx.lambda_q[i].first.gen));
    }
    congs.emplace_back(L.zero(), IdealL::principal(L, c));
    FieldElem lambda = L.crt(congs);
    IdealK check = M.scaled(lambda);
    if (!check.is_integral()) throw VerificationFailed("lambda M is not integral");
    return lambda;
}

// Integer lattice model of { [alpha, beta] : alpha in Ia, beta in Ib,
// alpha = lambda beta mod O_K } (the congruence is optional).
class OrderLattice {
public:
    const CMField* K = nullptr;
    FieldElem theta, ell;
    IdealK alpha_ideal, beta_ideal;
    std::optional<FieldElem> lambda;
    IdealK a_label;
    std::vector<int> signs_label;
    std::vector<QuaternionElem> basis;  // 8 generators over Z

    bool member(const QuaternionElem& x) const {
        if (!alpha_ideal.contains(x.alpha)) return false;
        if (!beta_ideal.contains(x.beta)) return false;
        if (!lambda) return true;
        ElemK diff = x.alpha - x.beta * *lambda;
        return diff.is_integral();
    }

    // coordinates in the fixed ambient basis {1, w, t, wt}^2, as a rational row
    static QVec coords(const QuaternionElem& x) {
        QVec v(8);
        auto put = [&](const ElemK& e, std::size_t at) {
            v[at] = Rational(e.u().x()) / e.u().den();
            v[at + 1] = Rational(e.u().y()) / e.u().den();
            v[at + 2] = Rational(e.v().x()) / e.v().den();
            v[at + 3] = Rational(e.v().y()) / e.v().den();
        };
        put(x.alpha, 0);
        put(x.beta, 4);
        return v;
    }

    // is x in the Z-span of the basis
    bool lattice_member(const QuaternionElem& x) const {
        IMat A(8, IVec(8));
        QVec xc = coords(x);
        Integer D = 1;
        std::vector<QVec> bc;
        for (const auto& b : basis) bc.push_back(coords(b));
        for (const auto& r : bc)
            for (const auto& q : r) D = D / gcd_int(D, den(q)) * den(q);
        for (const auto& q : xc) D = D / gcd_int(D, den(q)) * den(q);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) A[j][i] = num(bc[i][j] * D);
        IVec rhs(8);
        for (std::size_t j = 0; j < 8; ++j) rhs[j] = num(xc[j] * D);
        return solve_int(A, rhs).has_value();
    }

    // Gram of the bilinear form Trd(x conj(y)) pushed down to Q
    IMat gram() const {
        IMat G(8, IVec(8));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                QuaternionElem prod = basis[i].mul(basis[j].quat_conj(), theta);
                Rational tr = prod.trd().trace();
                if (den(tr) != 1) throw Error("gram: non-integral entry");
                G[i][j] = num(tr);
            }
        return G;
    }
};

namespace detail {

inline OrderLattice build_pair_lattice(const EmbeddingContext& ctx, const IdealK& Ia,
                                       const IdealK& Ib, const std::optional<FieldElem>& lambda) {
    const CMField& K = *ctx.K;
    OrderLattice R;
    R.K = &K;
    R.theta = ctx.theta;
    R.ell = ctx.ell;
    R.alpha_ideal = Ia;
    R.beta_ideal = Ib;
    R.lambda = lambda;
    auto ba = Ia.z_basis();
    auto bb = Ib.z_basis();
    if (!lambda) {
        for (const ElemK& a : ba) R.basis.push_back({a, K.zero()});
        for (const ElemK& b : bb) R.basis.push_back({K.zero(), b});
        return R;
    }
    // generators c in Z^8 with  sum_i c_i a_i - lambda sum_j c_j b_j in O_K
    std::vector<QVec> cols;
    for (const ElemK& a : ba) cols.push_back(OrderLattice::coords({a, K.zero()}));
    for (const ElemK& b : bb) {
        ElemK lb = b * *lambda;
        cols.push_back(OrderLattice::coords({-lb, K.zero()}));
    }
    Integer D = 1;
    for (const auto& col : cols)
        for (std::size_t j = 0; j < 4; ++j) D = D / gcd_int(D, den(col[j])) * den(col[j]);
    IMat big(4, IVec(8 + 4, 0));
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 4; ++j) big[j][i] = num(cols[i][j] * D);
    for (std::size_t j = 0; j < 4; ++j) big[j][8 + j] = -D;
    IMat ker = kernel_int(big);
    IMat proj;
    for (const auto& r : ker) proj.emplace_back(r.begin(), r.begin() + 8);
    proj = hnf_rows(proj);
    if (proj.size() != 8) throw Error("order lattice: rank != 8");
    for (const auto& c : proj) {
        ElemK a = K.zero(), b = K.zero();
        for (std::size_t i = 0; i < 4; ++i) {
            a = a + ba[i] * K.base().integer(c[i]);
            b = b + bb[i] * K.base().integer(c[4 + i]);
        }
        R.basis.push_back({a, b});
    }
    return R;
}

}  // namespace detail

// R(a, lambda_eps, ell): the order { [alpha, beta] : alpha in D^-1,
// beta in D^-1 A^-1 ell a^-1 abar, alpha = lambda beta mod O_K }
inline OrderLattice build_order(const EmbeddingContext& ctx, const IdealK& a_ideal,
                                const std::vector<int>& signs) {
    const CMField& K = *ctx.K;
    FieldElem lambda = solve_lambda(ctx, a_ideal, signs);
    IdealK Ib = ctx.D_inv * ctx.A.inverse() * a_ideal.inverse() * a_ideal.conj();
    if (ctx.n > 1) Ib = Ib.scaled(ctx.ell);
    OrderLattice R = detail::build_pair_lattice(ctx, ctx.D_inv, Ib, lambda);
    R.a_label = a_ideal;
    R.signs_label = signs;
    // O_K embeds as [x, 0]
    for (const ElemK& x : IdealK::unit_ideal(K).z_basis())
        if (!R.member({x, K.zero()}) || !R.lattice_member({x, K.zero()}))
            throw ClosureFailure("O_K not contained in R");
    for (const auto& b : R.basis)
        if (!R.member(b)) throw ClosureFailure("basis violates the defining predicate");
    // ring closure on basis products
    for (const auto& x : R.basis)
        for (const auto& y : R.basis)
            if (!R.member(x.mul(y, ctx.theta)))
                throw ClosureFailure("basis product escapes the order");
    return R;
}

// signs from the parities val_{q~}(a); ramified components of a are stripped
// before the coprimality-constrained construction
inline OrderLattice order_for_ideal(const EmbeddingContext& ctx, const IdealK& a_ideal) {
    const CMField& K = *ctx.K;
    IdealK a0 = a_ideal;
    std::vector<int> signs;
    for (const PrimeOfL& q : K.ramified_primes()) {
        PrimeK qt = splitting_in_K(q, K).primes[0];
        int v = val_at(a_ideal, qt);
        signs.push_back(v % 2 == 0 ? 1 : -1);
        for (int i = 0; i < v; ++i) a0 = a0 * qt.ideal.inverse();
    }
    return build_order(ctx, a0, signs);
}

// the auxiliary lattice R' = { [alpha, beta] : alpha in O_K, beta in ell a^-1 abar }
inline OrderLattice build_r_prime(const EmbeddingContext& ctx, const IdealK& a_ideal) {
    IdealK Ib = a_ideal.inverse() * a_ideal.conj();
    if (ctx.n > 1) Ib = Ib.scaled(ctx.ell);
    OrderLattice R =
        detail::build_pair_lattice(ctx, IdealK::unit_ideal(*ctx.K), Ib, std::nullopt);
    R.a_label = a_ideal;
    return R;
}

inline bool orders_equal(const OrderLattice& R1, const OrderLattice& R2) {
    for (const auto& b : R1.basis)
        if (!R2.lattice_member(b)) return false;
    for (const auto& b : R2.basis)
        if (!R1.lattice_member(b)) return false;
    return true;
}

// Lemma-style equality criterion: same a^-1 abar and matching parities at
// every ramified prime
inline bool order_equality_criterion(const EmbeddingContext& ctx, const IdealK& a,
                                     const IdealK& b) {
    const CMField& K = *ctx.K;
    if (!(a.inverse() * a.conj() == b.inverse() * b.conj())) return false;
    for (const PrimeOfL& q : K.ramified_primes()) {
        PrimeK qt = splitting_in_K(q, K).primes[0];
        if ((val_at(a, qt) - val_at(b, qt)) % 2 != 0) return false;
    }
    return true;
}

namespace detail {

// free O_L-basis of the lattice (scaling by Delta clears denominators first);
// returns the basis and the scaling used
inline std::pair<std::vector<std::array<FieldElem, 4>>, Integer> ol_basis(
    const OrderLattice& R) {
    const RealQuadraticField& L = R.K->base();
    Integer Delta = 1;
    for (const auto& b : R.basis) {
        for (const FieldElem* e : {&b.alpha.u(), &b.alpha.v(), &b.beta.u(), &b.beta.v()})
            Delta = Delta / gcd_int(Delta, e->den()) * e->den();
    }
    FieldElem dl = L.integer(Delta);
    std::vector<std::array<FieldElem, 4>> gens;
    for (const auto& b : R.basis)
        gens.push_back({b.alpha.u() * dl, b.alpha.v() * dl, b.beta.u() * dl, b.beta.v() * dl});
    std::vector<std::array<FieldElem, 4>> out;
    for (int k = 3; k >= 0; --k) {
        std::size_t kk = std::size_t(k);
        // combine a pivot with gcd k-coordinate
        std::optional<std::array<FieldElem, 4>> pivot;
        for (const auto& g : gens) {
            if (g[kk].is_zero()) continue;
            if (!pivot) { pivot = g; continue; }
            FieldElem h = L.gcd((*pivot)[kk], g[kk]);
            FieldElem s, t;
            L.bezout((*pivot)[kk], g[kk], h, s, t);
            for (std::size_t i = 0; i < 4; ++i) (*pivot)[i] = (*pivot)[i] * s + g[i] * t;
        }
        if (!pivot) throw Error("ol_basis: rank deficient");
        for (auto& g : gens) {
            if (g[kk].is_zero()) continue;
            FieldElem f = g[kk] / (*pivot)[kk];
            for (std::size_t i = 0; i < 4; ++i) g[i] = g[i] - (*pivot)[i] * f;
        }
        out.push_back(*pivot);
    }
    return {out, Delta};
}

inline FieldElem det4(const std::array<std::array<FieldElem, 4>, 4>& M,
                      const RealQuadraticField& L) {
    // Gaussian elimination over the field
    std::array<std::array<FieldElem, 4>, 4> A = M;
    FieldElem det = L.one();
    for (int i = 0; i < 4; ++i) {
        int piv = -1;
        for (int r = i; r < 4; ++r)
            if (!A[std::size_t(r)][std::size_t(i)].is_zero()) { piv = r; break; }
        if (piv < 0) return L.zero();
        if (piv != i) {
            std::swap(A[std::size_t(piv)], A[std::size_t(i)]);
            det = -det;
        }
        det = det * A[std::size_t(i)][std::size_t(i)];
        for (int r = i + 1; r < 4; ++r) {
            FieldElem f = A[std::size_t(r)][std::size_t(i)] / A[std::size_t(i)][std::size_t(i)];
            for (int c2 = i; c2 < 4; ++c2)
                A[std::size_t(r)][std::size_t(c2)] =
                    A[std::size_t(r)][std::size_t(c2)] - A[std::size_t(i)][std::size_t(c2)] * f;
        }
    }
    return det;
}

}  // namespace detail

// the O_L-ideal generated by det of the 4x4 Gram Trd(b_i conj(b_j)) for an
// O_L-basis; for orders this is the square of the reduced discriminant
inline FieldElem gram_det_generator(const OrderLattice& R) {
    const RealQuadraticField& L = R.K->base();
    auto [gens, Delta] = detail::ol_basis(R);
    std::array<std::array<FieldElem, 4>, 4> G;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            QuaternionElem x{R.K->elem(gens[i][0], gens[i][1]), R.K->elem(gens[i][2], gens[i][3])};
            QuaternionElem y{R.K->elem(gens[j][0], gens[j][1]), R.K->elem(gens[j][2], gens[j][3])};
            G[i][j] = x.mul(y.quat_conj(), R.theta).trd();
        }
    FieldElem det = detail::det4(G, L);
    // undo the Delta scaling: det scales by Delta^8
    FieldElem dl = L.integer(Delta);
    for (int i = 0; i < 8; ++i) det = det / dl;
    return L.canonical_tp_generator(det);
}

// reduced discriminant ideal: the square root of (gram det)
inline IdealL order_discriminant(const OrderLattice& R) {
    const RealQuadraticField& L = R.K->base();
    FieldElem det = gram_det_generator(R);
    FieldElem numr = L.elem(det.x(), det.y());
    FieldElem denr = L.integer(det.den());
    FieldElem root = L.one();
    for (auto& [P, v] : L.factor_element(numr)) {
        if (v % 2 != 0) throw Error("order_discriminant: determinant is not an ideal square");
        for (int i = 0; i < v / 2; ++i) root = root * P.gen;
    }
    if (!denr.is_one()) {
        for (auto& [P, v] : L.factor_element(denr)) {
            if (v % 2 != 0) throw Error("order_discriminant: determinant is not an ideal square");
            for (int i = 0; i < v / 2; ++i) root = root / P.gen;
        }
    }
    return IdealL::principal(L, root);
}

// complete enumeration of { xi in R : Trd(xi) = t, Nrd(xi) = nu } under the
// positive definite form Tr_{L/Q}(Nrd)
inline std::vector<QuaternionElem> brute_force_S(const OrderLattice& R, const FieldElem& t,
                                                 const FieldElem& nu) {
    if (!nu.is_totally_positive()) return {};
    QMat G(8, QVec(8));
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            G[i][j] = R.basis[i].mul(R.basis[j].quat_conj(), R.theta).trd().trace() / 2;
    std::vector<QuaternionElem> out;
    enumerate_quadform(G, QVec(8, Rational(0)), nu.trace(), [&](const IVec& c) {
        QuaternionElem x{R.K->zero(), R.K->zero()};
        for (std::size_t i = 0; i < 8; ++i) {
            FieldElem ci = R.K->base().integer(c[i]);
            x = x.add({R.basis[i].alpha * ci, R.basis[i].beta * ci});
        }
        if (x.is_zero()) return;
        if (x.trd() == t && x.nrd(R.theta) == nu) out.push_back(x);
    });
    return out;
}

}  // namespace cmcoincide
