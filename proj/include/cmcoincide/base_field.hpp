#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmcoincide/lattice.hpp"

namespace cmcoincide {

class RealQuadraticField;

enum class TotalSign { zero, totally_positive, totally_negative, mixed };
enum class SplitType { split, inert, ramified };

// An element (x + y*omega)/den of L = Q(sqrt(D)), stored in lowest terms.
// omega = (1+sqrt(D))/2 when D = 1 mod 4, otherwise sqrt(D).
class FieldElem {
public:
    FieldElem() : F_(nullptr), x_(0), y_(0), den_(1) {}
    FieldElem(const RealQuadraticField* F, Integer x, Integer y, Integer den = 1)
        : F_(F), x_(std::move(x)), y_(std::move(y)), den_(std::move(den)) {
        canonicalize();
    }

    const Integer& x() const { return x_; }
    const Integer& y() const { return y_; }
    const Integer& den() const { return den_; }
    const RealQuadraticField* field() const { return F_; }

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_integral() const { return den_ == 1; }
    bool is_one() const { return x_ == 1 && y_ == 0 && den_ == 1; }
    bool is_rational() const { return y_ == 0; }

    FieldElem operator-() const { return FieldElem(F_, -x_, -y_, den_); }
    FieldElem operator+(const FieldElem& o) const {
        return FieldElem(F_, x_ * o.den_ + o.x_ * den_, y_ * o.den_ + o.y_ * den_, den_ * o.den_);
    }
    FieldElem operator-(const FieldElem& o) const { return *this + (-o); }
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    bool operator==(const FieldElem& o) const {
        return x_ == o.x_ && y_ == o.y_ && den_ == o.den_;
    }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    FieldElem conj() const;
    Rational norm() const;   // N_{L/Q}
    Rational trace() const;  // Tr_{L/Q}
    std::pair<Rational, Rational> norm_trace() const { return {norm(), trace()}; }

    // sign of sigma_i(value), i = 1 or 2, with sigma_1(sqrt(D)) > 0
    int sign_at(int emb) const;
    TotalSign total_sign() const {
        if (is_zero()) return TotalSign::zero;
        Rational n = norm(), t = trace();
        if (n > 0 && t > 0) return TotalSign::totally_positive;
        if (n > 0 && t < 0) return TotalSign::totally_negative;
        return TotalSign::mixed;
    }
    bool is_totally_positive() const { return total_sign() == TotalSign::totally_positive; }
    bool is_totally_negative() const { return total_sign() == TotalSign::totally_negative; }

    // coordinate order, used only for deterministic tie-breaks
    friend bool lex_less(const FieldElem& a, const FieldElem& b) {
        if (a.den_ != b.den_) return a.den_ < b.den_;
        if (a.x_ != b.x_) return a.x_ < b.x_;
        return a.y_ < b.y_;
    }

    std::string str() const {
        return "(" + x_.str() + (y_ >= 0 ? "+" : "") + y_.str() + "w)/" + den_.str();
    }

private:
    void canonicalize() {
        if (den_ == 0) throw Error("FieldElem: zero denominator");
        if (den_ < 0) { x_ = -x_; y_ = -y_; den_ = -den_; }
        Integer g = gcd_int(gcd_int(abs(x_), abs(y_)), den_);
        if (g > 1) { x_ /= g; y_ /= g; den_ /= g; }
    }
    const RealQuadraticField* F_;
    Integer x_, y_, den_;
};

struct PrimeOfL {
    Integer p;                          // rational prime below
    FieldElem gen;                      // canonical totally positive generator
    int f = 1;                          // residue degree
    bool ramified = false;
    std::optional<Integer> omega_root;  // omega = root (mod this prime), for f = 1

    bool operator==(const PrimeOfL& o) const { return p == o.p && gen == o.gen; }
    bool operator<(const PrimeOfL& o) const {
        if (p != o.p) return p < o.p;
        if (gen.x() != o.gen.x()) return gen.x() < o.gen.x();
        return gen.y() < o.gen.y();
    }
    Integer norm_abs() const { return pow_int(p, unsigned(f)); }
};

// Ideal of O_L (or fractional ideal of L), kept as its canonical totally
// positive generator; h_L^+ = 1 makes this faithful.
class IdealL {
public:
    IdealL() = default;
    static IdealL principal(const RealQuadraticField& F, const FieldElem& g);
    const FieldElem& generator() const { return gen_; }
    bool is_zero() const { return gen_.is_zero(); }
    bool is_integral() const { return gen_.is_integral(); }
    bool is_unit_ideal() const { return gen_.is_one(); }
    bool operator==(const IdealL& o) const { return gen_ == o.gen_; }
    IdealL operator*(const IdealL& o) const;

private:
    FieldElem gen_;
};

class RealQuadraticField {
public:
    explicit RealQuadraticField(Integer D) : D_(std::move(D)) {
        if (D_ <= 1) throw HypothesisViolation("D must be a squarefree integer > 1");
        for (auto& [p, e] : factor_integer(D_))
            if (e > 1) throw HypothesisViolation("D must be squarefree");
        omega_half_ = (D_ % 4 == 1);
        disc_ = omega_half_ ? D_ : 4 * D_;
        if (omega_half_) {
            om_c0_ = (D_ - 1) / 4; om_c1_ = 1; om_tr_ = 1; om_n_ = (1 - D_) / 4;
        } else {
            om_c0_ = D_; om_c1_ = 0; om_tr_ = 0; om_n_ = -D_;
        }
        compute_fundamental_unit();
        verify_narrow_class_number_one();
    }

    const Integer& D() const { return D_; }
    const Integer& disc() const { return disc_; }
    bool omega_is_half_type() const { return omega_half_; }
    const Integer& omega_sq_const() const { return om_c0_; }
    const Integer& omega_sq_lin() const { return om_c1_; }
    const Integer& omega_trace() const { return om_tr_; }
    const Integer& omega_norm() const { return om_n_; }

    FieldElem elem(Integer x, Integer y, Integer den = 1) const {
        return FieldElem(this, std::move(x), std::move(y), std::move(den));
    }
    FieldElem integer(Integer n) const { return elem(std::move(n), 0); }
    FieldElem zero() const { return integer(0); }
    FieldElem one() const { return integer(1); }
    FieldElem omega() const { return elem(0, 1); }
    FieldElem sqrtD() const { return omega_half_ ? elem(-1, 2) : elem(0, 1); }
    const FieldElem& fundamental_unit() const { return eps_; }
    const FieldElem& fundamental_unit_inv() const { return eps_inv_; }

    // ---- canonical generators -------------------------------------------

    // Totally positive generator of (a), minimal trace among unit multiples,
    // lexicographic tie-break. Deterministic and representative independent.
    FieldElem canonical_tp_generator(FieldElem a) const {
        if (a.is_zero()) return a;
        if (a.norm() < 0) a = a * eps_;
        if (a.is_totally_negative()) a = -a;
        if (!a.is_totally_positive()) throw Error("canonical_tp_generator: sign fix failed");
        FieldElem eps2 = eps_ * eps_, eps2i = eps_inv_ * eps_inv_;
        while (true) {
            FieldElem up = a * eps2;
            if (up.trace() < a.trace() || (up.trace() == a.trace() && lex_less(up, a))) {
                a = up;
                continue;
            }
            FieldElem dn = a * eps2i;
            if (dn.trace() < a.trace() || (dn.trace() == a.trace() && lex_less(dn, a))) {
                a = dn;
                continue;
            }
            return a;
        }
    }

    // generator of the O_L-ideal (a, b); inputs integral
    FieldElem gcd(const FieldElem& a, const FieldElem& b) const {
        if (!a.is_integral() || !b.is_integral()) throw Error("gcd: integral inputs required");
        if (a.is_zero()) return canonical_tp_generator(b);
        if (b.is_zero()) return canonical_tp_generator(a);
        IMat rows;
        for (const FieldElem* e : {&a, &b}) {
            FieldElem ew = *e * omega();
            rows.push_back({e->x(), e->y()});
            rows.push_back({ew.x(), ew.y()});
        }
        return lattice_generator(hnf_rows(rows));
    }

    // s*a + t*b = gcd(a, b), over O_L
    void bezout(const FieldElem& a, const FieldElem& b, const FieldElem& g, FieldElem& s,
                FieldElem& t) const {
        IMat M(2, IVec(4, 0));
        auto fill = [&](const FieldElem& e, std::size_t c) {
            FieldElem ew = e * omega();
            M[0][c] = e.x(); M[1][c] = e.y();
            M[0][c + 1] = ew.x(); M[1][c + 1] = ew.y();
        };
        fill(a, 0);
        fill(b, 2);
        auto sol = solve_int(M, {g.x(), g.y()});
        if (!sol) throw Error("bezout: no solution");
        s = elem((*sol)[0], (*sol)[1]);
        t = elem((*sol)[2], (*sol)[3]);
    }

    // ---- primes ----------------------------------------------------------

    SplitType rational_split_type(const Integer& q) const {
        if (disc_ % q == 0) return SplitType::ramified;
        if (q == 2) return D_ % 8 == 1 ? SplitType::split : SplitType::inert;
        Integer ls = powmod(mod_floor(D_, q), (q - 1) / 2, q);
        return ls == 1 ? SplitType::split : SplitType::inert;
    }

    // primes above q with exponents (ramified: exponent 2)
    std::vector<std::pair<PrimeOfL, int>> factor_rational_prime(const Integer& q) const {
        SplitType st = rational_split_type(q);
        std::vector<std::pair<PrimeOfL, int>> out;
        if (st == SplitType::inert) {
            PrimeOfL P{q, canonical_tp_generator(integer(q)), 2, false, std::nullopt};
            out.emplace_back(std::move(P), 1);
            return out;
        }
        std::vector<Integer> roots = omega_roots_mod(q, st);
        for (const Integer& r : roots) {
            IMat rows;
            FieldElem wr = elem(-r, 1);
            for (const FieldElem& e : {integer(q), integer(q) * omega(), wr, wr * omega()}) {
                rows.push_back({e.x(), e.y()});
            }
            FieldElem g = lattice_generator(hnf_rows(rows));
            out.push_back({PrimeOfL{q, g, 1, st == SplitType::ramified, r},
                           st == SplitType::ramified ? 2 : 1});
        }
        return out;
    }

    std::vector<PrimeOfL> dyadic_primes() const {
        std::vector<PrimeOfL> out;
        for (auto& [P, e] : factor_rational_prime(2)) out.push_back(P);
        return out;
    }

    // valuation at P of a (possibly fractional) nonzero element
    int val(const FieldElem& a, const PrimeOfL& P) const {
        if (a.is_zero()) throw Error("val of zero");
        auto count = [&](FieldElem e) {
            int v = 0;
            while (true) {
                FieldElem q = e / P.gen;
                if (!q.is_integral()) return v;
                e = q;
                ++v;
            }
        };
        int v = count(elem(a.x(), a.y()));
        if (a.den() != 1) v -= count(integer(a.den()));
        return v;
    }

    bool divides(const PrimeOfL& P, const FieldElem& a) const {
        return a.is_zero() || val(a, P) >= 1;
    }

    // full factorization of a nonzero integral element's ideal
    std::vector<std::pair<PrimeOfL, int>> factor_element(const FieldElem& a) const {
        std::vector<std::pair<PrimeOfL, int>> out;
        Integer n = abs(num(a.norm()));
        for (auto& [q, e] : factor_integer(n)) {
            for (auto& [P, e0] : factor_rational_prime(q)) {
                int v = val(a, P);
                if (v > 0) out.emplace_back(P, v);
            }
        }
        return out;
    }

    // ---- modular arithmetic ----------------------------------------------

    // canonical representative of a modulo the lattice of (m); a, m integral
    FieldElem reduce_mod(const FieldElem& a, const FieldElem& m) const {
        if (!a.is_integral()) throw Error("reduce_mod: non-integral element");
        IMat H = modulus_lattice(m);
        Integer x = a.x(), y = a.y();
        Integer k = floor_div(x, H[0][0]);
        x -= k * H[0][0];
        y -= k * H[0][1];
        y = mod_floor(y, H[1][1]);
        return elem(x, y);
    }

    // simultaneous congruences x = r_i mod (m_i); moduli pairwise coprime
    FieldElem crt(const std::vector<std::pair<FieldElem, IdealL>>& congruences) const {
        if (congruences.empty()) return zero();
        FieldElem r = congruences[0].first;
        FieldElem m = congruences[0].second.generator();
        r = reduce_mod(r, m);
        for (std::size_t i = 1; i < congruences.size(); ++i) {
            const FieldElem& r2 = congruences[i].first;
            const FieldElem& m2 = congruences[i].second.generator();
            if (abs(num(gcd(m, m2).norm())) != 1)
                throw NonCoprimeIdeal("crt: moduli not coprime");
            // x = r + m*s with  m*s + m2*w = r2 - r
            FieldElem diff = r2 - r;
            IMat M(2, IVec(4, 0));
            auto fill = [&](const FieldElem& e, std::size_t c) {
                FieldElem ew = e * omega();
                M[0][c] = e.x(); M[1][c] = e.y();
                M[0][c + 1] = ew.x(); M[1][c + 1] = ew.y();
            };
            fill(m, 0);
            fill(m2, 2);
            auto sol = solve_int(M, {diff.x(), diff.y()});
            if (!sol) throw NonCoprimeIdeal("crt: incompatible congruences");
            FieldElem s = elem((*sol)[0], (*sol)[1]);
            r = r + m * s;
            m = m * m2;
            r = reduce_mod(r, m);
        }
        return r;
    }

    // all x in O_L with x = r mod (m) and sigma_i(x)^2 < sigma_i(bound), both
    // embeddings; complete by exact lattice enumeration
    std::vector<FieldElem> enumerate_totally_bounded(const FieldElem& bound, const FieldElem& r,
                                                     const IdealL& m) const {
        if (!bound.is_totally_positive())
            throw Error("enumerate_totally_bounded: bound must be totally positive");
        const FieldElem g = m.generator();
        const FieldElem b1 = g, b2 = g * omega();
        // sigma_1(x)^2 + sigma_2(x)^2 = Tr(x^2) <= Tr(bound) is an exact superset
        QMat G(2, QVec(2, 0));
        const FieldElem bs[2] = {b1, b2};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) G[i][j] = (bs[i] * bs[j]).trace();
        // coordinates of r in the basis (b1, b2)
        Rational det = Rational(b1.x()) * Rational(b2.y()) - Rational(b1.y()) * Rational(b2.x());
        Rational rx(r.x()), ry(r.y());
        rx /= r.den(); ry /= r.den();
        QVec center = {(rx * b2.y() - ry * b2.x()) / det, (ry * b1.x() - rx * b1.y()) / det};
        std::vector<FieldElem> out;
        enumerate_quadform(G, center, bound.trace(), [&](const IVec& c) {
            FieldElem x = r + b1 * integer(c[0]) + b2 * integer(c[1]);
            FieldElem rem = bound - x * x;
            if (rem.sign_at(1) > 0 && rem.sign_at(2) > 0) out.push_back(x);
        });
        std::sort(out.begin(), out.end(), [](const FieldElem& a, const FieldElem& b) {
            return lex_less(a, b);
        });
        return out;
    }

private:
    friend class FieldElem;

    IMat modulus_lattice(const FieldElem& m) const {
        if (m.is_zero() || !m.is_integral()) throw Error("modulus must be a nonzero integer of L");
        FieldElem mw = m * omega();
        IMat H = hnf_rows({{m.x(), m.y()}, {mw.x(), mw.y()}});
        if (H.size() != 2) throw Error("degenerate modulus lattice");
        return H;
    }

    // canonical generator of the rank-2 sublattice given by HNF rows (a principal
    // ideal since h_L = 1); certified search ball
    FieldElem lattice_generator(const IMat& H) const {
        if (H.size() != 2) throw Error("lattice_generator: rank < 2");
        Integer N = abs(H[0][0] * H[1][1] - H[0][1] * H[1][0]);
        FieldElem b1 = elem(H[0][0], H[0][1]), b2 = elem(H[1][0], H[1][1]);
        Rational bound = Rational(N) * ((eps_ * eps_).trace() + 2);
        QMat G(2, QVec(2, 0));
        const FieldElem bs[2] = {b1, b2};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) G[i][j] = (bs[i] * bs[j]).trace();
        std::optional<FieldElem> found;
        enumerate_quadform(G, {Rational(0), Rational(0)}, bound, [&](const IVec& c) {
            if (found) return;
            FieldElem v = b1 * integer(c[0]) + b2 * integer(c[1]);
            if (!v.is_zero() && abs(num(v.norm())) == N) found = v;
        });
        if (!found) throw Error("lattice_generator: no generator in certified ball");
        return canonical_tp_generator(*found);
    }

    void compute_fundamental_unit() {
        // continued fraction of omega
        Integer P = omega_half_ ? 1 : 0;
        Integer Q = omega_half_ ? 2 : 1;
        Integer s = isqrt_floor(D_);
        Integer h0 = 1, hm = 0, k0 = 0, km = 1;  // h_{-1}, h_{-2}, k_{-1}, k_{-2}
        for (int iter = 0; iter < 100000; ++iter) {
            Integer a = Q > 0 ? floor_div(P + s, Q) : -floor_div(P + s, -Q) - 1;
            Integer h = a * h0 + hm, k = a * k0 + km;
            hm = h0; h0 = h; km = k0; k0 = k;
            FieldElem u = elem(-h, k);  // k*omega - h
            if (abs(num(u.norm())) == 1 && !u.is_rational()) {
                // normalize: sigma_1(eps) > 1
                if ((one() - u * u).sign_at(1) > 0) u = u.conj() * integer(num(u.norm()) > 0 ? 1 : -1);
                if (u.sign_at(1) < 0) u = -u;
                eps_ = u;
                eps_inv_ = u.conj() * integer(num(u.norm()) > 0 ? 1 : -1);
                if (!(eps_ * eps_inv_).is_one()) throw Error("unit inverse mismatch");
                return;
            }
            P = a * Q - P;
            Q = (D_ - P * P) / Q;
        }
        throw SearchBudgetExceeded("fundamental unit: continued fraction did not terminate");
    }

    void verify_narrow_class_number_one() {
        if (num(eps_.norm()) != -1)
            throw HypothesisViolation("strict class number 1 requires a unit of norm -1");
        // h_L = 1: every prime below the Minkowski bound is principal
        Integer mk = isqrt_floor(disc_) / 2 + 1;
        for (Integer q = 2; q <= mk; ++q) {
            if (!is_probable_prime(q)) continue;
            try {
                factor_rational_prime(q);  // throws if a generator is missing
            } catch (const Error&) {
                throw HypothesisViolation("class number of L is not 1");
            }
        }
    }

    Integer inv_mod(const Integer& a, const Integer& q) const { return powmod(a, q - 2, q); }

    std::vector<Integer> omega_roots_mod(const Integer& q, SplitType st) const {
        // roots of the minimal polynomial of omega mod q
        std::vector<Integer> roots;
        if (q == 2) {
            if (st == SplitType::split) return {0, 1};
            // ramified dyadic: x^2 - D, root = D mod 2
            return {mod_floor(D_, 2)};
        }
        if (st == SplitType::ramified) {
            // double root: x = 1/2 for the half-omega polynomial, x = 0 otherwise
            if (omega_half_) return {(q + 1) / 2};
            return {mod_floor(D_, q)};
        }
        // split: sqrt of D mod q
        Integer sd = sqrt_mod_prime(mod_floor(D_, q), q);
        if (omega_half_) {
            Integer i2 = inv_mod(2, q);
            roots = {mod_floor((1 + sd) * i2, q), mod_floor((1 - sd) * i2, q)};
        } else {
            roots = {sd, mod_floor(-sd, q)};
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }

public:
    // Tonelli-Shanks square root mod an odd prime; input must be a residue
    static Integer sqrt_mod_prime(const Integer& a0, const Integer& q) {
        Integer a = mod_floor(a0, q);
        if (a == 0) return 0;
        if (powmod(a, (q - 1) / 2, q) != 1) throw Error("sqrt_mod_prime: non-residue");
        if (q % 4 == 3) return powmod(a, (q + 1) / 4, q);
        Integer t = q - 1;
        unsigned s = 0;
        while (t % 2 == 0) { t /= 2; ++s; }
        Integer z = 2;
        while (powmod(z, (q - 1) / 2, q) == 1) ++z;
        unsigned m = s;
        Integer c = powmod(z, t, q), r = powmod(a, (t + 1) / 2, q), u = powmod(a, t, q);
        while (u != 1) {
            Integer u2 = u;
            unsigned i = 0;
            while (u2 != 1) { u2 = u2 * u2 % q; ++i; }
            Integer b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b % q;
            r = r * b % q;
            c = b * b % q;
            u = u * c % q;
            m = i;
        }
        return r;
    }

private:
    Integer D_, disc_;
    bool omega_half_ = false;
    Integer om_c0_, om_c1_, om_tr_, om_n_;
    FieldElem eps_, eps_inv_;
};

// ---- FieldElem methods needing field internals -------------------------

inline FieldElem FieldElem::operator*(const FieldElem& o) const {
    const RealQuadraticField* F = F_ ? F_ : o.F_;
    Integer x = x_ * o.x_ + y_ * o.y_ * F->omega_sq_const();
    Integer y = x_ * o.y_ + y_ * o.x_ + y_ * o.y_ * F->omega_sq_lin();
    return FieldElem(F, std::move(x), std::move(y), den_ * o.den_);
}

inline FieldElem FieldElem::operator/(const FieldElem& o) const {
    Rational n = o.norm();
    if (n == 0) throw Error("division by zero");
    FieldElem t = *this * o.conj();
    Integer nn = cmcoincide::num(n), nd = cmcoincide::den(n);
    return FieldElem(F_ ? F_ : o.F_, t.x() * nd, t.y() * nd, t.den() * nn);
}

inline FieldElem FieldElem::conj() const {
    if (!F_) return *this;
    return FieldElem(F_, x_ + y_ * F_->omega_trace(), -y_, den_);
}

inline Rational FieldElem::norm() const {
    if (!F_) return Rational(x_) / Rational(den_ * den_);
    Integer n = x_ * x_ + x_ * y_ * F_->omega_trace() + y_ * y_ * F_->omega_norm();
    return Rational(n) / Rational(den_ * den_);
}

inline Rational FieldElem::trace() const {
    if (!F_) return Rational(2 * x_) / Rational(den_);
    return Rational(2 * x_ + y_ * F_->omega_trace()) / Rational(den_);
}

inline int FieldElem::sign_at(int emb) const {
    // value*den = (t + s*sqrt(D))/2 in the half-omega case, t + s*sqrt(D) otherwise
    Integer t, s;
    if (F_->omega_is_half_type()) {
        t = 2 * x_ + y_;
        s = y_;
    } else {
        t = x_;
        s = y_;
    }
    if (emb == 2) s = -s;
    if (t == 0 && s == 0) return 0;
    if (t >= 0 && s >= 0) return 1;
    if (t <= 0 && s <= 0) return -1;
    Integer cmp = t * t - s * s * F_->D();
    int ts = t > 0 ? 1 : -1;
    if (cmp == 0) return 0;
    return cmp > 0 ? ts : -ts;
}

inline IdealL IdealL::principal(const RealQuadraticField& F, const FieldElem& g) {
    IdealL I;
    I.gen_ = F.canonical_tp_generator(g);
    return I;
}

inline IdealL IdealL::operator*(const IdealL& o) const {
    return IdealL::principal(*gen_.field(), gen_ * o.gen_);
}

}  // namespace cmcoincide
