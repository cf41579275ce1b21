#pragma once

#include <optional>
#include <vector>

#include "cmcoincide/base_field.hpp"

namespace cmcoincide {

// The residue field O_L / P for a prime P of odd or even residue
// characteristic. f = 1: GF(p) via omega -> root; f = 2: GF(p^2) = F_p[w]
// with w satisfying the minimal polynomial of omega.
class ResidueField {
public:
    struct El {
        Integer a, b;  // a + b*w
        bool operator==(const El& o) const { return a == o.a && b == o.b; }
    };

    ResidueField(const RealQuadraticField& F, const PrimeOfL& P)
        : F_(&F), P_(P), p_(P.p), f_(P.f), q_(P.norm_abs()) {
        c0_ = mod_floor(F.omega_sq_const(), p_);
        c1_ = mod_floor(F.omega_sq_lin(), p_);
    }

    const Integer& size() const { return q_; }
    const Integer& characteristic() const { return p_; }

    El zero() const { return {0, 0}; }
    El one() const { return {1, 0}; }
    bool is_zero(const El& e) const { return e.a == 0 && e.b == 0; }

    El reduce(const FieldElem& e) const {
        Integer d = mod_floor(e.den(), p_);
        if (d == 0) throw Error("ResidueField: denominator not invertible");
        Integer di = powmod(d, p_ - 2, p_);
        if (f_ == 1) {
            Integer v = mod_floor(e.x() + e.y() * *P_.omega_root, p_);
            return {v * di % p_, 0};
        }
        return {mod_floor(e.x(), p_) * di % p_, mod_floor(e.y(), p_) * di % p_};
    }

    FieldElem lift(const El& e) const {
        if (f_ == 1) return F_->elem(e.a, 0);
        return F_->elem(e.a, e.b);
    }

    El add(const El& x, const El& y) const { return {(x.a + y.a) % p_, (x.b + y.b) % p_}; }
    El sub(const El& x, const El& y) const {
        return {mod_floor(x.a - y.a, p_), mod_floor(x.b - y.b, p_)};
    }
    El mul(const El& x, const El& y) const {
        if (f_ == 1) return {x.a * y.a % p_, 0};
        // (a1 + b1 w)(a2 + b2 w),  w^2 = c0 + c1 w
        Integer bb = x.b * y.b % p_;
        Integer a = (x.a * y.a + bb * c0_) % p_;
        Integer b = (x.a * y.b + x.b * y.a + bb * c1_) % p_;
        return {a, b};
    }
    El pow(El x, Integer e) const {
        El r = one();
        while (e > 0) {
            if (e % 2 == 1) r = mul(r, x);
            x = mul(x, x);
            e /= 2;
        }
        return r;
    }
    El inv(const El& x) const {
        if (is_zero(x)) throw Error("ResidueField: inverse of zero");
        return pow(x, q_ - 2);
    }
    El neg(const El& x) const { return {mod_floor(-x.a, p_), mod_floor(-x.b, p_)}; }

    // Euler criterion; requires odd q
    int legendre(const El& x) const {
        if (is_zero(x)) return 0;
        El r = pow(x, (q_ - 1) / 2);
        return r == one() ? 1 : -1;
    }

    // Tonelli-Shanks in the cyclic group of order q - 1 (odd q)
    std::optional<El> sqrt(const El& x) const {
        if (is_zero(x)) return zero();
        if (legendre(x) != 1) return std::nullopt;
        Integer t = q_ - 1;
        unsigned s = 0;
        while (t % 2 == 0) { t /= 2; ++s; }
        El z = nonresidue();
        unsigned m = s;
        El c = pow(z, t), r = pow(x, (t + 1) / 2), u = pow(x, t);
        while (!(u == one())) {
            El u2 = u;
            unsigned i = 0;
            while (!(u2 == one())) { u2 = mul(u2, u2); ++i; }
            El b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j) b = mul(b, b);
            r = mul(r, b);
            c = mul(b, b);
            u = mul(u, c);
            m = i;
        }
        return r;
    }

    // enumerate all field elements (small fields only)
    std::vector<El> all_elements() const {
        std::vector<El> out;
        if (f_ == 1) {
            for (Integer a = 0; a < p_; ++a) out.push_back({a, 0});
        } else {
            for (Integer a = 0; a < p_; ++a)
                for (Integer b = 0; b < p_; ++b) out.push_back({a, b});
        }
        return out;
    }

private:
    El nonresidue() const {
        for (Integer k = 2; ; ++k) {
            El e = f_ == 1 ? El{k % p_, 0} : El{k % p_, (k * 7 + 1) % p_};
            if (!is_zero(e) && legendre(e) == -1) return e;
        }
    }

    const RealQuadraticField* F_;
    PrimeOfL P_;
    Integer p_, c0_, c1_;
    int f_;
    Integer q_;
};

// The finite ring O_L / (m) for a nonzero integral modulus, with canonical
// box representatives from the HNF of the modulus lattice. Used for the
// dyadic Hilbert symbol search and small complete enumerations.
class QuotientRing {
public:
    QuotientRing(const RealQuadraticField& F, const FieldElem& modulus) : F_(&F), m_(modulus) {
        FieldElem mw = m_ * F.omega();
        H_ = hnf_rows({{m_.x(), m_.y()}, {mw.x(), mw.y()}});
        if (H_.size() != 2) throw Error("QuotientRing: degenerate modulus");
    }

    Integer size() const { return H_[0][0] * H_[1][1]; }

    FieldElem reduce(const FieldElem& e) const {
        if (!e.is_integral()) throw Error("QuotientRing: non-integral element");
        Integer x = e.x(), y = e.y();
        Integer k = floor_div(x, H_[0][0]);
        x -= k * H_[0][0];
        y -= k * H_[0][1];
        y = mod_floor(y, H_[1][1]);
        return F_->elem(x, y);
    }

    Integer index_of(const FieldElem& reduced) const {
        return reduced.x() * H_[1][1] + reduced.y();
    }

    std::vector<FieldElem> all_elements() const {
        std::vector<FieldElem> out;
        for (Integer x = 0; x < H_[0][0]; ++x)
            for (Integer y = 0; y < H_[1][1]; ++y) out.push_back(F_->elem(x, y));
        return out;
    }

    FieldElem mul(const FieldElem& a, const FieldElem& b) const { return reduce(a * b); }
    FieldElem add(const FieldElem& a, const FieldElem& b) const { return reduce(a + b); }

private:
    const RealQuadraticField* F_;
    FieldElem m_;
    IMat H_;
};

}  // namespace cmcoincide
