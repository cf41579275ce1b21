#pragma once

#include <functional>
#include <vector>

#include "cmcoincide/zlinalg.hpp"

namespace cmcoincide {

using QMat = std::vector<std::vector<Rational>>;
using QVec = std::vector<Rational>;

// Exact LLL on a positive definite rational Gram matrix.
// Returns a unimodular U with reduced Gram U G U^T (rows of U are the new
// basis in terms of the old one). delta = 3/4.
inline IMat lll_gram(QMat G) {
    const std::size_t n = G.size();
    IMat U = identity_mat(n);
    auto rowop = [&](std::size_t k, std::size_t j, const Integer& q) {
        // b_k -= q b_j
        if (q == 0) return;
        for (std::size_t t = 0; t < n; ++t) U[k][t] -= q * U[j][t];
        Rational qr(q);
        for (std::size_t t = 0; t < n; ++t) G[k][t] -= qr * G[j][t];
        for (std::size_t t = 0; t < n; ++t) G[t][k] -= qr * G[t][j];
    };
    auto rowswap = [&](std::size_t k, std::size_t j) {
        std::swap(U[k], U[j]);
        std::swap(G[k], G[j]);
        for (std::size_t t = 0; t < n; ++t) std::swap(G[t][k], G[t][j]);
    };
    // Gram-Schmidt data recomputed from G
    QMat mu(n, QVec(n, 0));
    QVec B(n, 0);
    auto gso = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            B[i] = G[i][i];
            for (std::size_t j = 0; j < i; ++j) {
                Rational m = G[i][j];
                for (std::size_t t = 0; t < j; ++t) m -= mu[i][t] * mu[j][t] * B[t];
                mu[i][j] = m / B[j];
                B[i] -= mu[i][j] * mu[i][j] * B[j];
            }
        }
    };
    gso();
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t j = k; j-- > 0;) {
            Integer q = round_rat(mu[k][j]);
            if (q != 0) { rowop(k, j, q); gso(); }
        }
        if (B[k] >= (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            rowswap(k, k - 1);
            gso();
            if (k > 1) --k;
        }
    }
    return U;
}

inline IMat inverse_unimodular(const IMat& U) {
    const std::size_t n = U.size();
    IMat inv(n, IVec(n, 0));
    for (std::size_t c = 0; c < n; ++c) {
        IVec e(n, 0);
        e[c] = 1;
        auto x = solve_int(U, e);
        if (!x) throw Error("inverse_unimodular: singular");
        for (std::size_t r = 0; r < n; ++r) inv[r][c] = (*x)[r];
    }
    return inv;
}

// Enumerate every integer vector y with Q(y + center) <= bound, where
// Q(z) = z^T G z for the positive definite rational Gram G. Exact arithmetic
// throughout; the basis is LLL-reduced internally for performance.
inline void enumerate_quadform(const QMat& G0, const QVec& center, const Rational& bound,
                               const std::function<void(const IVec&)>& cb) {
    const std::size_t n = G0.size();
    if (bound < 0) return;
    IMat U = lll_gram(G0);
    // reduced Gram
    QMat G(n, QVec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    s += Rational(U[i][a]) * G0[a][b] * Rational(U[j][b]);
            G[i][j] = s;
        }
    // old coords w = U^T z, so the affine offset in new coords is s = (U^{-1})^T center
    IMat Uinv = inverse_unimodular(U);
    QVec s(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i] += Rational(Uinv[j][i]) * center[j];
    // LDL ("q-matrix") decomposition of G
    QMat q = G;
    for (std::size_t i = 0; i < n; ++i) {
        if (q[i][i] <= 0) throw Error("enumerate_quadform: form not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) q[i][j] /= q[i][i];
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = i + 1; l < k; ++l) q[k][l] = q[l][k];
    }
    IVec y(n, 0);
    IVec x(n, 0);
    std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t lvl, const Rational& rem) {
        std::size_t i = lvl - 1;
        Rational off = s[i];
        for (std::size_t j = i + 1; j < n; ++j) off += q[i][j] * (Rational(y[j]) + s[j]);
        Rational c = -off;
        Integer y0 = round_rat(c);
        auto feas = [&](const Integer& v) {
            Rational z = Rational(v) + off;
            return q[i][i] * z * z <= rem;
        };
        auto descend = [&](const Integer& v) {
            y[i] = v;
            Rational z = Rational(v) + off;
            Rational used = q[i][i] * z * z;
            if (i == 0) {
                for (std::size_t t = 0; t < n; ++t) {
                    x[t] = 0;
                    for (std::size_t r = 0; r < n; ++r) x[t] += U[r][t] * y[r];
                }
                cb(x);
            } else {
                rec(i, rem - used);
            }
        };
        for (Integer v = y0; feas(v); ++v) descend(v);
        for (Integer v = y0 - 1; feas(v); --v) descend(v);
        y[i] = 0;
    };
    rec(n, bound);
}

}  // namespace cmcoincide
