#pragma once

#include <optional>
#include <vector>

#include "cmcoincide/zmath.hpp"

namespace cmcoincide {

using IMat = std::vector<std::vector<Integer>>;
using IVec = std::vector<Integer>;

inline IMat identity_mat(std::size_t n) {
    IMat I(n, IVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

// Row-space Hermite normal form: returns the rank many basis rows,
// pivots positive, entries above each pivot reduced into [0, pivot).
inline IMat hnf_rows(IMat A) {
    if (A.empty()) return A;
    const std::size_t n = A[0].size();
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < n && row < A.size(); ++col) {
        // gcd-reduce all entries in this column below `row` into one row
        std::size_t nz = row;
        while (nz < A.size() && A[nz][col] == 0) ++nz;
        if (nz == A.size()) continue;
        std::swap(A[row], A[nz]);
        for (std::size_t i = row + 1; i < A.size(); ++i) {
            while (A[i][col] != 0) {
                Integer q = floor_div(A[row][col], A[i][col]);
                for (std::size_t j = 0; j < n; ++j) A[row][j] -= q * A[i][j];
                std::swap(A[row], A[i]);
            }
        }
        if (A[row][col] < 0)
            for (std::size_t j = 0; j < n; ++j) A[row][j] = -A[row][j];
        // reduce entries above the pivot
        for (std::size_t i = 0; i < row; ++i) {
            Integer q = floor_div(A[i][col], A[row][col]);
            if (q != 0)
                for (std::size_t j = 0; j < n; ++j) A[i][j] -= q * A[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    A.resize(row);
    return A;
}

// Basis (as rows) of { x in Z^n : A x = 0 }, A is m x n.
inline IMat kernel_int(const IMat& A) {
    if (A.empty()) return {};
    const std::size_t m = A.size(), n = A[0].size();
    // rows of W: [ (A^T)_i | e_i ]; combinations with zero left part give kernel vectors
    IMat W(n, IVec(m + n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) W[i][j] = A[j][i];
        W[i][m + i] = 1;
    }
    IMat H = hnf_rows(std::move(W));
    IMat out;
    for (const auto& r : H) {
        bool zero = true;
        for (std::size_t j = 0; j < m; ++j)
            if (r[j] != 0) { zero = false; break; }
        if (zero) out.emplace_back(r.begin() + m, r.end());
    }
    return out;
}

// One solution of A x = b over Z, if any.
inline std::optional<IVec> solve_int(const IMat& A, const IVec& b) {
    if (A.empty()) return std::nullopt;
    const std::size_t m = A.size(), n = A[0].size();
    IMat W(n, IVec(m + n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) W[i][j] = A[j][i];
        W[i][m + i] = 1;
    }
    IMat H = hnf_rows(std::move(W));
    IVec rem = b, x(n, 0);
    for (const auto& r : H) {
        std::size_t piv = 0;
        while (piv < m && r[piv] == 0) ++piv;
        if (piv == m) break;
        if (rem[piv] % r[piv] != 0) continue;  // will fail below if truly unsolvable
        Integer q = rem[piv] / r[piv];
        if (q == 0) continue;
        for (std::size_t j = 0; j < m; ++j) rem[j] -= q * r[j];
        for (std::size_t j = 0; j < n; ++j) x[j] += q * r[m + j];
    }
    for (std::size_t j = 0; j < m; ++j)
        if (rem[j] != 0) return std::nullopt;
    return x;
}

// Smith normal form diagonal of A (m x n) together with the column transform V
// (n x n unimodular): rowspace(A) * V = rowspace(diag). The quotient
// Z^n / rowspace(A) is  (+) Z/diag_i  with coordinates x -> (x*V mod diag).
inline IVec snf_with_col_transform(IMat A, IMat& V) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    V = identity_mat(n);
    auto col_op = [&](std::size_t c1, std::size_t c2, const Integer& q) {
        // col c1 -= q * col c2
        for (std::size_t i = 0; i < A.size(); ++i) A[i][c1] -= q * A[i][c2];
        for (std::size_t i = 0; i < n; ++i) V[i][c1] -= q * V[i][c2];
    };
    auto col_swap = [&](std::size_t c1, std::size_t c2) {
        for (std::size_t i = 0; i < A.size(); ++i) std::swap(A[i][c1], A[i][c2]);
        for (std::size_t i = 0; i < n; ++i) std::swap(V[i][c1], V[i][c2]);
    };
    std::size_t k = 0;
    while (k < m && k < n) {
        // find a nonzero entry in the remaining block
        std::size_t pi = k, pj = k;
        bool found = false;
        for (std::size_t i = k; i < m && !found; ++i)
            for (std::size_t j = k; j < n && !found; ++j)
                if (A[i][j] != 0) { pi = i; pj = j; found = true; }
        if (!found) break;
        std::swap(A[k], A[pi]);
        if (pj != k) col_swap(k, pj);
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = k + 1; i < m; ++i) {
                while (A[i][k] != 0) {
                    Integer q = floor_div(A[k][k], A[i][k]);
                    for (std::size_t j = 0; j < n; ++j) A[k][j] -= q * A[i][j];
                    std::swap(A[k], A[i]);
                }
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                while (A[k][j] != 0) {
                    Integer q = floor_div(A[k][j], A[k][k]);
                    col_op(j, k, q);
                    if (A[k][j] != 0) { col_swap(k, j); again = true; }
                }
            }
        }
        // divisibility fix-up: A[k][k] must divide the rest of the block
        bool redo = false;
        for (std::size_t i = k + 1; i < m && !redo; ++i)
            for (std::size_t j = k + 1; j < n && !redo; ++j)
                if (A[i][j] % A[k][k] != 0) {
                    for (std::size_t t = 0; t < n; ++t) A[k][t] += A[i][t];
                    redo = true;
                }
        if (redo) continue;
        if (A[k][k] < 0) {
            for (std::size_t i = 0; i < A.size(); ++i) A[i][k] = -A[i][k];
            for (std::size_t i = 0; i < n; ++i) V[i][k] = -V[i][k];
        }
        ++k;
    }
    IVec diag(n, 0);
    for (std::size_t i = 0; i < k; ++i) diag[i] = A[i][i];
    return diag;
}

// Determinant by fraction-free Gaussian elimination (Bareiss).
inline Integer det_int(IMat A) {
    const std::size_t n = A.size();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (A[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && A[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(A[k], A[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
        prev = A[k][k];
    }
    return sign * A[n - 1][n - 1];
}

inline IVec mat_vec(const IMat& A, const IVec& x) {
    IVec out(A.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += A[i][j] * x[j];
    return out;
}

}  // namespace cmcoincide
