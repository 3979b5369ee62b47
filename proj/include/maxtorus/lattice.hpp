#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <cstddef>
#include <utility>
#include <vector>

#include "maxtorus/integer_matrix.hpp"

// Exact integer lattice algorithms: fraction-free determinants, Smith normal
// form with accumulated unimodular transforms, Hermite row bases, integral
// kernels and saturation tests. Everything here is deterministic; pivots are
// chosen by smallest absolute value, ties broken by lowest index, so the
// transforms (and hence every downstream report) are reproducible.

namespace maxtorus {

/// Smith normal form U*A*V = D with U, V unimodular and D diagonal,
/// d_1 | d_2 | ... | d_t, all invariant factors positive.
struct SnfResult {
    IntegerMatrix u;  // rows x rows
    IntegerMatrix v;  // cols x cols
    IntegerMatrix d;  // rows x cols, diagonal
    std::vector<Int> invariant_factors;  // t = rank entries

    std::size_t rank() const { return invariant_factors.size(); }
};

/// Exact determinant by Bareiss fraction-free elimination; intermediate
/// values stay integral. Throws dimension_error unless A is square.
inline Int determinant(const IntegerMatrix& a) {
    if (a.rows() != a.cols()) throw dimension_error("determinant: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;

    IntegerMatrix m = a;
    int sign = 1;
    Int prev = 1;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        // pivot: smallest nonzero |entry| in column t at or below row t
        std::size_t pi = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < n; ++i) {
            if (m(i, t) == 0) continue;
            Int mag = abs(m(i, t));
            if (!found || mag < best) {
                found = true;
                best = mag;
                pi = i;
            }
        }
        if (!found) return 0;
        if (pi != t) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(t, j), m(pi, j));
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < n; ++i) {
            for (std::size_t j = t + 1; j < n; ++j) {
                Int num = m(i, j) * m(t, t) - m(i, t) * m(t, j);
                m(i, j) = num / prev;  // exact by the Bareiss identity
            }
            m(i, t) = 0;
        }
        prev = m(t, t);
    }
    return sign * m(n - 1, n - 1);
}

namespace detail {
inline bool small_guard(const IntegerMatrix& a);
inline std::size_t small_rank(const IntegerMatrix& a);
}  // namespace detail

/// Rank over Q, by fraction-free elimination (fixed-width fast path for
/// small matrices, exact fallback otherwise).
inline std::size_t rank(const IntegerMatrix& a) {
    if (a.rows() > 0 && a.cols() > 0 && detail::small_guard(a)) return detail::small_rank(a);
    IntegerMatrix m = a;
    const std::size_t r = m.rows(), c = m.cols();
    std::size_t rk = 0;
    Int prev = 1;
    for (std::size_t col = 0; col < c && rk < r; ++col) {
        std::size_t pi = rk;
        bool found = false;
        Int best;
        for (std::size_t i = rk; i < r; ++i) {
            if (m(i, col) == 0) continue;
            Int mag = abs(m(i, col));
            if (!found || mag < best) {
                found = true;
                best = mag;
                pi = i;
            }
        }
        if (!found) continue;
        if (pi != rk)
            for (std::size_t j = 0; j < c; ++j) std::swap(m(rk, j), m(pi, j));
        for (std::size_t i = rk + 1; i < r; ++i) {
            for (std::size_t j = col + 1; j < c; ++j)
                m(i, j) = (m(i, j) * m(rk, col) - m(i, col) * m(rk, j)) / prev;
            m(i, col) = 0;
        }
        prev = m(rk, col);
        ++rk;
    }
    return rk;
}

namespace detail {

// Elementary operations applied to the working matrix and mirrored into the
// accumulated transform, keeping U*A*V = D an invariant of the elimination.
struct SnfWorkspace {
    IntegerMatrix d, u, v;

    void swap_rows(std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t j = 0; j < d.cols(); ++j) std::swap(d(x, j), d(y, j));
        for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(x, j), u(y, j));
    }
    void swap_cols(std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t i = 0; i < d.rows(); ++i) std::swap(d(i, x), d(i, y));
        for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, x), v(i, y));
    }
    // row_dst -= q * row_src
    void reduce_row(std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < d.cols(); ++j) d(dst, j) -= q * d(src, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u(dst, j) -= q * u(src, j);
    }
    // col_dst -= q * col_src
    void reduce_col(std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < d.rows(); ++i) d(i, dst) -= q * d(i, src);
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, dst) -= q * v(i, src);
    }
    void negate_col(std::size_t x) {
        for (std::size_t i = 0; i < d.rows(); ++i) d(i, x) = -d(i, x);
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, x) = -v(i, x);
    }
};

}  // namespace detail

inline SnfResult smith_normal_form(const IntegerMatrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    detail::SnfWorkspace w{a, IntegerMatrix::identity(r), IntegerMatrix::identity(c)};

    const std::size_t steps = std::min(r, c);
    std::size_t t = 0;
    while (t < steps) {
        // pivot: smallest nonzero |entry| of the trailing submatrix,
        // ties broken by lowest row, then lowest column
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                if (w.d(i, j) == 0) continue;
                Int mag = abs(w.d(i, j));
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        for (bool clean = false; !clean;) {
            clean = true;
            // clear column t below the pivot; a nonzero remainder is strictly
            // smaller in magnitude and becomes the new pivot
            for (std::size_t i = t + 1; i < r; ++i) {
                if (w.d(i, t) == 0) continue;
                w.reduce_row(i, t, Int(w.d(i, t) / w.d(t, t)));
                if (w.d(i, t) != 0) {
                    w.swap_rows(t, i);
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            // clear row t right of the pivot
            for (std::size_t j = t + 1; j < c; ++j) {
                if (w.d(t, j) == 0) continue;
                w.reduce_col(j, t, Int(w.d(t, j) / w.d(t, t)));
                if (w.d(t, j) != 0) {
                    w.swap_cols(t, j);
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            // divisibility pass: the pivot must divide the whole trailing
            // submatrix; folding an offending row into row t restarts the
            // elimination with a strictly smaller eventual pivot
            for (std::size_t i = t + 1; i < r && clean; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (w.d(i, j) % w.d(t, t) != 0) {
                        w.reduce_row(t, i, Int(-1));
                        clean = false;
                        break;
                    }
        }
        ++t;
    }

    // positive invariant factors; signs are absorbed into V
    for (std::size_t i = 0; i < steps; ++i)
        if (w.d(i, i) < 0) w.negate_col(i);

    SnfResult res;
    res.invariant_factors.reserve(t);
    for (std::size_t i = 0; i < steps; ++i)
        if (w.d(i, i) != 0) res.invariant_factors.push_back(w.d(i, i));
    res.u = std::move(w.u);
    res.v = std::move(w.v);
    res.d = std::move(w.d);
    return res;
}

/// Unique Hermite-style row basis for the lattice spanned by the rows of A:
/// row echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot). Zero rows are dropped, so the result has rank(A) rows.
inline IntegerMatrix hermite_row_basis(const IntegerMatrix& a) {
    IntegerMatrix h = a;
    const std::size_t r = h.rows(), c = h.cols();
    std::size_t pr = 0;  // next pivot row
    auto reduce_row = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < c; ++j) h(dst, j) -= q * h(src, j);
    };
    for (std::size_t col = 0; col < c && pr < r; ++col) {
        // Euclid on the entries of this column at or below pr
        for (;;) {
            std::size_t pi = pr;
            bool found = false;
            Int best;
            for (std::size_t i = pr; i < r; ++i) {
                if (h(i, col) == 0) continue;
                Int mag = abs(h(i, col));
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    pi = i;
                }
            }
            if (!found) break;
            if (pi != pr)
                for (std::size_t j = 0; j < c; ++j) std::swap(h(pr, j), h(pi, j));
            bool done = true;
            for (std::size_t i = pr + 1; i < r; ++i) {
                if (h(i, col) == 0) continue;
                reduce_row(i, pr, Int(h(i, col) / h(pr, col)));
                if (h(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (h(pr, col) == 0) continue;
        if (h(pr, col) < 0)
            for (std::size_t j = 0; j < c; ++j) h(pr, j) = -h(pr, j);
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < pr; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(pr, col).get_mpz_t());
            reduce_row(i, pr, q);
        }
        ++pr;
    }
    IntegerMatrix out(pr, c);
    for (std::size_t i = 0; i < pr; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = h(i, j);
    return out;
}

/// Basis of the integral kernel {x in Z^c : A x = 0}, returned as the rows of
/// a (c - rank) x c matrix in Hermite-canonical form. The basis is saturated:
/// it spans the full kernel sublattice, not a finite-index subgroup.
inline IntegerMatrix kernel_basis(const IntegerMatrix& a) {
    SnfResult snf = smith_normal_form(a);
    const std::size_t c = a.cols(), t = snf.rank();
    // U A V = D kills the last c - t columns of V exactly
    IntegerMatrix raw(c - t, c);
    for (std::size_t j = t; j < c; ++j)
        for (std::size_t i = 0; i < c; ++i) raw(j - t, i) = snf.v(i, j);
    return hermite_row_basis(raw);
}

namespace detail {

// Fixed-width fast path for the hot rank/saturation checks in the freeness
// searches. Guard: at most 8x8 with entries bounded by 64 in magnitude, so
// every minor obeys |det| <= (sqrt(8)*64)^8 < 2^61 (Hadamard) and the Bareiss
// recurrence stays inside __int128. Anything outside the guard takes the
// exact GMP route.

inline bool small_guard(const IntegerMatrix& a) {
    if (a.rows() > 8 || a.cols() > 8) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Int& x = a(i, j);
            if (x > 64 || x < -64) return false;
        }
    return true;
}

using SmallMat = std::array<std::array<long long, 8>, 8>;

inline SmallMat to_small(const IntegerMatrix& a) {
    SmallMat m{};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).get_si();
    return m;
}

// determinant of the rows x rows submatrix on the given columns
inline long long small_det(const SmallMat& a, std::size_t rows, const std::array<int, 8>& cols) {
    __int128 m[8][8];
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j) m[i][j] = a[i][cols[j]];
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t t = 0; t + 1 < rows; ++t) {
        std::size_t pivot = t;
        while (pivot < rows && m[pivot][t] == 0) ++pivot;
        if (pivot == rows) return 0;
        if (pivot != t) {
            for (std::size_t j = t; j < rows; ++j) std::swap(m[t][j], m[pivot][j]);
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < rows; ++i) {
            for (std::size_t j = t + 1; j < rows; ++j) m[i][j] = (m[i][j] * m[t][t] - m[i][t] * m[t][j]) / prev;
            m[i][t] = 0;
        }
        prev = m[t][t];
    }
    return rows == 0 ? 1 : static_cast<long long>(sign * m[rows - 1][rows - 1]);
}

inline std::size_t small_rank_raw(const SmallMat& raw, std::size_t rows, std::size_t cols) {
    __int128 m[8][8];
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = raw[i][j];
    std::size_t rk = 0;
    __int128 prev = 1;
    for (std::size_t col = 0; col < cols && rk < rows; ++col) {
        std::size_t pivot = rk;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rk)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m[rk][j], m[pivot][j]);
        for (std::size_t i = rk + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) m[i][j] = (m[i][j] * m[rk][col] - m[i][col] * m[rk][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[rk][col];
        ++rk;
    }
    return rk;
}

inline std::size_t small_rank(const IntegerMatrix& a) { return small_rank_raw(to_small(a), a.rows(), a.cols()); }

// saturation through maximal minors: full rank with minor gcd 1
inline bool small_rows_saturated_raw(const SmallMat& m, std::size_t r, std::size_t c) {
    std::array<int, 8> cols{};
    for (std::size_t i = 0; i < r; ++i) cols[i] = static_cast<int>(i);
    long long g = 0;
    for (;;) {
        long long d = small_det(m, r, cols);
        if (d != 0) {
            g = std::gcd(g, d < 0 ? -d : d);
            if (g == 1) return true;
        }
        // next column combination
        int i = static_cast<int>(r) - 1;
        while (i >= 0 && cols[i] == static_cast<int>(c) - static_cast<int>(r) + i) --i;
        if (i < 0) break;
        ++cols[i];
        for (int j = i + 1; j < static_cast<int>(r); ++j) cols[j] = cols[j - 1] + 1;
    }
    return false;  // g == 0 means rank deficient, g > 1 a finite cokernel
}

inline bool small_rows_saturated(const IntegerMatrix& a) {
    return small_rows_saturated_raw(to_small(a), a.rows(), a.cols());
}

// Saturation without the r <= c shape precondition: true iff the rows are
// independent and span a direct summand of Z^c.
inline bool rows_saturated(const IntegerMatrix& a) {
    if (a.rows() == 0) return true;
    if (a.rows() > a.cols()) return false;
    if (small_guard(a)) return small_rows_saturated(a);
    SnfResult snf = smith_normal_form(a);
    if (snf.rank() != a.rows()) return false;
    for (const Int& f : snf.invariant_factors)
        if (f != 1) return false;
    return true;
}

}  // namespace detail

/// True iff the r rows extend to a basis of Z^c: full rank and every
/// invariant factor equal to 1. Requires r <= c.
inline bool is_saturated(const IntegerMatrix& a) {
    if (a.rows() > a.cols())
        throw dimension_error("is_saturated: more rows than columns");
    return detail::rows_saturated(a);
}

}  // namespace maxtorus
