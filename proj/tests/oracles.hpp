#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: determinants by cofactor expansion, invariant factors by gcds of
// i x i minors, and small deterministic random generators.

#include <algorithm>
#include <random>
#include <vector>

#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/polytope.hpp"

namespace oracles {

using maxtorus::Int;
using maxtorus::IntegerMatrix;
using maxtorus::IntVector;

inline IntVector vec(const std::vector<long>& v) {
    IntVector out;
    out.reserve(v.size());
    for (long x : v) out.emplace_back(x);
    return out;
}

inline IntegerMatrix mat(const std::vector<std::vector<long>>& rows) {
    std::vector<IntVector> r;
    r.reserve(rows.size());
    for (const auto& row : rows) r.push_back(vec(row));
    return IntegerMatrix::from_rows(r);
}

/// Determinant by recursive cofactor expansion along the first row.
inline Int cofactor_determinant(const IntegerMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    if (n == 1) return a(0, 0);
    Int det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j) == 0) continue;
        IntegerMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(i - 1, cc++) = a(i, c);
            }
        }
        Int term = a(0, j) * cofactor_determinant(minor);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

namespace detail {

// gcd of all i x i minors, running over every row and column subset
inline Int minor_gcd(const IntegerMatrix& a, std::size_t order) {
    Int g = 0;

    auto for_each_subset = [](std::size_t n, std::size_t k, auto&& fn) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        if (k > n) return;
        for (;;) {
            fn(idx);
            std::size_t i = k;
            while (i > 0) {
                --i;
                if (idx[i] != i + n - k) break;
                if (i == 0) return;
            }
            if (idx[i] == i + n - k) return;
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    };

    for_each_subset(a.rows(), order, [&](const std::vector<std::size_t>& rsubset) {
        for_each_subset(a.cols(), order, [&](const std::vector<std::size_t>& csubset) {
            IntegerMatrix minor(order, order);
            for (std::size_t i = 0; i < order; ++i)
                for (std::size_t j = 0; j < order; ++j) minor(i, j) = a(rsubset[i], csubset[j]);
            g = maxtorus::gcd(g, cofactor_determinant(minor));
        });
    });
    return g < 0 ? Int(-g) : g;
}

}  // namespace detail

/// Invariant factors by gcds of minors: d_1 ... d_i = gcd of all i x i
/// minors, so d_i is the ratio of consecutive minor gcds.
inline std::vector<Int> minor_gcd_invariant_factors(const IntegerMatrix& a) {
    std::vector<Int> factors;
    Int prev = 1;
    const std::size_t maxorder = std::min(a.rows(), a.cols());
    for (std::size_t i = 1; i <= maxorder; ++i) {
        Int g = detail::minor_gcd(a, i);
        if (g == 0) break;
        factors.push_back(g / prev);
        prev = g;
    }
    return factors;
}

inline IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t max_dim = 6, long lo = -9, long hi = 9) {
    std::uniform_int_distribution<std::size_t> dims(1, max_dim);
    std::uniform_int_distribution<long> entry(lo, hi);
    IntegerMatrix m(dims(rng), dims(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    return m;
}

/// Random unimodular matrix: a product of signed permutations and unit row
/// shears. `shears` controls how far entries stray from a permutation.
inline IntegerMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int shears = 4) {
    IntegerMatrix u = IntegerMatrix::identity(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    IntegerMatrix p(n, n);
    std::uniform_int_distribution<int> sign(0, 1);
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = sign(rng) ? 1 : -1;
    u = u * p;
    if (n < 2) return u;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < shears; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        // col_j += +-1 * col_i
        int c = sign(rng) ? 1 : -1;
        for (std::size_t r = 0; r < n; ++r) u(r, j) += c * u(r, i);
    }
    return u;
}

/// Every face of the polytope (including P itself), as the product of
/// per-block faces. Test-side only; the library exposes facets and vertices.
inline std::vector<maxtorus::FaceSelector> enumerate_all_faces(const maxtorus::BlockPolytope& p) {
    using namespace maxtorus;
    std::vector<std::vector<BlockFace>> choices;
    for (const Block& blk : p.blocks()) {
        std::vector<BlockFace> c;
        c.push_back(FullFace{});
        if (blk.kind == BlockKind::simplex) {
            // nonempty proper vertex subsets of {0..d}
            const int nv = blk.dim + 1;
            for (unsigned mask = 1; mask + 1 < (1u << nv); ++mask) {
                std::vector<int> verts;
                for (int v = 0; v < nv; ++v)
                    if (mask & (1u << v)) verts.push_back(v);
                c.push_back(SimplexFace{verts});
            }
        } else {
            c.push_back(SuspensionPole{SuspensionPole::Which::north});
            c.push_back(SuspensionPole{SuspensionPole::Which::south});
            const int nv = blk.dim;  // base simplex vertices
            for (unsigned mask = 1; mask + 1 < (1u << nv); ++mask) {
                std::vector<int> verts;
                for (int v = 0; v < nv; ++v)
                    if (mask & (1u << v)) verts.push_back(v);
                c.push_back(SuspensionFace{verts});
            }
        }
        choices.push_back(std::move(c));
    }
    std::vector<FaceSelector> out;
    std::vector<std::size_t> idx(choices.size(), 0);
    for (;;) {
        std::vector<BlockFace> parts;
        for (std::size_t b = 0; b < choices.size(); ++b) parts.push_back(choices[b][idx[b]]);
        out.emplace_back(std::move(parts));
        std::size_t b = choices.size();
        while (b > 0) {
            --b;
            if (++idx[b] < choices[b].size()) break;
            idx[b] = 0;
            if (b == 0) return out;
        }
    }
}

}  // namespace oracles
