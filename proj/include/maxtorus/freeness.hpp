#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/lattice.hpp"
#include "maxtorus/polytope.hpp"
#include "maxtorus/weights.hpp"

// Circle subgroups G(a) of T^k, intersection tests against vertex isotropy
// tori, and the free rank / free dimension computations with searchable
// certificates.
//
// Vertex sufficiency: the isotropy of any face is a submatrix of some
// vertex's isotropy matrix, so every freeness test quantifies over vertices
// only. The certificate searches enumerate primitive candidate vectors in a
// fixed order - single coordinates, then two-term sums e_i + e_j and
// e_i - e_j, then the full lexicographic sweep at the current bound - so
// certificates come out human-readable and runs are reproducible.

namespace maxtorus {

/// A circle subgroup G(a) of T^k, parametrized by a primitive integer vector
/// with canonical sign (first nonzero entry positive; G(a) = G(-a)).
class CircleSubgroup {
public:
    explicit CircleSubgroup(IntVector a) : a_(canonical_sign(std::move(a))) {
        if (a_.empty() || is_zero_vector(a_))
            throw input_error("circle subgroup: zero vector");
        if (!is_primitive(a_))
            throw input_error("circle subgroup: weights not relatively prime: " + vector_to_string(a_));
    }

    const IntVector& components() const { return a_; }
    std::size_t ambient_rank() const { return a_.size(); }

    bool operator==(const CircleSubgroup& rhs) const { return a_ == rhs.a_; }
    bool operator<(const CircleSubgroup& rhs) const { return lex_less(a_, rhs.a_); }

private:
    IntVector a_;
};

/// G(a) meets the subtorus spanned by the rows of B trivially iff stacking a
/// onto B is again saturated. B itself must be saturated (precondition_error
/// otherwise). With r = k-1 this is the classical criterion: the full k x k
/// matrix has determinant +-1.
inline bool trivial_intersection(const CircleSubgroup& a, const IntegerMatrix& b) {
    if (b.rows() > b.cols() || !detail::rows_saturated(b))
        throw precondition_error("trivial_intersection: B is not a saturated basis");
    if (b.cols() != a.ambient_rank())
        throw dimension_error("trivial_intersection: ambient rank mismatch");
    return detail::rows_saturated(b.with_row_appended(a.components()));
}

namespace detail {

inline std::vector<IntegerMatrix> vertex_isotropies(const WeightedOrbitSpace& w) {
    std::vector<IntegerMatrix> out;
    for (const FaceSelector& v : enumerate_vertices(w.polytope()))
        out.push_back(isotropy_matrix(w, v));
    return out;
}

}  // namespace detail

/// True iff G(a) acts freely: it meets every vertex isotropy torus trivially.
/// Each vertex isotropy matrix must be saturated (precondition_error
/// propagates from trivial_intersection otherwise).
inline bool acts_freely(const WeightedOrbitSpace& w, const CircleSubgroup& a) {
    if (a.ambient_rank() != static_cast<std::size_t>(w.torus_rank()))
        throw dimension_error("acts_freely: circle rank mismatch");
    for (const IntegerMatrix& iso : detail::vertex_isotropies(w))
        if (!trivial_intersection(a, iso)) return false;
    return true;
}

/// True iff G(a) acts almost freely (all isotropy finite): stacking a onto
/// every vertex isotropy matrix raises the rank by one.
inline bool acts_almost_freely(const WeightedOrbitSpace& w, const CircleSubgroup& a) {
    if (a.ambient_rank() != static_cast<std::size_t>(w.torus_rank()))
        throw dimension_error("acts_almost_freely: circle rank mismatch");
    for (const IntegerMatrix& iso : detail::vertex_isotropies(w)) {
        if (rank(iso.with_row_appended(a.components())) != iso.rows() + 1) return false;
    }
    return true;
}

struct VertexWitness {
    std::vector<int> vertex_facets;       // the facets meeting at the vertex
    std::string vertex_position;          // per-block description (poles share facets)
    std::vector<Int> invariant_factors;   // of (basis rows stacked over the isotropy rows)
};

struct FreenessCertificate {
    IntegerMatrix subtorus_basis;          // r x k, saturated
    std::vector<VertexWitness> witnesses;  // one per vertex
    bool exhaustive = false;               // search covered every sublattice at the bound
    int coefficient_bound = 0;             // max-norm of the basis entries searched
};

struct FreeRankResult {
    int value;
    FreenessCertificate certificate;
};

struct FreeDimensionResult {
    int value;
    FreenessCertificate certificate;
};

namespace detail {

// All canonical-sign primitive vectors of length k with max-norm <= bound,
// lexicographically sorted. Plain ints drive the odometer; entries fit easily.
// The candidate space (2*bound+1)^k is capped so oversized parameters fail
// with a clear error instead of exhausting memory.
inline std::vector<IntVector> primitive_candidates(int k, int bound) {
    double space = 1.0;
    for (int i = 0; i < k; ++i) space *= 2.0 * bound + 1.0;
    if (space > 8'000'000.0)
        throw precondition_error("candidate space (2*bound+1)^k exceeds the supported size of 8e6 (k = " +
                                 std::to_string(k) + ", bound = " + std::to_string(bound) + ")");
    std::vector<IntVector> out;
    std::vector<int> v(k, -bound);
    for (;;) {
        // canonical sign: first nonzero entry positive
        int first = 0;
        while (first < k && v[first] == 0) ++first;
        if (first < k && v[first] > 0) {
            IntVector cand(v.begin(), v.end());
            if (is_primitive(cand)) out.push_back(std::move(cand));
        }
        int i = k - 1;
        while (i >= 0 && v[i] == bound) v[i--] = -bound;
        if (i < 0) break;
        ++v[i];
    }
    return out;
}

// Search order for certificate bases: coordinate circles, then two-term
// sums/differences, then everything else at the bound in lex order.
inline std::vector<IntVector> search_order_candidates(int k, int bound) {
    std::vector<IntVector> ordered;
    auto push = [&](IntVector v) {
        for (const IntVector& seen : ordered)
            if (seen == v) return;
        ordered.push_back(std::move(v));
    };
    for (int i = 0; i < k; ++i) {
        IntVector e(k, 0);
        e[i] = 1;
        push(std::move(e));
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (int s : {1, -1}) {
                IntVector e(k, 0);
                e[i] = 1;
                e[j] = s;
                push(std::move(e));
            }
    std::vector<IntVector> rest = primitive_candidates(k, bound);
    std::vector<IntVector> head = ordered;
    for (IntVector& v : rest) {
        bool dup = false;
        for (const IntVector& seen : head)
            if (seen == v) {
                dup = true;
                break;
            }
        if (!dup) ordered.push_back(std::move(v));
    }
    return ordered;
}

// Node budget for one exhaustive depth-first pass. Passes that would exceed
// it are cut short and reported as non-exhaustive instead of stalling on
// adversarial inputs; at desk scale (k <= 6, bound <= 3) genuine refutations
// fit comfortably.
inline constexpr long kSearchNodeBudget = 4'000'000;

enum class SearchOutcome { found, refuted, budget_exhausted };

// Depth-first search for `target` candidate rows (indices strictly
// increasing) such that every prefix is saturated and clears every vertex:
// stacked rank for almost-free searches, stacked saturation for free ones.
// Visits every admissible subset once - an admissible basis sorted by
// candidate order has admissible prefixes, so pruning loses nothing.
// Per-candidate screening against single vertices is memoized lazily, so
// searches that succeed early never scan the whole candidate list.
//
// The search runs on int64 rows whenever the small-matrix guard of the
// lattice module admits every stack it will ever build (k <= 8, entries
// <= 64); otherwise it assembles exact matrices. Results are identical.
struct BasisSearch {
    const std::vector<IntVector>& candidates;
    const std::vector<IntegerMatrix>& isotropies;
    bool require_free;
    long nodes_left = kSearchNodeBudget;
    std::vector<std::size_t> picked;

    bool use_small = false;
    std::vector<std::array<long long, 8>> small_rows;           // candidate rows
    std::vector<std::pair<SmallMat, std::size_t>> small_isos;   // matrix, row count
    std::size_t k = 0;
    std::vector<signed char> level1;  // 0 unknown, 1 pass, -1 fail

    BasisSearch(const std::vector<IntVector>& cand, const std::vector<IntegerMatrix>& isos, bool free_mode,
                int max_depth)
        : candidates(cand), isotropies(isos), require_free(free_mode) {
        level1.assign(candidates.size(), 0);
        if (candidates.empty()) return;
        k = candidates.front().size();
        std::size_t max_iso_rows = 0;
        bool small = k <= 8;
        for (const IntegerMatrix& iso : isotropies) {
            max_iso_rows = std::max(max_iso_rows, iso.rows());
            small = small && small_guard(iso);
        }
        small = small && max_iso_rows + static_cast<std::size_t>(max_depth) <= 8;
        for (const IntVector& v : candidates) {
            if (!small) break;
            for (const Int& x : v) small = small && x <= 64 && x >= -64;
        }
        use_small = small;
        if (!use_small) return;
        small_rows.reserve(candidates.size());
        for (const IntVector& v : candidates) {
            std::array<long long, 8> row{};
            for (std::size_t j = 0; j < k; ++j) row[j] = v[j].get_si();
            small_rows.push_back(row);
        }
        for (const IntegerMatrix& iso : isotropies) small_isos.emplace_back(to_small(iso), iso.rows());
    }

    // stack = isotropy rows (when iso given) + picked rows (optional) + candidate row
    bool small_stack_ok(const std::pair<SmallMat, std::size_t>* iso, std::size_t cand, bool with_picked) {
        SmallMat m{};
        std::size_t r = 0;
        if (iso) {
            for (; r < iso->second; ++r) m[r] = iso->first[r];
        }
        if (with_picked)
            for (std::size_t p : picked) m[r++] = small_rows[p];
        m[r++] = small_rows[cand];
        if (r > k) return false;
        if (require_free || !iso) {  // the basis itself must be saturated in both modes
            return small_rows_saturated_raw(m, r, k);
        }
        return small_rank_raw(m, r, k) == r;
    }

    bool exact_stack_ok(const IntegerMatrix* iso, std::size_t cand, bool with_picked) {
        std::vector<IntVector> rows;
        if (iso)
            for (std::size_t r = 0; r < iso->rows(); ++r) rows.push_back(iso->row(r));
        if (with_picked)
            for (std::size_t p : picked) rows.push_back(candidates[p]);
        rows.push_back(candidates[cand]);
        IntegerMatrix m = IntegerMatrix::from_rows(rows);
        if (m.rows() > m.cols()) return false;
        if (require_free || !iso) return rows_saturated(m);
        return rank(m) == m.rows();
    }

    bool passes_level1(std::size_t cand) {
        if (level1[cand] == 0) {
            bool ok = true;
            for (std::size_t vi = 0; ok && vi < isotropies.size(); ++vi)
                ok = use_small ? small_stack_ok(&small_isos[vi], cand, false)
                               : exact_stack_ok(&isotropies[vi], cand, false);
            level1[cand] = ok ? 1 : -1;
        }
        return level1[cand] == 1;
    }

    bool admit(std::size_t cand) {
        if (!passes_level1(cand)) return false;
        bool ok = use_small ? small_stack_ok(nullptr, cand, true) : exact_stack_ok(nullptr, cand, true);
        for (std::size_t vi = 0; ok && vi < isotropies.size(); ++vi)
            ok = use_small ? small_stack_ok(&small_isos[vi], cand, true)
                           : exact_stack_ok(&isotropies[vi], cand, true);
        return ok;
    }

    SearchOutcome run(std::size_t start, int target) {
        if (static_cast<int>(picked.size()) == target) return SearchOutcome::found;
        for (std::size_t c = start; c < candidates.size(); ++c) {
            if (--nodes_left < 0) return SearchOutcome::budget_exhausted;
            if (!admit(c)) continue;
            picked.push_back(c);
            SearchOutcome sub = run(c + 1, target);
            if (sub != SearchOutcome::refuted) return sub;
            picked.pop_back();
        }
        return SearchOutcome::refuted;
    }

    std::vector<IntVector> picked_rows() const {
        std::vector<IntVector> rows;
        rows.reserve(picked.size());
        for (std::size_t p : picked) rows.push_back(candidates[p]);
        return rows;
    }
};

inline std::vector<VertexWitness> make_witnesses(const WeightedOrbitSpace& w, const IntegerMatrix& basis) {
    std::vector<VertexWitness> out;
    for (const FaceSelector& v : enumerate_vertices(w.polytope())) {
        IntegerMatrix stack = basis.stacked_with(isotropy_matrix(w, v));
        out.push_back({facets_containing(w.polytope(), v), face_position(w.polytope(), v),
                       smith_normal_form(stack).invariant_factors});
    }
    return out;
}

inline void require_valid(const WeightedOrbitSpace& w, const char* op) {
    // Rank conditions are all the searches need, so the weaker mode gates.
    ValidationReport report = validate(w, ValidationMode::orbifold);
    if (!report.verdict)
        throw validation_error(std::string(op) + ": orbit space fails validation");
}

}  // namespace detail

/// Free rank of the action: r = 2k - n, certified by a saturated r x k basis
/// whose span meets every vertex isotropy span only in 0 (so every circle in
/// the subtorus acts almost freely). The search bound grows until a
/// certificate appears; the bound actually used is recorded.
inline FreeRankResult free_rank(const WeightedOrbitSpace& w) {
    detail::require_valid(w, "free_rank");
    const int k = w.torus_rank();
    const int r = 2 * k - w.manifold_dim();  // = k - dim P
    std::vector<IntegerMatrix> isotropies = detail::vertex_isotropies(w);

    IntegerMatrix basis(0, k);
    int bound = 1;
    for (;; ++bound) {
        if (bound > 64) throw error("free_rank: certificate search exceeded bound 64");
        std::vector<IntVector> candidates = detail::search_order_candidates(k, bound);
        detail::BasisSearch search(candidates, isotropies, /*free_mode=*/false, r);
        if (search.run(0, r) == detail::SearchOutcome::found) {
            if (r > 0) basis = IntegerMatrix::from_rows(search.picked_rows());
            break;
        }
    }
    FreenessCertificate cert{basis, detail::make_witnesses(w, basis), /*exhaustive=*/true, bound};
    return {r, std::move(cert)};
}

inline constexpr int kDefaultFreeDimensionBound = 3;

/// Largest r' <= free rank admitting a saturated r' x k basis, entries
/// bounded by `bound` in max-norm, whose subtorus acts freely (every stacked
/// vertex matrix saturated). certificate.exhaustive reports whether every
/// rank above the returned one was provably refuted at this bound - i.e.
/// whether the value is the exact free dimension over bases with entries
/// <= bound. A refutation pass abandoned at the internal node budget clears
/// the flag; larger free subtori may also exist at larger bounds.
inline FreeDimensionResult free_dimension(const WeightedOrbitSpace& w, int bound = kDefaultFreeDimensionBound) {
    if (bound < 1) throw precondition_error("free_dimension: bound must be >= 1");
    detail::require_valid(w, "free_dimension");
    const int k = w.torus_rank();
    const int r = 2 * k - w.manifold_dim();
    std::vector<IntegerMatrix> isotropies = detail::vertex_isotropies(w);
    std::vector<IntVector> candidates = detail::search_order_candidates(k, bound);

    detail::BasisSearch search(candidates, isotropies, /*free_mode=*/true, r);
    bool refutations_complete = true;
    for (int target = r; target >= 0; --target) {
        search.picked.clear();
        search.nodes_left = detail::kSearchNodeBudget;
        detail::SearchOutcome outcome = search.run(0, target);
        if (outcome == detail::SearchOutcome::found) {
            IntegerMatrix basis = search.picked.empty() ? IntegerMatrix(0, k)
                                                        : IntegerMatrix::from_rows(search.picked_rows());
            FreenessCertificate cert{basis, detail::make_witnesses(w, basis), refutations_complete, bound};
            return {target, std::move(cert)};
        }
        if (outcome == detail::SearchOutcome::budget_exhausted) refutations_complete = false;
    }
    throw error("free_dimension: unreachable");  // target 0 always succeeds
}

/// The diagonal-circle construction on a normalized orbit space (m = k,
/// weights = identity; precondition_error otherwise): one circle per simplex
/// block, the sum of the standard basis vectors of that block's facets.
/// Suspension blocks contribute nothing. The list has 2k - n entries, each
/// acts freely, and jointly they span a saturated sublattice.
inline std::vector<CircleSubgroup> lemma_free_circles(const WeightedOrbitSpace& w) {
    const int k = w.torus_rank();
    if (w.facet_count() != k)
        throw precondition_error("lemma_free_circles: requires m = k (normalize first)");
    if (w.weights() != IntegerMatrix::identity(k))
        throw precondition_error("lemma_free_circles: requires identity weights (normalize first)");

    std::vector<CircleSubgroup> out;
    const BlockPolytope& p = w.polytope();
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        const Block& blk = p.blocks()[b];
        if (blk.kind != BlockKind::simplex) continue;
        IntVector a(k, 0);
        for (int i = 0; i < blk.facet_count(); ++i) a[p.facet_offset(b) + i] = 1;
        out.emplace_back(std::move(a));
    }
    return out;
}

/// Exhaustive enumeration oracle: every canonical-sign primitive vector of
/// max-norm <= max_norm that acts freely, in lexicographic order.
inline std::vector<CircleSubgroup> oracle_enumerate_free_circles(const WeightedOrbitSpace& w, int max_norm) {
    if (max_norm < 1) throw precondition_error("oracle_enumerate_free_circles: max_norm must be >= 1");
    std::vector<IntegerMatrix> isotropies = detail::vertex_isotropies(w);
    std::vector<CircleSubgroup> out;
    for (IntVector& v : detail::primitive_candidates(w.torus_rank(), max_norm)) {
        CircleSubgroup a(std::move(v));
        bool free = true;
        for (const IntegerMatrix& iso : isotropies)
            if (!trivial_intersection(a, iso)) {
                free = false;
                break;
            }
        if (free) out.push_back(std::move(a));
    }
    return out;
}

}  // namespace maxtorus
