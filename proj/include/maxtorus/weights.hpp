#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/lattice.hpp"
#include "maxtorus/polytope.hpp"

// The weighted orbit space: the quotient polytope together with one primitive
// weight vector per facet (the circle isotropy of that facet's preimage) and
// the rank k of the acting torus. Weight vectors are stored as the rows of an
// m x k matrix; the characteristic map Z^m -> Z^k is its transpose. This row
// orientation is fixed globally.

namespace maxtorus {

enum class ValidationMode { manifold, orbifold };

inline const char* to_string(ValidationMode m) {
    return m == ValidationMode::manifold ? "manifold" : "orbifold";
}

class WeightedOrbitSpace {
public:
    /// Structural requirements only (weights shape must match the polytope and
    /// declared rank; k >= 1). The torus-action axioms are checked by
    /// validate(), not here, so invalid candidate spaces can be represented
    /// and reported on.
    WeightedOrbitSpace(BlockPolytope polytope, int torus_rank, IntegerMatrix weights)
        : polytope_(std::move(polytope)), torus_rank_(torus_rank), weights_(std::move(weights)) {
        if (torus_rank_ < 1) throw input_error("orbit space: torus rank must be positive");
        if (weights_.rows() != static_cast<std::size_t>(polytope_.facet_count()))
            throw input_error("orbit space: weight row count " + std::to_string(weights_.rows()) +
                              " does not match facet count " + std::to_string(polytope_.facet_count()));
        if (weights_.cols() != static_cast<std::size_t>(torus_rank_))
            throw input_error("orbit space: weight row length " + std::to_string(weights_.cols()) +
                              " does not match torus rank " + std::to_string(torus_rank_));
    }

    const BlockPolytope& polytope() const { return polytope_; }
    int torus_rank() const { return torus_rank_; }                    // k
    const IntegerMatrix& weights() const { return weights_; }         // m x k
    int facet_count() const { return polytope_.facet_count(); }       // m
    int manifold_dim() const { return polytope_.dim() + torus_rank_; }  // n

private:
    BlockPolytope polytope_;
    int torus_rank_;
    IntegerMatrix weights_;
};

struct RuleCheck {
    std::string id;
    std::string detail;
    bool passed = true;
    std::vector<std::string> offenders;
};

struct ValidationReport {
    ValidationMode mode;
    std::vector<RuleCheck> rules;
    bool verdict = false;  // conjunction of the per-rule results

    const RuleCheck* find(const std::string& id) const {
        for (const RuleCheck& r : rules)
            if (r.id == id) return &r;
        return nullptr;
    }
};

/// Basis change of the torus; |det V| = 1.
struct UnimodularChange {
    IntegerMatrix v;
};

/// Submatrix of weight rows indexed by the facets containing f, in canonical
/// facet order. Row count = codim(f); the full face yields a 0 x k matrix.
inline IntegerMatrix isotropy_matrix(const WeightedOrbitSpace& w, const FaceSelector& f) {
    std::vector<int> facets = facets_containing(w.polytope(), f);
    std::vector<std::size_t> idx(facets.begin(), facets.end());
    IntegerMatrix m = w.weights().submatrix_rows(idx);
    if (m.rows() == 0) return IntegerMatrix(0, w.weights().cols());
    return m;
}

/// Check the torus-action axioms, in order:
///   (a) primitivity  - every weight row has gcd 1
///   (b) generation   - manifold: the weight matrix is saturated of rank k;
///                      orbifold: rank k suffices
///   (c) vertex condition - every vertex isotropy matrix is saturated
///                      (manifold) or of full row rank (orbifold)
///   (d) dimension    - n = dim P + k
///   (e) facet bound  - dim P <= m <= 2 dim P
/// Failures are data (collected per rule), never exceptions.
inline ValidationReport validate(const WeightedOrbitSpace& w, ValidationMode mode = ValidationMode::manifold) {
    ValidationReport report;
    report.mode = mode;
    const IntegerMatrix& weights = w.weights();
    const int k = w.torus_rank();
    const int m = w.facet_count();
    const int dim_p = w.polytope().dim();

    RuleCheck a;
    a.id = "primitivity";
    a.detail = "every weight row has gcd 1";
    for (std::size_t j = 0; j < weights.rows(); ++j)
        if (!is_primitive(weights.row(j)))
            a.offenders.push_back("row " + std::to_string(j) + " = " + vector_to_string(weights.row(j)));
    a.passed = a.offenders.empty();
    report.rules.push_back(a);

    RuleCheck b;
    b.id = "generation";
    {
        SnfResult snf = smith_normal_form(weights);
        const std::size_t rk = snf.rank();
        if (rk != static_cast<std::size_t>(k))
            b.offenders.push_back("rank " + std::to_string(rk) + " != torus rank " + std::to_string(k));
        if (mode == ValidationMode::manifold) {
            b.detail = "weight matrix saturated of rank k";
            for (const Int& f : snf.invariant_factors)
                if (f != 1) {
                    std::ostringstream os;
                    os << "invariant factor " << f << " != 1";
                    b.offenders.push_back(os.str());
                }
        } else {
            b.detail = "weight matrix of rank k";
        }
    }
    b.passed = b.offenders.empty();
    report.rules.push_back(b);

    RuleCheck c;
    c.id = "vertex_condition";
    c.detail = mode == ValidationMode::manifold ? "vertex isotropy matrices saturated"
                                                : "vertex isotropy matrices of full row rank";
    for (const FaceSelector& v : enumerate_vertices(w.polytope())) {
        IntegerMatrix iso = isotropy_matrix(w, v);
        bool ok;
        if (mode == ValidationMode::manifold) {
            ok = detail::rows_saturated(iso);
        } else {
            ok = iso.rows() <= iso.cols() && rank(iso) == iso.rows();
        }
        if (!ok) {
            SnfResult snf = smith_normal_form(iso);
            std::ostringstream os;
            os << "vertex " << face_label(w.polytope(), v) << " (invariant factors";
            for (const Int& f : snf.invariant_factors) os << " " << f;
            os << ", rank " << snf.rank() << " of " << iso.rows() << ")";
            c.offenders.push_back(os.str());
        }
    }
    c.passed = c.offenders.empty();
    report.rules.push_back(c);

    RuleCheck d;
    d.id = "dimension";
    d.detail = "n = " + std::to_string(w.manifold_dim()) + " = dim P (" + std::to_string(dim_p) + ") + k (" +
               std::to_string(k) + ")";
    d.passed = w.manifold_dim() == dim_p + k;
    report.rules.push_back(d);

    RuleCheck e;
    e.id = "facet_bound";
    e.detail = "dim P (" + std::to_string(dim_p) + ") <= m (" + std::to_string(m) + ") <= 2 dim P (" +
               std::to_string(2 * dim_p) + ")";
    if (!(dim_p <= m && m <= 2 * dim_p))
        e.offenders.push_back("m = " + std::to_string(m) + " outside [" + std::to_string(dim_p) + ", " +
                              std::to_string(2 * dim_p) + "]");
    e.passed = e.offenders.empty();
    report.rules.push_back(e);

    report.verdict = true;
    for (const RuleCheck& r : report.rules) report.verdict = report.verdict && r.passed;
    return report;
}

/// Diagonalize a square weight matrix to the identity by a unimodular basis
/// change of the torus: returns the normalized space and V with
/// weights * V = I. Requires m = k (precondition_error otherwise) and a
/// manifold-valid, hence unimodular, weight matrix (validation_error
/// otherwise). Classification is unchanged by this operation.
inline std::pair<WeightedOrbitSpace, UnimodularChange> normalize(const WeightedOrbitSpace& w) {
    const int k = w.torus_rank();
    if (w.facet_count() != k)
        throw precondition_error("normalize: requires m = k, got m = " + std::to_string(w.facet_count()) +
                                 ", k = " + std::to_string(k));
    ValidationReport report = validate(w, ValidationMode::manifold);
    if (!report.verdict)
        throw validation_error("normalize: weight matrix is not unimodular (manifold validation failed)");

    // U W V0 = I, so W^{-1} = V0 U
    SnfResult snf = smith_normal_form(w.weights());
    IntegerMatrix v = snf.v * snf.u;
    IntegerMatrix normalized = w.weights() * v;
    if (normalized != IntegerMatrix::identity(k))
        throw error("normalize: internal inversion failure");
    return {WeightedOrbitSpace(w.polytope(), k, normalized), UnimodularChange{std::move(v)}};
}

}  // namespace maxtorus
