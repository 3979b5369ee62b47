#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxtorus/freeness.hpp"
#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/lattice.hpp"
#include "maxtorus/polytope.hpp"
#include "maxtorus/weights.hpp"

// The classification pipeline: the moment-angle manifold Z_P over the block
// polytope is a product of spheres (S^{2d+1} per simplex block Delta^d,
// S^{2d} per suspension block Sigma^d), and a valid weighted orbit space
// presents its manifold as the free linear quotient of Z_P by the kernel
// torus T^{m-k} of the characteristic map Z^m -> Z^k. The intermediate
// principal-bundle lifts all factor through Z_P, so one kernel computation
// covers every case.

namespace maxtorus {

/// Sphere factors of Z_P, one per block, in block order. Every factor has
/// dimension >= 3 and the total is dim P + m.
struct SphereProduct {
    std::vector<int> factor_dims;

    int total_dim() const { return std::accumulate(factor_dims.begin(), factor_dims.end(), 0); }
    bool operator==(const SphereProduct&) const = default;
};

inline SphereProduct moment_angle_type(const BlockPolytope& p) {
    SphereProduct z;
    z.factor_dims.reserve(p.block_count());
    for (const Block& b : p.blocks())
        z.factor_dims.push_back(b.kind == BlockKind::simplex ? 2 * b.dim + 1 : 2 * b.dim);
    return z;
}

/// One recorded inequality with its operands; failures are data, not errors.
struct BoundsCheck {
    std::string name;
    long long lhs = 0;
    long long rhs = 0;
    bool holds = false;
};

struct BoundsRecord {
    std::vector<BoundsCheck> checks;
    bool all_hold = true;

    void add(std::string name, long long lhs, long long rhs) {
        checks.push_back({std::move(name), lhs, rhs, lhs <= rhs});
        all_hold = all_hold && checks.back().holds;
    }
};

/// Symmetry-rank bounds: k <= floor(2n/3) always; floor(n/2) <= k for maximal
/// actions; and at k = floor(2n/3) the quotient torus rank l = m - k is
/// bounded by 2n mod 3. No sharp l-bound is recorded below the top rank.
inline BoundsRecord check_bounds(int n, int k, const BlockPolytope& p) {
    if (n < 1 || k < 1) throw input_error("check_bounds: n and k must be positive");
    BoundsRecord rec;
    rec.add("k <= floor(2n/3)", k, (2 * n) / 3);
    rec.add("floor(n/2) <= k", n / 2, k);
    if (k == (2 * n) / 3) rec.add("l <= 2n mod 3 (at k = floor(2n/3))", p.facet_count() - k, (2 * n) % 3);
    return rec;
}

struct ClassificationReport {
    ClassificationReport(WeightedOrbitSpace in, ValidationMode validation_mode, ValidationReport report)
        : input(std::move(in)), mode(validation_mode), validation(std::move(report)) {}

    WeightedOrbitSpace input;  // echo
    ValidationMode mode;
    ValidationReport validation;
    bool maximal = false;  // a vertex exists; almost maximal inputs are treated as maximal

    // classification fields, absent when validation fails
    std::optional<SphereProduct> sphere_product;
    std::optional<int> moment_angle_dim;  // dim Z = dim P + m
    std::optional<int> quotient_rank;     // l = m - k
    std::optional<IntegerMatrix> kernel;  // Hermite-canonical l x m basis of the quotient torus
    std::optional<FreeRankResult> free_rank_result;
    std::optional<FreeDimensionResult> free_dimension_result;
    std::optional<BoundsRecord> bounds;
};

inline ClassificationReport classify(const WeightedOrbitSpace& w,
                                     ValidationMode mode = ValidationMode::manifold,
                                     int free_dim_bound = kDefaultFreeDimensionBound) {
    ClassificationReport report{w, mode, validate(w, mode)};
    report.maximal = !enumerate_vertices(w.polytope()).empty();  // block polytopes always have vertices
    if (!report.validation.verdict) return report;

    const int k = w.torus_rank();
    const int m = w.facet_count();
    const int n = w.manifold_dim();

    report.sphere_product = moment_angle_type(w.polytope());
    report.moment_angle_dim = w.polytope().dim() + m;
    report.quotient_rank = m - k;
    // rows b of the kernel satisfy b . weights = 0: the quotient torus inside T^m
    report.kernel = kernel_basis(w.weights().transposed());
    report.free_rank_result = free_rank(w);
    report.free_dimension_result = free_dimension(w, free_dim_bound);

    BoundsRecord bounds = check_bounds(n, k, w.polytope());
    bounds.add("n <= dim Z", n, *report.moment_angle_dim);
    bounds.add("dim Z <= 3n - 3k", *report.moment_angle_dim, 3 * n - 3 * k);
    report.bounds = std::move(bounds);
    return report;
}

}  // namespace maxtorus
