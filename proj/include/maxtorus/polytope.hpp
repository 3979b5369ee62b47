#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxtorus/errors.hpp"

// The quotient polytope P = prod Sigma^{d_i} x prod Delta^{d_j} and its face
// lattice. Faces are symbolic selectors over the block structure, never
// geometric coordinates: all downstream computation needs only the poset and
// the facet incidences.
//
// Canonical facet order: blocks in declaration order; within Delta^d the
// facets F_0..F_d where F_i omits vertex i; within Sigma^d (the suspension of
// Delta^{d-1}) the facets S_0..S_{d-1} are the suspensions of the base
// simplex's facets in the same omitted-vertex order.

namespace maxtorus {

enum class BlockKind { simplex, suspension };

inline const char* to_string(BlockKind k) {
    return k == BlockKind::simplex ? "simplex" : "suspension";
}

struct Block {
    BlockKind kind;
    int dim;

    /// Delta^d has d+1 facets, Sigma^d has d.
    int facet_count() const { return kind == BlockKind::simplex ? dim + 1 : dim; }
    bool operator==(const Block&) const = default;
};

class BlockPolytope {
public:
    explicit BlockPolytope(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty()) throw input_error("polytope: at least one block required");
        dim_ = 0;
        facet_count_ = 0;
        offsets_.reserve(blocks_.size());
        for (const Block& b : blocks_) {
            if (b.kind == BlockKind::simplex && b.dim < 1)
                throw input_error("polytope: simplex block needs dim >= 1");
            if (b.kind == BlockKind::suspension && b.dim < 2)
                throw input_error("polytope: suspension block needs dim >= 2");
            offsets_.push_back(facet_count_);
            dim_ += b.dim;
            facet_count_ += b.facet_count();
        }
    }

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    int dim() const { return dim_; }
    int facet_count() const { return facet_count_; }

    /// Global index of the first facet belonging to block `b`.
    int facet_offset(std::size_t b) const { return offsets_[b]; }

    bool operator==(const BlockPolytope& rhs) const { return blocks_ == rhs.blocks_; }

private:
    std::vector<Block> blocks_;
    std::vector<int> offsets_;
    int dim_;
    int facet_count_;
};

// ---------------------------------------------------------------------------
// Face selectors
// ---------------------------------------------------------------------------

struct FullFace {
    bool operator==(const FullFace&) const = default;
};

/// Convex hull of the vertex subset S of Delta^d; codim = d - |S| + 1.
struct SimplexFace {
    std::vector<int> vertices;  // sorted, nonempty, subset of {0..d}
    bool operator==(const SimplexFace&) const = default;
};

/// One of the two cone points of Sigma^d; codim = d.
struct SuspensionPole {
    enum class Which { north, south };
    Which which;
    bool operator==(const SuspensionPole&) const = default;
};

/// Suspension of the base-simplex face spanned by S; codim = d - |S|.
struct SuspensionFace {
    std::vector<int> vertices;  // sorted, nonempty proper subset of {0..d-1}
    bool operator==(const SuspensionFace&) const = default;
};

using BlockFace = std::variant<FullFace, SimplexFace, SuspensionPole, SuspensionFace>;

/// One BlockFace per block of the polytope; the face of P is the product.
class FaceSelector {
public:
    FaceSelector() = default;
    explicit FaceSelector(std::vector<BlockFace> parts) : parts_(std::move(parts)) {}

    static FaceSelector full(const BlockPolytope& p) {
        return FaceSelector(std::vector<BlockFace>(p.block_count(), FullFace{}));
    }

    const std::vector<BlockFace>& parts() const { return parts_; }
    bool operator==(const FaceSelector& rhs) const { return parts_ == rhs.parts_; }

private:
    std::vector<BlockFace> parts_;
};

namespace detail {

inline bool sorted_unique_in_range(const std::vector<int>& v, int lo, int hi) {
    if (!std::is_sorted(v.begin(), v.end())) return false;
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
    return v.empty() || (v.front() >= lo && v.back() <= hi);
}

inline void check_block_face(const Block& b, const BlockFace& f, std::size_t block_index) {
    auto fail = [&](const std::string& why) {
        throw face_error("block " + std::to_string(block_index) + ": " + why);
    };
    if (std::holds_alternative<FullFace>(f)) return;
    if (const auto* s = std::get_if<SimplexFace>(&f)) {
        if (b.kind != BlockKind::simplex) fail("simplex face on a non-simplex block");
        if (s->vertices.empty()) fail("empty vertex set");
        if (!sorted_unique_in_range(s->vertices, 0, b.dim)) fail("vertex set not a sorted subset of {0..d}");
        return;
    }
    if (std::holds_alternative<SuspensionPole>(f)) {
        if (b.kind != BlockKind::suspension) fail("pole on a non-suspension block");
        return;
    }
    const auto& s = std::get<SuspensionFace>(f);
    if (b.kind != BlockKind::suspension) fail("suspension face on a non-suspension block");
    if (s.vertices.empty()) fail("empty vertex set");
    if (static_cast<int>(s.vertices.size()) >= b.dim) fail("suspension face must be a proper base face");
    if (!sorted_unique_in_range(s.vertices, 0, b.dim - 1)) fail("vertex set not a sorted subset of {0..d-1}");
}

inline int block_face_codim(const Block& b, const BlockFace& f) {
    if (std::holds_alternative<FullFace>(f)) return 0;
    if (const auto* s = std::get_if<SimplexFace>(&f))
        return b.dim - static_cast<int>(s->vertices.size()) + 1;
    if (std::holds_alternative<SuspensionPole>(f)) return b.dim;
    return b.dim - static_cast<int>(std::get<SuspensionFace>(f).vertices.size());
}

}  // namespace detail

/// Throws face_error unless f is a face of p.
inline void check_face(const BlockPolytope& p, const FaceSelector& f) {
    if (f.parts().size() != p.block_count())
        throw face_error("selector has " + std::to_string(f.parts().size()) + " parts, polytope has " +
                         std::to_string(p.block_count()) + " blocks");
    for (std::size_t b = 0; b < p.block_count(); ++b)
        detail::check_block_face(p.blocks()[b], f.parts()[b], b);
}

/// Total codimension, summed over blocks.
inline int codim(const BlockPolytope& p, const FaceSelector& f) {
    check_face(p, f);
    int c = 0;
    for (std::size_t b = 0; b < p.block_count(); ++b)
        c += detail::block_face_codim(p.blocks()[b], f.parts()[b]);
    return c;
}

/// All facets of P in canonical order (see the header note).
inline std::vector<FaceSelector> enumerate_facets(const BlockPolytope& p) {
    std::vector<FaceSelector> out;
    out.reserve(p.facet_count());
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        const Block& blk = p.blocks()[b];
        const int nf = blk.facet_count();
        for (int i = 0; i < nf; ++i) {
            std::vector<BlockFace> parts(p.block_count(), FullFace{});
            if (blk.kind == BlockKind::simplex) {
                std::vector<int> verts;
                for (int v = 0; v <= blk.dim; ++v)
                    if (v != i) verts.push_back(v);
                parts[b] = SimplexFace{std::move(verts)};
            } else {
                std::vector<int> verts;
                for (int v = 0; v < blk.dim; ++v)
                    if (v != i) verts.push_back(v);
                parts[b] = SuspensionFace{std::move(verts)};
            }
            out.emplace_back(std::move(parts));
        }
    }
    return out;
}

/// All vertices: products of per-block vertices (simplex vertices are the
/// singletons, suspension vertices are the two poles). First block varies
/// slowest.
inline std::vector<FaceSelector> enumerate_vertices(const BlockPolytope& p) {
    std::vector<std::vector<BlockFace>> choices;
    choices.reserve(p.block_count());
    for (const Block& blk : p.blocks()) {
        std::vector<BlockFace> c;
        if (blk.kind == BlockKind::simplex) {
            for (int v = 0; v <= blk.dim; ++v) c.push_back(SimplexFace{{v}});
        } else {
            c.push_back(SuspensionPole{SuspensionPole::Which::north});
            c.push_back(SuspensionPole{SuspensionPole::Which::south});
        }
        choices.push_back(std::move(c));
    }
    std::vector<FaceSelector> out;
    std::vector<std::size_t> idx(choices.size(), 0);
    for (;;) {
        std::vector<BlockFace> parts;
        parts.reserve(choices.size());
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

/// Global indices of the facets containing f, sorted ascending. The size of
/// the result equals codim(p, f): a codimension-k face lies in exactly k
/// facets.
inline std::vector<int> facets_containing(const BlockPolytope& p, const FaceSelector& f) {
    check_face(p, f);
    std::vector<int> out;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        const Block& blk = p.blocks()[b];
        const int base = p.facet_offset(b);
        const BlockFace& part = f.parts()[b];
        if (std::holds_alternative<FullFace>(part)) continue;
        if (const auto* s = std::get_if<SimplexFace>(&part)) {
            // F_i omits vertex i, so it contains hull(S) iff i is not in S
            for (int i = 0; i <= blk.dim; ++i)
                if (!std::binary_search(s->vertices.begin(), s->vertices.end(), i))
                    out.push_back(base + i);
        } else if (std::holds_alternative<SuspensionPole>(part)) {
            // both poles lie in every facet of their block
            for (int i = 0; i < blk.dim; ++i) out.push_back(base + i);
        } else {
            const auto& s = std::get<SuspensionFace>(part);
            // S_j contains the suspension of hull(S) iff S avoids base vertex j
            for (int j = 0; j < blk.dim; ++j)
                if (!std::binary_search(s.vertices.begin(), s.vertices.end(), j))
                    out.push_back(base + j);
        }
    }
    return out;
}

/// One canonical pair of opposing faces per simplex block: (facet F_0 of the
/// block, vertex {0} of the block), everything else Full. The two members
/// share no facet. Suspension blocks contribute no pairs.
inline std::vector<std::pair<FaceSelector, FaceSelector>> opposing_pairs(const BlockPolytope& p) {
    std::vector<std::pair<FaceSelector, FaceSelector>> out;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        const Block& blk = p.blocks()[b];
        if (blk.kind != BlockKind::simplex) continue;
        std::vector<BlockFace> facet_parts(p.block_count(), FullFace{});
        std::vector<int> verts;
        for (int v = 1; v <= blk.dim; ++v) verts.push_back(v);
        facet_parts[b] = SimplexFace{std::move(verts)};
        std::vector<BlockFace> vertex_parts(p.block_count(), FullFace{});
        vertex_parts[b] = SimplexFace{{0}};
        out.emplace_back(FaceSelector(std::move(facet_parts)), FaceSelector(std::move(vertex_parts)));
    }
    return out;
}

/// "F0^F2" style label built from the containing facets; the full face (all
/// blocks Full) is labelled "interior". The two poles of a suspension block
/// share a label (they lie in the same facets); face_position tells them
/// apart.
inline std::string face_label(const BlockPolytope& p, const FaceSelector& f) {
    std::vector<int> facets = facets_containing(p, f);
    if (facets.empty()) return "interior";
    std::ostringstream os;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        if (i) os << "^";
        os << "F" << facets[i];
    }
    return os.str();
}

/// Structural description, one entry per block: "v0", "conv{0,1}", "N", "S",
/// "susp{0,2}" or "full", joined by " x ".
inline std::string face_position(const BlockPolytope& p, const FaceSelector& f) {
    check_face(p, f);
    auto write_set = [](std::ostringstream& os, const std::vector<int>& verts) {
        os << "{";
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (i) os << ",";
            os << verts[i];
        }
        os << "}";
    };
    std::ostringstream os;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        if (b) os << " x ";
        const BlockFace& part = f.parts()[b];
        if (std::holds_alternative<FullFace>(part)) {
            os << "full";
        } else if (const auto* s = std::get_if<SimplexFace>(&part)) {
            if (s->vertices.size() == 1) {
                os << "v" << s->vertices[0];
            } else {
                os << "conv";
                write_set(os, s->vertices);
            }
        } else if (const auto* pole = std::get_if<SuspensionPole>(&part)) {
            os << (pole->which == SuspensionPole::Which::north ? "N" : "S");
        } else {
            os << "susp";
            write_set(os, std::get<SuspensionFace>(part).vertices);
        }
    }
    return os.str();
}

}  // namespace maxtorus
