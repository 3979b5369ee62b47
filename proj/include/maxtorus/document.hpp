#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maxtorus/classify.hpp"
#include "maxtorus/errors.hpp"
#include "maxtorus/freeness.hpp"
#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/polytope.hpp"
#include "maxtorus/version.hpp"
#include "maxtorus/weights.hpp"

// JSON input documents and report emission. Documents are strict: unknown
// fields are rejected, integers may be native JSON numbers or decimal strings
// (strings are required beyond 64 bits), and serialization is deterministic -
// identical inputs yield byte-identical reports.

namespace maxtorus {

using json = nlohmann::json;

struct InputDocument {
    std::string format_version;
    int torus_rank = 0;
    std::vector<Block> blocks;
    IntegerMatrix weights;
    std::optional<ValidationMode> mode;
    std::optional<int> free_dim_bound;

    bool operator==(const InputDocument&) const = default;
};

namespace detail {

inline Int json_to_int(const json& j, const std::string& where) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Int(std::to_string(j.get<std::uint64_t>()));
        return Int(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t pos = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (pos == s.size() || s.find_first_not_of("0123456789", pos) != std::string::npos)
            throw parse_error(where, "not a decimal integer string: \"" + s + "\"");
        return Int(s);
    }
    throw parse_error(where, "expected an integer or a decimal integer string");
}

/// Emit natively when the value fits in 64 bits, as a decimal string beyond.
inline json int_to_json(const Int& x) {
    if (x.fits_slong_p()) return json(static_cast<std::int64_t>(x.get_si()));
    return json(x.get_str());
}

inline void reject_unknown_fields(const json& j, const std::vector<std::string>& allowed,
                                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const std::string& a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known) throw parse_error(where + "/" + it.key(), "unknown field");
    }
}

inline const json& require_field(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(where + "/" + key, "missing required field");
    return *it;
}

}  // namespace detail

inline InputDocument parse_input(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error("byte " + std::to_string(e.byte), e.what());
    }
    if (!j.is_object()) throw parse_error("/", "document must be a JSON object");
    detail::reject_unknown_fields(j, {"format_version", "torus_rank", "blocks", "weights", "mode", "free_dim_bound"},
                                  "");

    InputDocument doc;

    const json& fv = detail::require_field(j, "format_version", "");
    if (!fv.is_string() || fv.get<std::string>() != kFormatVersion)
        throw parse_error("/format_version", std::string("expected \"") + kFormatVersion + "\"");
    doc.format_version = fv.get<std::string>();

    const json& tr = detail::require_field(j, "torus_rank", "");
    if (!tr.is_number_integer() || tr.get<std::int64_t>() < 1 || tr.get<std::int64_t>() > 4096)
        throw parse_error("/torus_rank", "expected a positive integer (at most 4096)");
    doc.torus_rank = static_cast<int>(tr.get<std::int64_t>());

    const json& blocks = detail::require_field(j, "blocks", "");
    if (!blocks.is_array() || blocks.empty()) throw parse_error("/blocks", "expected a nonempty array");
    int facet_count = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string where = "/blocks/" + std::to_string(i);
        const json& b = blocks[i];
        if (!b.is_object()) throw parse_error(where, "expected an object");
        detail::reject_unknown_fields(b, {"type", "dim"}, where);
        const json& type = detail::require_field(b, "type", where);
        const json& dim = detail::require_field(b, "dim", where);
        if (!dim.is_number_integer() || dim.get<std::int64_t>() < 0 || dim.get<std::int64_t>() > 4096)
            throw parse_error(where + "/dim", "expected an integer in [0, 4096]");
        const int d = static_cast<int>(dim.get<std::int64_t>());
        BlockKind kind;
        if (type == "simplex") {
            kind = BlockKind::simplex;
            if (d < 1) throw parse_error(where + "/dim", "simplex dimension must be >= 1");
        } else if (type == "suspension") {
            kind = BlockKind::suspension;
            if (d < 2) throw parse_error(where + "/dim", "suspension dimension must be >= 2");
        } else {
            throw parse_error(where + "/type", "unknown block type \"" + type.dump() + "\"");
        }
        doc.blocks.push_back({kind, d});
        facet_count += doc.blocks.back().facet_count();
    }

    const json& weights = detail::require_field(j, "weights", "");
    if (!weights.is_array()) throw parse_error("/weights", "expected an array of rows");
    if (static_cast<int>(weights.size()) != facet_count)
        throw parse_error("/weights", "expected " + std::to_string(facet_count) + " rows (one per facet), got " +
                                          std::to_string(weights.size()));
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const std::string where = "/weights/" + std::to_string(i);
        const json& row = weights[i];
        if (!row.is_array() || static_cast<int>(row.size()) != doc.torus_rank)
            throw parse_error(where, "expected a row of length torus_rank = " + std::to_string(doc.torus_rank));
        IntVector r;
        for (std::size_t c = 0; c < row.size(); ++c)
            r.push_back(detail::json_to_int(row[c], where + "/" + std::to_string(c)));
        rows.push_back(std::move(r));
    }
    doc.weights = IntegerMatrix::from_rows(rows);

    if (auto it = j.find("mode"); it != j.end()) {
        if (*it == "manifold")
            doc.mode = ValidationMode::manifold;
        else if (*it == "orbifold")
            doc.mode = ValidationMode::orbifold;
        else
            throw parse_error("/mode", "expected \"manifold\" or \"orbifold\"");
    }
    if (auto it = j.find("free_dim_bound"); it != j.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 1)
            throw parse_error("/free_dim_bound", "expected a positive integer");
        doc.free_dim_bound = static_cast<int>(it->get<std::int64_t>());
    }
    return doc;
}

inline WeightedOrbitSpace to_orbit_space(const InputDocument& doc) {
    return WeightedOrbitSpace(BlockPolytope(doc.blocks), doc.torus_rank, doc.weights);
}

// ---------------------------------------------------------------------------
// Serialization (canonical: nlohmann objects keep keys sorted)
// ---------------------------------------------------------------------------

inline json to_json(const IntegerMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(detail::int_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const IntVector& v) {
    json out = json::array();
    for (const Int& x : v) out.push_back(detail::int_to_json(x));
    return out;
}

inline json to_json(const InputDocument& doc) {
    json j;
    j["format_version"] = doc.format_version;
    j["torus_rank"] = doc.torus_rank;
    json blocks = json::array();
    for (const Block& b : doc.blocks) blocks.push_back({{"type", to_string(b.kind)}, {"dim", b.dim}});
    j["blocks"] = std::move(blocks);
    j["weights"] = to_json(doc.weights);
    if (doc.mode) j["mode"] = to_string(*doc.mode);
    if (doc.free_dim_bound) j["free_dim_bound"] = *doc.free_dim_bound;
    return j;
}

inline json to_json(const ValidationReport& r) {
    json rules = json::array();
    for (const RuleCheck& rule : r.rules) {
        json jr;
        jr["id"] = rule.id;
        if (!rule.detail.empty()) jr["detail"] = rule.detail;
        jr["passed"] = rule.passed;
        jr["offenders"] = rule.offenders;
        rules.push_back(std::move(jr));
    }
    return json{{"mode", to_string(r.mode)}, {"rules", std::move(rules)}, {"verdict", r.verdict}};
}

inline json to_json(const FreenessCertificate& c) {
    json witnesses = json::array();
    for (const VertexWitness& w : c.witnesses) {
        json factors = json::array();
        for (const Int& f : w.invariant_factors) factors.push_back(detail::int_to_json(f));
        witnesses.push_back({{"vertex_facets", w.vertex_facets},
                             {"vertex", w.vertex_position},
                             {"stacked_invariant_factors", std::move(factors)}});
    }
    return json{{"subtorus_basis", to_json(c.subtorus_basis)},
                {"witnesses", std::move(witnesses)},
                {"exhaustive", c.exhaustive},
                {"coefficient_bound", c.coefficient_bound}};
}

inline json to_json(const BoundsRecord& b) {
    json checks = json::array();
    for (const BoundsCheck& c : b.checks)
        checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
    return json{{"checks", std::move(checks)}, {"all_hold", b.all_hold}};
}

inline json to_json(const ClassificationReport& r) {
    json j;
    j["validation"] = to_json(r.validation);
    j["maximal"] = r.maximal;
    j["maximality_note"] = "almost maximal actions are treated as maximal";
    if (r.sphere_product) {
        json factors = json::array();
        for (int d : r.sphere_product->factor_dims) factors.push_back(d);
        j["sphere_product"] = {{"factor_dims", std::move(factors)}, {"total_dim", r.sphere_product->total_dim()}};
    }
    if (r.moment_angle_dim) j["moment_angle_dim"] = *r.moment_angle_dim;
    if (r.quotient_rank) j["quotient_rank"] = *r.quotient_rank;
    if (r.kernel) j["kernel_basis"] = to_json(*r.kernel);
    if (r.free_rank_result)
        j["free_rank"] = {{"value", r.free_rank_result->value},
                          {"certificate", to_json(r.free_rank_result->certificate)}};
    if (r.free_dimension_result)
        j["free_dimension"] = {{"value", r.free_dimension_result->value},
                               {"certificate", to_json(r.free_dimension_result->certificate)}};
    if (r.bounds) j["bounds"] = to_json(*r.bounds);
    return j;
}

/// FNV-1a over the canonical serialization; stable fingerprint for reports.
inline std::string input_digest(const InputDocument& doc) {
    const std::string text = to_json(doc).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// Common envelope around every subcommand payload.
inline json report_envelope(const std::string& command, const InputDocument& doc) {
    json j;
    j["command"] = command;
    j["format_version"] = kFormatVersion;
    j["tool_version"] = kToolVersion;
    j["input"] = to_json(doc);
    j["input_digest"] = input_digest(doc);
    return j;
}

inline std::string render_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace maxtorus
