// maxtorus - classify maximal torus actions through their weighted orbit
// spaces: validate the torus-action axioms, normalize weight matrices, and
// emit the free-linear-quotient presentation M = Z_P / T^{m-k} as a canonical
// JSON report.
//
// Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
// 3 precondition violation, 4 I/O error, 5 internal error.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "maxtorus/maxtorus.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw maxtorus::io_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw maxtorus::io_error("cannot read " + path);
    return buf.str();
}

struct Options {
    std::string input_path;
    std::optional<std::string> mode_flag;
    std::optional<int> bound_flag;
    int max_norm = 1;
};

maxtorus::ValidationMode resolve_mode(const Options& opt, const maxtorus::InputDocument& doc) {
    if (opt.mode_flag) {
        if (*opt.mode_flag == "manifold") return maxtorus::ValidationMode::manifold;
        if (*opt.mode_flag == "orbifold") return maxtorus::ValidationMode::orbifold;
        throw maxtorus::parse_error("--mode", "expected manifold or orbifold");
    }
    return doc.mode.value_or(maxtorus::ValidationMode::manifold);
}

int resolve_bound(const Options& opt, const maxtorus::InputDocument& doc) {
    return opt.bound_flag.value_or(doc.free_dim_bound.value_or(maxtorus::kDefaultFreeDimensionBound));
}

void emit(const maxtorus::json& report) { std::cout << maxtorus::render_report(report); }

int run_validate(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    ValidationReport rep = validate(to_orbit_space(doc), resolve_mode(opt, doc));
    json report = report_envelope("validate", doc);
    report["result"] = to_json(rep);
    emit(report);
    return rep.verdict ? kExitOk : kExitValidation;
}

int run_normalize(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    auto [normalized, change] = normalize(to_orbit_space(doc));
    InputDocument out = doc;
    out.weights = normalized.weights();
    json report = report_envelope("normalize", doc);
    report["result"] = {{"normalized_input", to_json(out)}, {"change_of_basis", to_json(change.v)}};
    emit(report);
    return kExitOk;
}

int run_classify(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    ClassificationReport rep = classify(to_orbit_space(doc), resolve_mode(opt, doc), resolve_bound(opt, doc));
    json report = report_envelope("classify", doc);
    report["result"] = to_json(rep);
    emit(report);
    return rep.validation.verdict ? kExitOk : kExitValidation;
}

int run_free_rank(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    FreeRankResult res = free_rank(to_orbit_space(doc));
    json report = report_envelope("free-rank", doc);
    report["result"] = {{"value", res.value}, {"certificate", to_json(res.certificate)}};
    emit(report);
    return kExitOk;
}

int run_free_dim(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    FreeDimensionResult res = free_dimension(to_orbit_space(doc), resolve_bound(opt, doc));
    json report = report_envelope("free-dim", doc);
    report["result"] = {{"value", res.value},
                        {"bound", resolve_bound(opt, doc)},
                        {"certificate", to_json(res.certificate)}};
    emit(report);
    return kExitOk;
}

int run_circles(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    std::vector<CircleSubgroup> circles = lemma_free_circles(to_orbit_space(doc));
    json arr = json::array();
    for (const CircleSubgroup& c : circles) arr.push_back(to_json(c.components()));
    json report = report_envelope("circles", doc);
    report["result"] = {{"circles", std::move(arr)}};
    emit(report);
    return kExitOk;
}

int run_faces(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    BlockPolytope p(doc.blocks);
    json facets = json::array();
    for (const FaceSelector& f : enumerate_facets(p))
        facets.push_back({{"label", face_label(p, f)}, {"position", face_position(p, f)}});
    json vertices = json::array();
    for (const FaceSelector& v : enumerate_vertices(p))
        vertices.push_back({{"label", face_label(p, v)}, {"position", face_position(p, v)}});
    json pairs = json::array();
    for (const auto& [facet, vertex] : opposing_pairs(p))
        pairs.push_back({{"facet", face_position(p, facet)}, {"opposite_vertex", face_position(p, vertex)}});
    json report = report_envelope("faces", doc);
    report["result"] = {{"dim", p.dim()},
                        {"facet_count", p.facet_count()},
                        {"facets", std::move(facets)},
                        {"vertices", std::move(vertices)},
                        {"opposing_pairs", std::move(pairs)}};
    emit(report);
    return kExitOk;
}

int run_oracle(const Options& opt) {
    using namespace maxtorus;
    InputDocument doc = parse_input(read_file(opt.input_path));
    std::vector<CircleSubgroup> circles = oracle_enumerate_free_circles(to_orbit_space(doc), opt.max_norm);
    json arr = json::array();
    for (const CircleSubgroup& c : circles) arr.push_back(to_json(c.components()));
    json report = report_envelope("oracle", doc);
    report["result"] = {{"max_norm", opt.max_norm}, {"circles", std::move(arr)}};
    emit(report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxtorus - torus action classifier over weighted orbit spaces"};
    app.require_subcommand(1);

    Options opt;
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", opt.input_path, "input document (JSON)")->required();
    };
    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", opt.mode_flag, "manifold or orbifold (overrides the document)");
    };

    CLI::App* validate = app.add_subcommand("validate", "check the torus-action axioms");
    add_input(validate);
    add_mode(validate);

    CLI::App* normalize = app.add_subcommand("normalize", "diagonalize a square weight matrix to the identity");
    add_input(normalize);

    CLI::App* classify = app.add_subcommand("classify", "full classification report");
    add_input(classify);
    add_mode(classify);
    classify->add_option("--free-dim-bound", opt.bound_flag, "coefficient bound for the free-dimension search");

    CLI::App* free_rank = app.add_subcommand("free-rank", "free rank with certificate");
    add_input(free_rank);

    CLI::App* free_dim = app.add_subcommand("free-dim", "free dimension (bounded search) with certificate");
    add_input(free_dim);
    free_dim->add_option("--bound", opt.bound_flag, "coefficient bound (default 3)");

    CLI::App* circles = app.add_subcommand("circles", "freely acting diagonal circles of a normalized space");
    add_input(circles);

    CLI::App* faces = app.add_subcommand("faces", "facets, vertices and opposing pairs of the polytope");
    add_input(faces);

    CLI::App* oracle = app.add_subcommand("oracle", "enumerate all freely acting circles up to a max-norm");
    add_input(oracle);
    oracle->add_option("--max-norm", opt.max_norm, "candidate max-norm (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(opt);
        if (normalize->parsed()) return run_normalize(opt);
        if (classify->parsed()) return run_classify(opt);
        if (free_rank->parsed()) return run_free_rank(opt);
        if (free_dim->parsed()) return run_free_dim(opt);
        if (circles->parsed()) return run_circles(opt);
        if (faces->parsed()) return run_faces(opt);
        if (oracle->parsed()) return run_oracle(opt);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const maxtorus::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const maxtorus::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const maxtorus::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const maxtorus::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
