// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// The brute-force oracles here run on plain int64 (entries and minors stay
// far below overflow at this scale) so they share no code path with the
// GMP-backed library they check.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "maxtorus/maxtorus.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace maxtorus;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Checker {
    bool ok = true;
    std::string first_failure;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

// --- int64 linear algebra for the acceptance oracles -----------------------

using IntRow = std::vector<long long>;
using IntMat = std::vector<IntRow>;

int int_rank(IntMat m) {
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rk = 0;
    long long prev = 1;
    for (std::size_t col = 0; col < cols && rk < rows; ++col) {
        std::size_t pivot = rk;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rk], m[pivot]);
        for (std::size_t i = rk + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                m[i][j] = (m[i][j] * m[rk][col] - m[i][col] * m[rk][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[rk][col];
        ++rk;
    }
    return static_cast<int>(rk);
}

IntMat to_int_mat(const IntegerMatrix& a) {
    IntMat m(a.rows(), IntRow(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).get_si();
    return m;
}

// canonical-sign primitive int vectors with max-norm <= bound, lex order
const std::vector<IntRow>& int_candidates(int k, int bound) {
    static std::map<std::pair<int, int>, std::vector<IntRow>> cache;
    auto [it, fresh] = cache.try_emplace(std::pair<int, int>{k, bound});
    if (!fresh) return it->second;
    std::vector<IntRow>& out = it->second;
    IntRow v(k, -bound);
    for (;;) {
        int first = 0;
        while (first < k && v[first] == 0) ++first;
        if (first < k && v[first] > 0) {
            long long g = 0;
            for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
            if (g == 1) out.push_back(v);
        }
        int i = k - 1;
        while (i >= 0 && v[i] == bound) v[i--] = -bound;
        if (i < 0) break;
        ++v[i];
    }
    return out;
}

// Brute-force almost-free subspace search: the largest s admitting candidate
// rows (independent, and raising every vertex stack's rank by s) at the given
// bound. Targets above k - dim P are impossible outright: a stacked matrix
// has only k columns.
struct SubspaceOracle {
    const std::vector<IntRow>* candidates;
    std::vector<IntMat> isotropies;
    int k, dim_p;
    std::vector<signed char> level1;  // 0 unknown, 1 pass, -1 fail

    SubspaceOracle(const WeightedOrbitSpace& w, int bound) {
        k = w.torus_rank();
        dim_p = w.polytope().dim();
        candidates = &int_candidates(k, bound);
        for (const FaceSelector& v : enumerate_vertices(w.polytope()))
            isotropies.push_back(to_int_mat(isotropy_matrix(w, v)));
        level1.assign(candidates->size(), 0);
    }

    bool passes_level1(std::size_t c) {
        if (level1[c] == 0) {
            bool ok = true;
            for (const IntMat& iso : isotropies) {
                IntMat stack = iso;
                stack.push_back((*candidates)[c]);
                if (int_rank(stack) != static_cast<int>(iso.size()) + 1) {
                    ok = false;
                    break;
                }
            }
            level1[c] = ok ? 1 : -1;
        }
        return level1[c] == 1;
    }

    bool extend(std::vector<IntRow>& chosen, std::size_t start, int remaining) {
        if (remaining == 0) return true;
        for (std::size_t c = start; c < candidates->size(); ++c) {
            if (!passes_level1(c)) continue;
            bool ok;
            {
                IntMat alone = chosen;
                alone.push_back((*candidates)[c]);
                ok = int_rank(alone) == static_cast<int>(alone.size());
            }
            for (std::size_t vi = 0; ok && vi < isotropies.size(); ++vi) {
                IntMat stack = isotropies[vi];
                for (const IntRow& r : chosen) stack.push_back(r);
                stack.push_back((*candidates)[c]);
                ok = int_rank(stack) == static_cast<int>(stack.size());
            }
            if (!ok) continue;
            chosen.push_back((*candidates)[c]);
            if (extend(chosen, c + 1, remaining - 1)) return true;
            chosen.pop_back();
        }
        return false;
    }

    int max_rank() {
        for (int target = k; target >= 1; --target) {
            if (target + dim_p > k) continue;  // stacked rank is capped at k
            std::vector<IntRow> chosen;
            if (extend(chosen, 0, target)) return target;
        }
        return 0;
    }
};

// --- CLI helpers ------------------------------------------------------------

std::string fixture_path(const std::string& name) {
    return std::string(MAXTORUS_FIXTURE_DIR) + "/" + name;
}

std::string slurp_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return {};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
    std::fclose(f);
    return out;
}

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string(MAXTORUS_CLI_PATH) + " " + args + " 2>/dev/null";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// all block polytopes of dimension <= max_dim, by recursive composition
void compose_polytopes(std::vector<Block> prefix, int dim_left, std::vector<BlockPolytope>& out) {
    if (!prefix.empty()) out.emplace_back(prefix);
    for (int d = 1; d <= dim_left; ++d) {
        auto next = prefix;
        next.push_back({BlockKind::simplex, d});
        compose_polytopes(next, dim_left - d, out);
    }
    for (int d = 2; d <= dim_left; ++d) {
        auto next = prefix;
        next.push_back({BlockKind::suspension, d});
        compose_polytopes(next, dim_left - d, out);
    }
}

// ---------------------------------------------------------------------------

bool criterion_1_snf(std::string& detail) {
    Checker c;
    const auto start = Clock::now();
    std::mt19937_64 rng(0xACCE97ull);
    for (int trial = 0; trial < 1000; ++trial) {
        IntegerMatrix a = oracles::random_matrix(rng, 6, -9, 9);
        SnfResult snf = smith_normal_form(a);
        c.expect(snf.u * a * snf.v == snf.d, "U*A*V != D for " + a.to_string());
        Int du = determinant(snf.u), dv = determinant(snf.v);
        c.expect(du == 1 || du == -1, "U not unimodular for " + a.to_string());
        c.expect(dv == 1 || dv == -1, "V not unimodular for " + a.to_string());
        for (std::size_t i = 0; i < snf.d.rows(); ++i)
            for (std::size_t j = 0; j < snf.d.cols(); ++j)
                if (i != j) c.expect(snf.d(i, j) == 0, "D not diagonal for " + a.to_string());
        for (std::size_t i = 0; i < snf.invariant_factors.size(); ++i) {
            c.expect(snf.invariant_factors[i] > 0, "factor not positive");
            if (i)
                c.expect(snf.invariant_factors[i] % snf.invariant_factors[i - 1] == 0,
                         "divisibility chain broken for " + a.to_string());
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s >= 10 s");
    std::ostringstream os;
    os << "1000 matrices, " << elapsed << " s";
    detail = c.ok ? os.str() : c.first_failure;
    return c.ok;
}

bool criterion_2_facets(std::string& detail) {
    Checker c;
    for (int d = 1; d <= 6; ++d)
        c.expect(BlockPolytope({{BlockKind::simplex, d}}).facet_count() == d + 1, "simplex facet count");
    for (int d = 2; d <= 6; ++d)
        c.expect(BlockPolytope({{BlockKind::suspension, d}}).facet_count() == d, "suspension facet count");

    std::vector<BlockPolytope> all;
    compose_polytopes({}, 4, all);
    std::size_t faces_checked = 0;
    for (const BlockPolytope& p : all) {
        int sum = 0;
        for (const Block& b : p.blocks()) sum += b.facet_count();
        c.expect(p.facet_count() == sum, "product facet count");
        c.expect(static_cast<std::size_t>(p.facet_count()) == enumerate_facets(p).size(), "facet enumeration size");
        for (const FaceSelector& f : oracles::enumerate_all_faces(p)) {
            ++faces_checked;
            c.expect(static_cast<int>(facets_containing(p, f).size()) == codim(p, f),
                     "codim-j face not in exactly j facets");
        }
    }
    std::ostringstream os;
    os << all.size() << " polytopes of dim <= 4, " << faces_checked << " faces";
    detail = c.ok ? os.str() : c.first_failure;
    return c.ok;
}

bool criterion_3_moment_angle(std::string& detail) {
    Checker c;
    std::vector<BlockPolytope> all;
    compose_polytopes({}, 4, all);  // exhaustive up to dim 4 ...
    std::mt19937_64 rng(33);
    while (all.size() < 120) all.push_back(corpus::random_polytope(rng, 6));  // ... plus larger random ones
    for (const BlockPolytope& p : all) {
        SphereProduct z = moment_angle_type(p);
        c.expect(z.factor_dims.size() == p.block_count(), "one sphere per block");
        for (std::size_t b = 0; b < p.block_count(); ++b) {
            const Block& blk = p.blocks()[b];
            const int expected = blk.kind == BlockKind::simplex ? 2 * blk.dim + 1 : 2 * blk.dim;
            c.expect(z.factor_dims[b] == expected, "sphere dimension rule");
            c.expect(z.factor_dims[b] >= 3, "sphere dimension >= 3");
        }
        c.expect(z.total_dim() == p.dim() + p.facet_count(), "dim Z = dim P + m");
    }
    detail = c.ok ? std::to_string(all.size()) + " polytopes" : c.first_failure;
    return c.ok;
}

bool criterion_4_free_rank(std::string& detail) {
    Checker c;
    std::mt19937_64 rng(440044);
    const int instances = 200;
    for (int trial = 0; trial < instances; ++trial) {
        corpus::Instance inst = corpus::random_instance(rng, 4, 6, 2);
        const WeightedOrbitSpace& w = inst.space;
        if (!validate(w, ValidationMode::manifold).verdict) {
            c.expect(false, "corpus instance failed manifold validation");
            continue;
        }
        const int k = w.torus_rank();
        const int expected = 2 * k - w.manifold_dim();

        FreeRankResult res = free_rank(w);
        c.expect(res.value == expected, "free_rank != 2k - n");

        // certificate verification on the independent int64 path
        const IntegerMatrix& basis = res.certificate.subtorus_basis;
        c.expect(basis.rows() == static_cast<std::size_t>(res.value), "certificate size");
        c.expect(basis.rows() == 0 || is_saturated(basis), "certificate not saturated");
        IntMat ibasis = to_int_mat(basis);
        for (const FaceSelector& v : enumerate_vertices(w.polytope())) {
            IntMat stack = to_int_mat(isotropy_matrix(w, v));
            for (const IntRow& r : ibasis) stack.push_back(r);
            c.expect(int_rank(stack) == static_cast<int>(stack.size()),
                     "certificate span meets a vertex isotropy");
        }

        // brute-force subspace oracle at bound 3
        SubspaceOracle oracle(w, 3);
        c.expect(oracle.max_rank() == expected, "subspace oracle disagrees with 2k - n");
        if (!c.ok) break;
    }
    detail = c.ok ? std::to_string(instances) + " instances, oracle bound 3" : c.first_failure;
    return c.ok;
}

bool criterion_5_lemma_circles(std::string& detail) {
    Checker c;
    std::mt19937_64 rng(550055);
    const int instances = 100;
    for (int trial = 0; trial < instances; ++trial) {
        corpus::Instance inst = corpus::normalized_instance(rng, 4, 6);
        const WeightedOrbitSpace& w = inst.space;
        auto circles = lemma_free_circles(w);
        int simplex_blocks = 0;
        for (const Block& b : w.polytope().blocks())
            if (b.kind == BlockKind::simplex) ++simplex_blocks;
        const int expected = 2 * w.torus_rank() - w.manifold_dim();
        c.expect(static_cast<int>(circles.size()) == simplex_blocks, "one circle per simplex block");
        c.expect(static_cast<int>(circles.size()) == expected, "circle count != 2k - n");
        std::vector<IntVector> rows;
        for (const CircleSubgroup& circle : circles) {
            c.expect(acts_freely(w, circle), "lemma circle does not act freely");
            rows.push_back(circle.components());
        }
        if (!rows.empty())
            c.expect(is_saturated(IntegerMatrix::from_rows(rows)), "lemma circles not jointly saturated");
        if (!c.ok) break;
    }
    detail = c.ok ? std::to_string(instances) + " normalized instances" : c.first_failure;
    return c.ok;
}

bool criterion_6_bounds(std::string& detail) {
    Checker c;
    std::mt19937_64 rng(660066);

    // over-ranked inputs (k > floor(2n/3), equivalently k > 2 dim P) are rejected
    int rejected = 0;
    for (int trial = 0; trial < 25; ++trial) {
        BlockPolytope p = corpus::random_polytope(rng, 4);
        std::uniform_int_distribution<int> extra(1, 3);
        const int k = 2 * p.dim() + extra(rng);
        IntegerMatrix weights(p.facet_count(), k);
        for (int r = 0; r < p.facet_count(); ++r) weights(r, r % k) = 1;
        WeightedOrbitSpace w(p, k, weights);
        const int n = w.manifold_dim();
        c.expect(k > (2 * n) / 3, "constructed input not over-ranked");
        c.expect(!validate(w, ValidationMode::manifold).verdict, "over-ranked input passed manifold validation");
        c.expect(!validate(w, ValidationMode::orbifold).verdict, "over-ranked input passed orbifold validation");
        BoundsRecord rec = check_bounds(n, k, p);
        c.expect(!rec.checks[0].holds, "rank bound check did not fail");
        ++rejected;
    }

    // corpus instances at the top rank satisfy l <= 2n mod 3
    int top_rank_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        corpus::Instance inst = corpus::random_instance(rng, 4, 6, 2);
        const WeightedOrbitSpace& w = inst.space;
        const int n = w.manifold_dim(), k = w.torus_rank(), l = w.facet_count() - k;
        c.expect(k <= (2 * n) / 3, "valid instance exceeds the rank bound");
        if (k == (2 * n) / 3) {
            ++top_rank_seen;
            c.expect(l <= (2 * n) % 3, "quotient rank exceeds 2n mod 3 at top rank");
        }
    }
    c.expect(top_rank_seen > 0, "no top-rank instances generated");

    // the (n,k) = (6,4) example: 2n mod 3 = 0 forces l = 0
    WeightedOrbitSpace square(BlockPolytope({{BlockKind::simplex, 1}, {BlockKind::simplex, 1}}), 4,
                              IntegerMatrix::identity(4));
    BoundsRecord rec = check_bounds(6, 4, square.polytope());
    c.expect(rec.all_hold, "(6,4) bounds record fails");
    c.expect(square.facet_count() - 4 == 0, "(6,4) does not force l = 0");

    std::ostringstream os;
    os << rejected << " over-ranked inputs rejected, " << top_rank_seen << " top-rank instances checked";
    detail = c.ok ? os.str() : c.first_failure;
    return c.ok;
}

bool criterion_7_known_quotients(std::string& detail) {
    Checker c;
    {
        InputDocument doc = parse_input(slurp_file(fixture_path("cp2.json")));
        ClassificationReport rep = classify(to_orbit_space(doc));
        c.expect(rep.validation.verdict, "cp2 fails validation");
        c.expect(rep.sphere_product && rep.sphere_product->factor_dims == std::vector<int>{5}, "cp2: Z != S^5");
        c.expect(rep.quotient_rank && *rep.quotient_rank == 1, "cp2: l != 1");
        c.expect(rep.kernel && *rep.kernel == oracles::mat({{1, 1, 1}}), "cp2: kernel != (1,1,1)");
    }
    {
        InputDocument doc = parse_input(slurp_file(fixture_path("s3s3.json")));
        ClassificationReport rep = classify(to_orbit_space(doc));
        c.expect(rep.validation.verdict, "s3s3 fails validation");
        c.expect(rep.sphere_product && rep.sphere_product->factor_dims == std::vector<int>{3, 3},
                 "s3s3: Z != S^3 x S^3");
        c.expect(rep.quotient_rank && *rep.quotient_rank == 0, "s3s3: l != 0");
        c.expect(rep.kernel && rep.kernel->rows() == 0, "s3s3: kernel not empty");
    }
    {
        auto [code, out] = run_cli("classify " + fixture_path("cp2.json"));
        c.expect(code == 0, "cli classify cp2 exit != 0");
        json rep = json::parse(out, nullptr, false);
        c.expect(!rep.is_discarded() && rep["result"]["kernel_basis"] == json::parse("[[1,1,1]]"),
                 "cli cp2 kernel mismatch");
    }
    detail = c.ok ? "cp2 and s3s3, exact integer outputs" : c.first_failure;
    return c.ok;
}

bool criterion_8_invariance(std::string& detail) {
    Checker c;
    std::mt19937_64 rng(880088);
    std::vector<corpus::Instance> bases;
    for (int i = 0; i < 5; ++i) bases.push_back(corpus::random_instance(rng, 4, 5, 1));

    auto sphere_multiset = [](const SphereProduct& z) {
        return std::multiset<int>(z.factor_dims.begin(), z.factor_dims.end());
    };

    int transforms = 0, relabelings = 0;
    for (const corpus::Instance& inst : bases) {
        ClassificationReport base = classify(inst.space, ValidationMode::manifold, 1);
        c.expect(base.validation.verdict, "base instance invalid");
        if (!base.validation.verdict) continue;
        for (int t = 0; t < 20; ++t) {
            IntegerMatrix v = oracles::random_unimodular(rng, inst.space.torus_rank());
            WeightedOrbitSpace twisted(inst.space.polytope(), inst.space.torus_rank(), inst.space.weights() * v);
            ClassificationReport rep = classify(twisted, ValidationMode::manifold, 1);
            ++transforms;
            c.expect(rep.validation.verdict, "twisted instance invalid");
            if (!rep.validation.verdict) continue;
            c.expect(sphere_multiset(*rep.sphere_product) == sphere_multiset(*base.sphere_product),
                     "sphere multiset changed under basis change");
            c.expect(*rep.quotient_rank == *base.quotient_rank, "l changed under basis change");
            c.expect(rep.free_rank_result->value == base.free_rank_result->value,
                     "free rank changed under basis change");
            c.expect(*rep.kernel == *base.kernel, "kernel lattice changed under basis change");
        }
        for (int t = 0; t < 20; ++t) {
            auto [relabeled, facet_map] = corpus::relabel(inst.space, rng);
            ClassificationReport rep = classify(relabeled, ValidationMode::manifold, 1);
            ++relabelings;
            c.expect(rep.validation.verdict, "relabeled instance invalid");
            if (!rep.validation.verdict) continue;
            c.expect(sphere_multiset(*rep.sphere_product) == sphere_multiset(*base.sphere_product),
                     "sphere multiset changed under relabeling");
            c.expect(*rep.quotient_rank == *base.quotient_rank, "l changed under relabeling");
            c.expect(rep.free_rank_result->value == base.free_rank_result->value,
                     "free rank changed under relabeling");
            IntegerMatrix unpermuted(rep.kernel->rows(), rep.kernel->cols());
            for (std::size_t i = 0; i < rep.kernel->rows(); ++i)
                for (std::size_t j = 0; j < rep.kernel->cols(); ++j)
                    unpermuted(i, facet_map[j]) = (*rep.kernel)(i, j);
            c.expect(hermite_row_basis(unpermuted) == *base.kernel, "kernel lattice changed under relabeling");
        }
    }
    std::ostringstream os;
    os << transforms << " basis changes, " << relabelings << " relabelings";
    detail = c.ok ? os.str() : c.first_failure;
    return c.ok;
}

bool criterion_9_determinism(std::string& detail, Clock::time_point suite_start) {
    Checker c;
    const std::vector<std::string> fixtures = {"cp2.json",      "s3s3.json",   "s2.json",
                                               "orbifold.json", "bigint.json", "sigma2xdelta1.json"};
    for (const std::string& name : fixtures) {
        InputDocument doc = parse_input(slurp_file(fixture_path(name)));
        InputDocument again = parse_input(to_json(doc).dump());
        c.expect(doc == again, name + ": parse/serialize not the identity");
        c.expect(to_json(doc).dump() == to_json(again).dump(), name + ": serialization unstable");
    }
    for (const std::string name : {"cp2.json", "s3s3.json", "orbifold.json"}) {
        auto first = run_cli("classify " + fixture_path(name) + " --mode orbifold");
        auto second = run_cli("classify " + fixture_path(name) + " --mode orbifold");
        c.expect(first.first == second.first, name + ": exit codes differ across runs");
        c.expect(!first.second.empty() && first.second == second.second,
                 name + ": reports not byte-identical across runs");
    }
    const double elapsed = seconds_since(suite_start);
    c.expect(elapsed < 60.0, "corpus runtime " + std::to_string(elapsed) + " s >= 60 s");
    std::ostringstream os;
    os << fixtures.size() << " fixtures round-tripped, total " << elapsed << " s";
    detail = c.ok ? os.str() : c.first_failure;
    return c.ok;
}

}  // namespace

int main() {
    const auto suite_start = Clock::now();
    struct Entry {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Entry> criteria = {
        {1, "SNF suite", criterion_1_snf},
        {2, "facet-count identities", criterion_2_facets},
        {3, "moment-angle correspondence", criterion_3_moment_angle},
        {4, "free-rank formula at desk scale", criterion_4_free_rank},
        {5, "diagonal-circle construction", criterion_5_lemma_circles},
        {6, "bounds validator", criterion_6_bounds},
        {7, "end-to-end known quotients", criterion_7_known_quotients},
        {8, "invariance suite", criterion_8_invariance},
        {9, "round-trip and determinism",
         [&](std::string& d) { return criterion_9_determinism(d, suite_start); }},
    };

    int failures = 0;
    for (const Entry& e : criteria) {
        std::string det;
        const bool ok = e.run(det);
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << e.id << ": " << e.name << " - " << det
                  << std::endl;
    }
    if (failures) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
