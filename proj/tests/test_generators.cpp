#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "htn/generators.hpp"
#include "htn/hierarchy.hpp"
#include "htn/json_io.hpp"
#include "htn/oracle.hpp"
#include "htn/ordergraph.hpp"
#include "htn/stategraph.hpp"

#include "helpers.hpp"

using namespace htn;
using namespace htn_tests;

namespace {

// All words over {a, b} of exactly the given length.
std::vector<std::string> all_words(int len) {
    std::vector<std::string> out;
    for (int mask = 0; mask < (1 << len); ++mask) {
        std::string w;
        for (int i = 0; i < len; ++i) w.push_back(mask >> i & 1 ? 'b' : 'a');
        out.push_back(w);
    }
    return out;
}

const std::vector<std::string> kSmallWords = {"",   "a",  "b",  "aa",
                                              "ab", "ba", "bb", "aba"};

} // namespace

TEST_CASE("shuffle instances reject other alphabets") {
    CHECK_THROWS_AS(gen_shuffle_verification({"ac"}, "ca"), Error);
    CHECK_THROWS_AS(gen_shuffle_verification({"a"}, "x"), Error);
    CHECK_THROWS_AS(gen_shuffle_state("a", {"c"}, Query::Reach), Error);
    CHECK_THROWS_AS(gen_shuffle_state("a", {"a"}, Query::Verify), Error);
}

TEST_CASE("shuffle verification instances are faithful") {
    int yes = 0, no = 0;
    for (const std::string& p1 : kSmallWords) {
        for (const std::string& p2 : kSmallWords) {
            int total = static_cast<int>(p1.size() + p2.size());
            if (total > 5) continue;
            for (const std::string& target : all_words(total)) {
                PrimitiveInstance inst = gen_shuffle_verification({p1, p2}, target);
                CAPTURE(p1);
                CAPTURE(p2);
                CAPTURE(target);
                bool expected = shuffle_contains({p1, p2}, target);
                Verdict v = verify_gpow(inst.domain, inst.network, inst.s0, inst.plan);
                REQUIRE(v.yes == expected);
                if (expected) REQUIRE(witness_ok(inst, v));
                REQUIRE(dispatch(inst).yes == expected);
                (expected ? yes : no)++;
            }
            // A target of the wrong length can never be an interleaving.
            if (total > 0) {
                PrimitiveInstance inst = gen_shuffle_verification({p1, p2}, "");
                CHECK_FALSE(dispatch(inst).yes);
            }
        }
    }
    CHECK(yes > 50);
    CHECK(no > 50);

    // Three-part instances with tasks only for nonempty parts.
    PrimitiveInstance inst = gen_shuffle_verification({"ab", "", "b"}, "abb");
    CHECK(inst.network.size() == 3);
    CHECK(dispatch(inst).yes);
}

TEST_CASE("shuffle state instances are faithful and small-state") {
    for (Query q : {Query::Reach, Query::Executable}) {
        int yes = 0, no = 0;
        for (const std::string& p1 : kSmallWords) {
            for (const std::string& p2 : kSmallWords) {
                int total = static_cast<int>(p1.size() + p2.size());
                if (total > 4) continue;
                for (int wl = std::max(0, total - 1); wl <= total; ++wl) {
                    for (const std::string& word : all_words(wl)) {
                        PrimitiveInstance inst = gen_shuffle_state(word, {p1, p2}, q);
                        CAPTURE(word);
                        CAPTURE(p1);
                        CAPTURE(p2);
                        bool expected = shuffle_contains({p1, p2}, word);
                        StateGraph g = build_state_graph(inst.domain, inst.s0, 100);
                        REQUIRE(g.num_states() <= 4);
                        Verdict v = dispatch(inst);
                        REQUIRE(v.yes == expected);
                        if (expected) REQUIRE(witness_ok(inst, v));
                        (expected ? yes : no)++;
                    }
                }
            }
        }
        CHECK(yes > 30);
        CHECK(no > 30);
    }
}

TEST_CASE("clique instances validate their input") {
    ColoredGraph g;
    g.num_vertices = 2;
    g.num_colors = 2;
    g.color = {0}; // wrong length
    CHECK_THROWS_AS(gen_clique(g, CliqueVariant::CompoundCount, Query::Reach),
                    ImproperColoring);
    g.color = {0, 5}; // out of range
    CHECK_THROWS_AS(gen_clique(g, CliqueVariant::CompoundCount, Query::Reach),
                    ImproperColoring);
    g.color = {0, 0};
    g.edges = {{0, 1}}; // joins two vertices of the same color
    CHECK_THROWS_AS(gen_clique(g, CliqueVariant::CompoundCount, Query::Reach),
                    ImproperColoring);
    g.color = {0, 1};
    g.edges = {{0, 1}, {1, 0}}; // duplicate after normalization
    CHECK_THROWS_AS(gen_clique(g, CliqueVariant::CompoundCount, Query::Reach), Error);
    g.edges = {{0, 7}}; // endpoint out of range
    CHECK_THROWS_AS(gen_clique(g, CliqueVariant::CompoundCount, Query::Reach),
                    ImproperColoring);
}

TEST_CASE("clique hierarchy measures per variant") {
    ColoredGraph g;
    g.num_vertices = 4;
    g.num_colors = 2;
    g.color = {0, 0, 1, 1};
    g.edges = {{0, 2}, {0, 3}, {1, 2}};
    int n = 4, m = 3;

    auto measures = [&](CliqueVariant variant) {
        PrimitiveInstance inst = gen_clique(g, variant, Query::Reach);
        return measure_hierarchy(inst.domain, inst.network);
    };

    HierarchyMeasures cc = measures(CliqueVariant::CompoundCount);
    CHECK(cc.compound_count == n + m);
    CHECK(cc.max_method_size == 1);
    REQUIRE(cc.depth.has_value());
    CHECK(*cc.depth == 1);
    CHECK(cc.max_methods_per_compound == 2);

    HierarchyMeasures ms = measures(CliqueVariant::MethodSize);
    CHECK(ms.compound_count == 1);
    CHECK(ms.max_method_size == n + m + 1);
    REQUIRE(ms.depth.has_value());
    CHECK(*ms.depth == 2);
    CHECK(ms.max_methods_per_compound == 2);

    HierarchyMeasures dp = measures(CliqueVariant::Depth);
    CHECK(dp.compound_count == 1);
    CHECK(dp.max_method_size == 2);
    REQUIRE(dp.depth.has_value());
    CHECK(*dp.depth == n + m);
    CHECK(dp.max_methods_per_compound == 2);
}

TEST_CASE("clique instances are faithful for every variant and query") {
    std::vector<ColoredGraph> graphs;
    {
        ColoredGraph triangle;
        triangle.num_vertices = 3;
        triangle.num_colors = 3;
        triangle.color = {0, 1, 2};
        triangle.edges = {{0, 1}, {0, 2}, {1, 2}};
        graphs.push_back(triangle);

        ColoredGraph path = triangle; // misses the 0-2 edge
        path.edges = {{0, 1}, {1, 2}};
        graphs.push_back(path);

        ColoredGraph lone; // one color, one vertex, no edges: trivially yes
        lone.num_vertices = 1;
        lone.num_colors = 1;
        lone.color = {0};
        graphs.push_back(lone);

        ColoredGraph starved; // one color, no vertices: trivially no
        starved.num_vertices = 0;
        starved.num_colors = 1;
        graphs.push_back(starved);

        // Two colors, two candidate pairs, only one of them connected.
        ColoredGraph pairs;
        pairs.num_vertices = 4;
        pairs.num_colors = 2;
        pairs.color = {0, 0, 1, 1};
        pairs.edges = {{1, 2}};
        graphs.push_back(pairs);
    }
    // A couple of seeded random graphs on top of the fixed ones.
    std::mt19937 rng(7);
    for (int round = 0; round < 6; ++round) {
        ColoredGraph g;
        g.num_colors = 2 + static_cast<int>(rng() % 2);
        g.num_vertices = g.num_colors + static_cast<int>(rng() % 3);
        for (int v = 0; v < g.num_vertices; ++v)
            g.color.push_back(v % g.num_colors);
        for (int u = 0; u < g.num_vertices; ++u)
            for (int v = u + 1; v < g.num_vertices; ++v)
                if (g.color[u] != g.color[v] && rng() % 2 == 0) g.edges.push_back({u, v});
        graphs.push_back(g);
    }

    int yes = 0, no = 0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const ColoredGraph& g = graphs[gi];
        bool expected =
            has_multicolored_clique(g.num_vertices, g.num_colors, g.color, g.edges);
        for (CliqueVariant variant : {CliqueVariant::CompoundCount,
                                      CliqueVariant::MethodSize, CliqueVariant::Depth}) {
            for (Query q : {Query::Exists, Query::Executable, Query::Reach}) {
                CAPTURE(gi);
                CAPTURE(static_cast<int>(variant));
                CAPTURE(static_cast<int>(q));
                PrimitiveInstance inst = gen_clique(g, variant, q);
                CompoundVerdict out = solve_compound(inst);
                REQUIRE(out.verdict.yes == expected);
                if (expected) {
                    REQUIRE(out.decomposition.has_value());
                    PrimitiveInstance leaf = inst;
                    leaf.network = *out.decomposition;
                    REQUIRE(witness_ok(leaf, out.verdict));
                }
                (expected ? yes : no)++;
            }
        }
    }
    CHECK(yes >= 27);
    CHECK(no >= 27);
}

TEST_CASE("random instances are deterministic per seed") {
    RandomSpec spec;
    spec.num_tasks = 7;
    spec.num_props = 4;
    spec.num_actions = 3;
    spec.shape = RandomShape::RandomDag;
    spec.density = 0.4;
    for (Query q : {Query::Verify, Query::Exists, Query::Executable, Query::Reach}) {
        spec.query = q;
        for (std::uint64_t seed : {1ull, 42ull, 987654321ull}) {
            PrimitiveInstance a = gen_random(seed, spec);
            PrimitiveInstance b = gen_random(seed, spec);
            CHECK(save_instance(a) == save_instance(b));
        }
    }
    // Different seeds give different draws somewhere across the sweep.
    bool any_difference = false;
    for (std::uint64_t seed = 0; seed < 8 && !any_difference; ++seed)
        any_difference = save_instance(gen_random(seed, spec)) !=
                         save_instance(gen_random(seed + 1, spec));
    CHECK(any_difference);
}

TEST_CASE("random instance shapes") {
    RandomSpec spec;
    spec.num_tasks = 9;
    spec.query = Query::Exists;

    spec.shape = RandomShape::Antichain;
    CHECK(gen_random(3, spec).network.cover_arcs().empty());

    spec.shape = RandomShape::Chains;
    spec.width = 3;
    {
        TaskNetwork tn = gen_random(4, spec).network;
        OrderMeasures om = measures(tn);
        CHECK(om.width == 3); // three chains of three tasks, none isolated
        for (auto [a, b] : tn.cover_arcs()) CHECK(a % 3 == b % 3);
    }

    spec.shape = RandomShape::StarForest;
    {
        TaskNetwork tn = gen_random(5, spec).network;
        // Every task has at most one predecessor and chains have length <= 1.
        for (int t = 0; t < tn.size(); ++t)
            CHECK(tn.predecessors(t).count() <= 1);
        for (auto [a, b] : tn.cover_arcs()) CHECK(tn.predecessors(a).count() == 0);
    }

    spec.shape = RandomShape::RandomDag;
    spec.density = 0.0;
    CHECK(gen_random(6, spec).network.cover_arcs().empty());
    spec.density = 1.0;
    {
        TaskNetwork tn = gen_random(7, spec).network;
        OrderMeasures om = measures(tn);
        CHECK(om.width == 1); // a complete order is a single chain
    }

    spec.num_actions = 0;
    CHECK_THROWS_AS(gen_random(1, spec), Error);
}

TEST_CASE("random query payloads have the right shape") {
    RandomSpec spec;
    spec.num_tasks = 6;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        spec.query = Query::Verify;
        PrimitiveInstance v = gen_random(seed, spec);
        CHECK(v.plan.size() == 6);

        spec.query = Query::Executable;
        PrimitiveInstance e = gen_random(seed, spec);
        int total = 0;
        for (const auto& [a, c] : e.demand) {
            CHECK(c >= 1);
            total += c;
        }
        CHECK(total >= 1);
        CHECK(total <= 3);

        spec.query = Query::Reach;
        PrimitiveInstance r = gen_random(seed, spec);
        CHECK(r.goal.size() == r.domain.num_propositions());
    }
}
