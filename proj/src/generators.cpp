#include "htn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace htn {

namespace {

void check_word(const std::string& w) {
    for (char c : w)
        if (c != 'a' && c != 'b')
            throw Error("words must use the alphabet {a, b}; got '" + std::string(1, c) + "'");
}

} // namespace

PrimitiveInstance gen_shuffle_verification(const std::vector<std::string>& parts,
                                           const std::string& target) {
    check_word(target);
    for (const std::string& p : parts) check_word(p);

    Domain d({}, {{"a", {}, {}, {}}, {"b", {}, {}, {}}});
    std::vector<std::string> names, labels;
    std::vector<std::pair<int, int>> arcs;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = 0; j < parts[i].size(); ++j) {
            names.push_back("p" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
            labels.push_back(std::string(1, parts[i][j]));
            if (j > 0) {
                int id = static_cast<int>(names.size()) - 1;
                arcs.emplace_back(id - 1, id);
            }
        }
    }
    PrimitiveInstance inst;
    inst.domain = d;
    inst.network = TaskNetwork(names, labels, arcs);
    inst.s0 = d.make_state({});
    inst.query = Query::Verify;
    for (char c : target) inst.plan.push_back(std::string(1, c));
    inst.goal = Bitset(d.num_propositions());
    return inst;
}

PrimitiveInstance gen_shuffle_state(const std::string& word,
                                    const std::vector<std::string>& parts, Query query) {
    if (query != Query::Reach && query != Query::Executable)
        throw Error("shuffle state instances pose reachability or executability queries");
    check_word(word);
    for (const std::string& p : parts) check_word(p);

    Domain d({"left", "sym_a", "sym_b", "goal"},
             {{"push_a", {"left"}, {"left"}, {"sym_a"}},
              {"push_b", {"left"}, {"left"}, {"sym_b"}},
              {"pop_a", {"sym_a"}, {"sym_a"}, {"left"}},
              {"pop_b", {"sym_b"}, {"sym_b"}, {"left"}},
              {"finish", {"left"}, {"left"}, {"goal"}}});

    std::vector<std::string> names, labels;
    std::vector<std::pair<int, int>> arcs;
    // The word chain: pops in word order, then the closing task.
    for (std::size_t j = 0; j < word.size(); ++j) {
        names.push_back("u" + std::to_string(j + 1));
        labels.push_back(std::string("pop_") + word[j]);
        if (j > 0) {
            int id = static_cast<int>(names.size()) - 1;
            arcs.emplace_back(id - 1, id);
        }
    }
    names.push_back("t_g");
    labels.push_back("finish");
    int goal_task = static_cast<int>(names.size()) - 1;
    if (goal_task > 0 && !word.empty()) arcs.emplace_back(goal_task - 1, goal_task);
    // One chain of pushes per part; its last task precedes the closing task.
    for (std::size_t i = 0; i < parts.size(); ++i) {
        int first = static_cast<int>(names.size());
        for (std::size_t j = 0; j < parts[i].size(); ++j) {
            names.push_back("v" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
            labels.push_back(std::string("push_") + parts[i][j]);
            if (j > 0) {
                int id = static_cast<int>(names.size()) - 1;
                arcs.emplace_back(id - 1, id);
            }
        }
        int last = static_cast<int>(names.size()) - 1;
        if (last >= first) arcs.emplace_back(last, goal_task);
    }

    PrimitiveInstance inst;
    inst.domain = d;
    inst.network = TaskNetwork(names, labels, arcs);
    inst.s0 = d.make_state({"left"});
    inst.query = query;
    if (query == Query::Reach) {
        inst.goal = d.make_state({"goal"});
    } else {
        inst.demand["finish"] = 1;
        inst.goal = Bitset(d.num_propositions());
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Multicolored clique.
// ---------------------------------------------------------------------------

PrimitiveInstance gen_clique(const ColoredGraph& graph, CliqueVariant variant,
                             Query query) {
    int n = graph.num_vertices, k = graph.num_colors;
    if (static_cast<int>(graph.color.size()) != n)
        throw ImproperColoring("need one color per vertex");
    for (int v = 0; v < n; ++v)
        if (graph.color[v] < 0 || graph.color[v] >= k)
            throw ImproperColoring("vertex " + std::to_string(v) + " has color " +
                                   std::to_string(graph.color[v]) + " outside 0.." +
                                   std::to_string(k - 1));
    std::set<std::pair<int, int>> seen_edges;
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : graph.edges) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw ImproperColoring("edge endpoint out of range");
        if (graph.color[u] == graph.color[v])
            throw ImproperColoring("edge " + std::to_string(u) + "-" + std::to_string(v) +
                                   " joins two vertices of color " +
                                   std::to_string(graph.color[u]));
        if (!seen_edges.insert({u, v}).second)
            throw Error("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
        edges.emplace_back(u, v);
    }
    int m = static_cast<int>(edges.size());

    // Propositions: one token and one picked-marker per color, one marker per
    // picked vertex, one marker per connected color pair, and the final goal.
    std::vector<std::string> props;
    for (int c = 0; c < k; ++c) props.push_back("color_" + std::to_string(c));
    for (int c = 0; c < k; ++c) props.push_back("picked_" + std::to_string(c));
    for (int v = 0; v < n; ++v) props.push_back("vertex_" + std::to_string(v));
    for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = c1 + 1; c2 < k; ++c2)
            props.push_back("edge_" + std::to_string(c1) + "_" + std::to_string(c2));
    props.push_back("goal");

    std::vector<ActionDef> actions;
    for (int v = 0; v < n; ++v) {
        std::string c = std::to_string(graph.color[v]);
        actions.push_back({"pick_v" + std::to_string(v), {"color_" + c}, {"color_" + c},
                           {"vertex_" + std::to_string(v), "picked_" + c}});
    }
    for (auto [u, v] : edges) {
        int c1 = std::min(graph.color[u], graph.color[v]);
        int c2 = std::max(graph.color[u], graph.color[v]);
        actions.push_back({"pick_e" + std::to_string(u) + "_" + std::to_string(v),
                           {"vertex_" + std::to_string(u), "vertex_" + std::to_string(v)},
                           {},
                           {"edge_" + std::to_string(c1) + "_" + std::to_string(c2)}});
    }
    actions.push_back({"noop", {}, {}, {}});
    // The closing action certifies one picked vertex per color and one picked
    // edge per color pair, i.e. exactly a clique with one vertex of each color.
    std::vector<std::string> closing_pre;
    for (int c = 0; c < k; ++c) closing_pre.push_back("picked_" + std::to_string(c));
    for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = c1 + 1; c2 < k; ++c2)
            closing_pre.push_back("edge_" + std::to_string(c1) + "_" + std::to_string(c2));
    actions.push_back({"assemble", closing_pre, {}, {"goal"}});

    // Compound names: one choice per vertex and per edge.
    std::vector<std::string> compounds;
    for (int v = 0; v < n; ++v) compounds.push_back("V" + std::to_string(v));
    for (auto [u, v] : edges)
        compounds.push_back("E" + std::to_string(u) + "_" + std::to_string(v));
    if (variant == CliqueVariant::MethodSize) compounds.push_back("root");

    Domain d(props, actions, compounds);

    auto single = [](const std::string& label) {
        return TaskNetwork({"x"}, {label}, {});
    };
    auto pick_name = [&](int i) {
        // i < n: vertex choice; otherwise edge choice.
        if (i < n) return "pick_v" + std::to_string(i);
        auto [u, v] = edges[i - n];
        return "pick_e" + std::to_string(u) + "_" + std::to_string(v);
    };
    auto compound_name = [&](int i) {
        if (i < n) return "V" + std::to_string(i);
        auto [u, v] = edges[i - n];
        return "E" + std::to_string(u) + "_" + std::to_string(v);
    };

    PrimitiveInstance inst;
    int total = n + m;
    if (variant == CliqueVariant::Depth) {
        // Each choice chains to the next compound; the last pairs with the
        // closing task. Methods hold two tasks, the network one compound.
        for (int i = 0; i < total; ++i) {
            bool last = (i == total - 1);
            std::string next = last ? "assemble" : compound_name(i + 1);
            std::string tail_name = last ? "t_g" : "next";
            d.add_method(compound_name(i),
                         TaskNetwork({"choice", tail_name}, {pick_name(i), next}, {{0, 1}}));
            d.add_method(compound_name(i),
                         TaskNetwork({"choice", tail_name}, {"noop", next}, {{0, 1}}));
        }
        inst.network = total > 0
                           ? TaskNetwork({"c1"}, {compound_name(0)}, {})
                           : TaskNetwork({"t_g"}, {"assemble"}, {});
    } else {
        for (int i = 0; i < total; ++i) {
            d.add_method(compound_name(i), single(pick_name(i)));
            d.add_method(compound_name(i), single("noop"));
        }
        // Base chain: all choices in order, then the closing task.
        std::vector<std::string> names, labels;
        std::vector<std::pair<int, int>> arcs;
        for (int i = 0; i < total; ++i) {
            names.push_back("c" + std::to_string(i + 1));
            labels.push_back(compound_name(i));
            if (i > 0) arcs.emplace_back(i - 1, i);
        }
        names.push_back("t_g");
        labels.push_back("assemble");
        if (total > 0) arcs.emplace_back(total - 1, total);
        TaskNetwork base(names, labels, arcs);
        if (variant == CliqueVariant::MethodSize) {
            d.add_method("root", base);
            inst.network = TaskNetwork({"r"}, {"root"}, {});
        } else {
            inst.network = base;
        }
    }

    inst.domain = d;
    std::vector<std::string> initial;
    for (int c = 0; c < k; ++c) initial.push_back("color_" + std::to_string(c));
    inst.s0 = d.make_state(initial);
    inst.query = query;
    inst.goal = Bitset(d.num_propositions());
    if (query == Query::Reach) inst.goal = d.make_state({"goal"});
    if (query == Query::Executable) inst.demand["assemble"] = 1;
    return inst;
}

// ---------------------------------------------------------------------------
// Seeded random instances.
// ---------------------------------------------------------------------------

namespace {

// Thin wrapper that derives bounded draws from the raw 64-bit stream itself,
// so results do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int below(int n) { // uniform in [0, n)
        std::uint64_t un = static_cast<std::uint64_t>(n);
        std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % un + 1) % un;
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
        for (;;) {
            std::uint64_t x = gen_();
            if (x <= limit) return static_cast<int>(x % un);
        }
    }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); } // inclusive
    double real() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }
    bool chance(double p) { return real() < p; }

private:
    std::mt19937_64 gen_;
};

} // namespace

PrimitiveInstance gen_random(std::uint64_t seed, const RandomSpec& spec) {
    if (spec.num_tasks < 0 || spec.num_props < 0 || spec.num_actions < 1)
        throw Error("RandomSpec needs nonnegative sizes and at least one action");
    Rng rng(seed);

    std::vector<std::string> props;
    for (int i = 0; i < spec.num_props; ++i) props.push_back("p" + std::to_string(i));
    std::vector<ActionDef> actions;
    for (int i = 0; i < spec.num_actions; ++i) {
        ActionDef a;
        a.name = "a" + std::to_string(i);
        for (const std::string& p : props) {
            if (rng.chance(0.25)) a.pre.push_back(p);
            if (rng.chance(0.25)) a.del.push_back(p);
            if (rng.chance(0.25)) a.add.push_back(p);
        }
        actions.push_back(std::move(a));
    }
    Domain d(props, actions);

    int n = spec.num_tasks;
    std::vector<std::string> names, labels;
    for (int i = 0; i < n; ++i) {
        names.push_back("t" + std::to_string(i + 1));
        labels.push_back("a" + std::to_string(rng.below(spec.num_actions)));
    }
    std::vector<std::pair<int, int>> arcs;
    switch (spec.shape) {
        case RandomShape::Antichain:
            break;
        case RandomShape::Chains: {
            int w = std::max(1, spec.width);
            std::vector<int> last(w, -1);
            for (int i = 0; i < n; ++i) {
                int c = i % w;
                if (last[c] != -1) arcs.emplace_back(last[c], i);
                last[c] = i;
            }
            break;
        }
        case RandomShape::StarForest: {
            std::vector<int> centers;
            for (int i = 0; i < n; ++i) {
                if (centers.empty() || rng.chance(0.4)) {
                    centers.push_back(i);
                } else {
                    arcs.emplace_back(centers[rng.below(static_cast<int>(centers.size()))], i);
                }
            }
            break;
        }
        case RandomShape::RandomDag:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng.chance(spec.density)) arcs.emplace_back(i, j);
            break;
    }

    PrimitiveInstance inst;
    inst.domain = d;
    inst.network = TaskNetwork(names, labels, arcs);
    Bitset s0(d.num_propositions());
    for (int i = 0; i < d.num_propositions(); ++i)
        if (rng.chance(0.5)) s0.set(i);
    inst.s0 = s0;
    inst.query = spec.query;
    inst.goal = Bitset(d.num_propositions());

    switch (spec.query) {
        case Query::Verify: {
            if (rng.chance(0.5)) {
                // Labels of a uniformly chosen random linearization.
                Bitset used(n);
                for (int step = 0; step < n; ++step) {
                    std::vector<int> ready;
                    for (int t = 0; t < n; ++t)
                        if (!used.test(t) && inst.network.predecessors(t).is_subset_of(used))
                            ready.push_back(t);
                    int t = ready[rng.below(static_cast<int>(ready.size()))];
                    used.set(t);
                    inst.plan.push_back(labels[t]);
                }
            } else {
                for (int i = 0; i < n; ++i)
                    inst.plan.push_back("a" + std::to_string(rng.below(spec.num_actions)));
            }
            break;
        }
        case Query::Reach:
            for (int i = 0; i < d.num_propositions(); ++i)
                if (rng.chance(0.3)) inst.goal.set(i);
            break;
        case Query::Executable: {
            int picks = rng.between(1, std::max(1, std::min(3, n)));
            for (int i = 0; i < picks; ++i)
                inst.demand["a" + std::to_string(rng.below(spec.num_actions))]++;
            break;
        }
        case Query::Exists:
            break;
    }
    return inst;
}

} // namespace htn
