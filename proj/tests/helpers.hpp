#ifndef HTN_TESTS_HELPERS_HPP
#define HTN_TESTS_HELPERS_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "htn/core.hpp"
#include "htn/solvers.hpp"

namespace htn_tests {

// Four-task diamond example used across the suite: t1 before t2 and t3, both
// before t4; labels a2, a1, a3, a1 over two propositions. Exactly two of its
// linearizations execute from the empty state.
inline htn::Domain diamond_domain() {
    return htn::Domain({"p1", "p2"},
                       {{"a1", {}, {}, {"p1"}},
                        {"a2", {}, {}, {"p2"}},
                        {"a3", {"p2"}, {"p1"}, {}}});
}

inline htn::TaskNetwork diamond_network() {
    return htn::TaskNetwork({"t1", "t2", "t3", "t4"}, {"a2", "a1", "a3", "a1"},
                            {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

inline htn::PrimitiveInstance diamond_instance(htn::Query q) {
    htn::PrimitiveInstance inst;
    inst.domain = diamond_domain();
    inst.network = diamond_network();
    inst.s0 = htn::Bitset(2);
    inst.query = q;
    inst.goal = htn::Bitset(2);
    return inst;
}

// All distinct label sequences over the network's label multiset.
inline std::vector<std::vector<std::string>> label_permutations(const htn::TaskNetwork& tn) {
    std::vector<std::string> labels = tn.labels;
    std::sort(labels.begin(), labels.end());
    std::vector<std::vector<std::string>> out;
    do {
        out.push_back(labels);
    } while (std::next_permutation(labels.begin(), labels.end()));
    return out;
}

// Checks that a yes-verdict's witness really answers the query on `inst`.
inline bool witness_ok(const htn::PrimitiveInstance& inst, const htn::Verdict& v) {
    if (!v.yes) return false;
    const htn::Domain& d = inst.domain;
    const htn::TaskNetwork& tn = inst.network;
    bool require_full = inst.query == htn::Query::Verify || inst.query == htn::Query::Exists;
    if (!htn::is_solution(d, tn, inst.s0, v.witness_tasks, require_full)) return false;
    // Witness plan must be the labels of the witness tasks.
    if (v.witness_plan.size() != v.witness_tasks.size()) return false;
    for (std::size_t i = 0; i < v.witness_tasks.size(); ++i)
        if (tn.labels[v.witness_tasks[i]] != v.witness_plan[i]) return false;
    switch (inst.query) {
        case htn::Query::Verify:
            return v.witness_plan == inst.plan;
        case htn::Query::Exists:
            return true;
        case htn::Query::Executable: {
            std::map<std::string, int> counts;
            for (const std::string& a : v.witness_plan) counts[a]++;
            for (const auto& [a, need] : inst.demand)
                if (counts[a] < need) return false;
            return true;
        }
        case htn::Query::Reach: {
            htn::PlanResult r = htn::execute_plan(d, v.witness_plan, inst.s0);
            return r.executable && inst.goal.is_subset_of(r.final_state);
        }
    }
    return false;
}

// Reference implementation: is `target` an interleaving of `parts`? Dynamic
// programming over per-part consumption vectors.
inline bool shuffle_contains(const std::vector<std::string>& parts,
                             const std::string& target) {
    std::size_t total = 0;
    for (const std::string& p : parts) total += p.size();
    if (total != target.size()) return false;
    std::set<std::vector<std::size_t>> frontier{std::vector<std::size_t>(parts.size(), 0)};
    for (char c : target) {
        std::set<std::vector<std::size_t>> next;
        for (const auto& pos : frontier)
            for (std::size_t i = 0; i < parts.size(); ++i)
                if (pos[i] < parts[i].size() && parts[i][pos[i]] == c) {
                    std::vector<std::size_t> np = pos;
                    np[i]++;
                    next.insert(std::move(np));
                }
        frontier = std::move(next);
        if (frontier.empty()) return false;
    }
    return true;
}

// Reference implementation: does the colored graph contain a clique with one
// vertex of every color?
inline bool has_multicolored_clique(int num_vertices, int num_colors,
                                    const std::vector<int>& color,
                                    const std::vector<std::pair<int, int>>& edges) {
    std::set<std::pair<int, int>> edge_set;
    for (auto [u, v] : edges) edge_set.insert({std::min(u, v), std::max(u, v)});
    std::vector<std::vector<int>> by_color(num_colors);
    for (int v = 0; v < num_vertices; ++v) by_color[color[v]].push_back(v);
    std::vector<int> pick(num_colors, -1);
    std::function<bool(int)> go = [&](int c) -> bool {
        if (c == num_colors) return true;
        for (int v : by_color[c]) {
            bool ok = true;
            for (int c2 = 0; c2 < c && ok; ++c2) {
                int u = pick[c2];
                if (!edge_set.count({std::min(u, v), std::max(u, v)})) ok = false;
            }
            if (!ok) continue;
            pick[c] = v;
            if (go(c + 1)) return true;
        }
        return false;
    };
    return go(0);
}

} // namespace htn_tests

#endif
