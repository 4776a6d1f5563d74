#include "htn/stategraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace htn {

int StateGraph::index_of(const Bitset& s) const {
    for (int i = 0; i < num_states(); ++i)
        if (states[i] == s) return i;
    return -1;
}

int StateGraph::target(int s, int a) const {
    for (auto [action, to] : arcs[s])
        if (action == a) return to;
    return -1;
}

StateGraph build_state_graph(const Domain& d, const Bitset& s0, int state_cap) {
    StateGraph g;
    std::map<Bitset, int> index;
    g.states.push_back(s0);
    index.emplace(s0, 0);
    std::deque<int> queue{0};
    g.arcs.emplace_back();
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int a = 0; a < d.num_actions(); ++a) {
            if (!is_executable(d, a, g.states[s])) continue;
            Bitset t = apply_effects(d, a, g.states[s]);
            auto [it, inserted] = index.emplace(t, g.num_states());
            if (inserted) {
                if (g.num_states() >= state_cap)
                    throw StateSpaceExceeded("state transition graph exceeds cap of " +
                                             std::to_string(state_cap) + " states");
                g.states.push_back(t);
                g.arcs.emplace_back();
                queue.push_back(it->second);
            }
            g.arcs[s].emplace_back(a, it->second);
        }
    }
    return g;
}

std::string to_dot(const Domain& d, const StateGraph& g) {
    std::ostringstream out;
    out << "digraph stg {\n";
    out << "  rankdir=LR;\n";
    for (int s = 0; s < g.num_states(); ++s) {
        out << "  s" << s << " [label=\"{";
        auto names = d.state_names(g.states[s]);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out << ",";
            out << names[i];
        }
        out << "}\"";
        if (s == 0) out << ", penwidth=2";
        out << "];\n";
    }
    for (int s = 0; s < g.num_states(); ++s)
        for (auto [a, t] : g.arcs[s])
            out << "  s" << s << " -> s" << t << " [label=\"" << d.actions()[a].name
                << "\"];\n";
    out << "}\n";
    return out.str();
}

EquivClasses action_equivalence_classes(const Domain& d, const StateGraph& g) {
    EquivClasses eq;
    eq.class_of_action.assign(d.num_actions(), -1);
    std::map<std::vector<int>, int> by_signature;
    for (int a = 0; a < d.num_actions(); ++a) {
        std::vector<int> sig(g.num_states(), -1);
        for (int s = 0; s < g.num_states(); ++s) sig[s] = g.target(s, a);
        auto [it, inserted] = by_signature.emplace(sig, static_cast<int>(eq.classes.size()));
        if (inserted) {
            eq.classes.emplace_back();
            eq.signature.push_back(sig);
        }
        eq.class_of_action[a] = it->second;
        eq.classes[it->second].push_back(a);
    }
    return eq;
}

std::optional<bool> reduce_R0(const TaskNetwork& tn,
                              const std::map<std::string, int>& demand) {
    auto by_label = tn.tasks_by_label();
    long long total = 0;
    for (const auto& [action, need] : demand) {
        total += need;
        auto it = by_label.find(action);
        int supply = it == by_label.end() ? 0 : static_cast<int>(it->second.size());
        if (need > supply) return false;
    }
    if (total > tn.size()) return false;
    return std::nullopt;
}

namespace {

// Interchangeability of two actions' task positions: every task of either
// action has identical ≺-predecessor and ≺-successor sets.
bool positions_interchangeable(const TaskNetwork& tn, const std::vector<int>& t1s,
                               const std::vector<int>& t2s) {
    for (int t1 : t1s) {
        for (int t2 : t2s) {
            if (!(tn.predecessors(t1) == tn.predecessors(t2))) return false;
            if (!(tn.successors(t1) == tn.successors(t2))) return false;
        }
    }
    return true;
}

} // namespace

R1Result reduce_R1(const Domain& d, const TaskNetwork& tn,
                   const std::map<std::string, int>& demand, const EquivClasses& eq) {
    std::vector<std::string> labels = tn.labels;
    std::map<std::string, int> dem = demand;
    // rep -> full original group (rep included once it absorbs something)
    std::map<std::string, std::vector<std::string>> groups;

    auto relevant_actions = [&]() {
        std::map<std::string, std::vector<int>> tasks_of;
        for (int t = 0; t < static_cast<int>(labels.size()); ++t)
            tasks_of[labels[t]].push_back(t);
        for (const auto& [a, need] : dem)
            if (need > 0) tasks_of.try_emplace(a);
        return tasks_of;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        auto tasks_of = relevant_actions();
        for (auto it1 = tasks_of.begin(); it1 != tasks_of.end() && !changed; ++it1) {
            for (auto it2 = std::next(it1); it2 != tasks_of.end() && !changed; ++it2) {
                const std::string& a1 = it1->first;
                const std::string& a2 = it2->first;
                if (eq.class_of_action[d.action_index(a1)] !=
                    eq.class_of_action[d.action_index(a2)])
                    continue;
                if (!positions_interchangeable(tn, it1->second, it2->second)) continue;
                for (int t : it2->second) labels[t] = a1;
                dem[a1] += dem.count(a2) ? dem[a2] : 0;
                dem.erase(a2);
                if (dem.count(a1) && dem[a1] == 0) dem.erase(a1);
                auto& grp = groups[a1];
                if (grp.empty()) grp.push_back(a1);
                auto absorbed = groups.find(a2);
                if (absorbed != groups.end()) {
                    grp.insert(grp.end(), absorbed->second.begin(), absorbed->second.end());
                    groups.erase(absorbed);
                } else {
                    grp.push_back(a2);
                }
                changed = true;
            }
        }
    }

    R1Result out{TaskNetwork(tn.names, labels, tn.cover_arcs()), std::move(dem), {}};
    for (auto& [rep, members] : groups) {
        std::sort(members.begin(), members.end());
        out.merged_groups.push_back(members);
    }
    return out;
}

StrongClasses strong_classes(const TaskNetwork& tn, const EquivClasses& eq,
                             const std::vector<int>& action_of_task,
                             const std::vector<int>& cover_order,
                             const Bitset& usable) {
    int m = static_cast<int>(cover_order.size());
    StrongClasses out;
    out.class_of_task.assign(tn.size(), -1);
    std::map<std::tuple<int, int, int>, int> key_to_class;
    for (int t : usable.members()) {
        int lo = 0, hi = m;
        for (int i = 0; i < m; ++i) {
            int v = cover_order[i];
            if (tn.precedes(v, t)) lo = std::max(lo, i + 1);
            if (tn.precedes(t, v)) hi = std::min(hi, i);
        }
        if (lo > hi) continue; // unusable under this cover order
        std::tuple<int, int, int> key{eq.class_of_action[action_of_task[t]], lo, hi};
        auto [it, inserted] = key_to_class.emplace(key, static_cast<int>(out.classes.size()));
        if (inserted) {
            StrongClass c;
            c.equiv_class = std::get<0>(key);
            c.lo = lo;
            c.hi = hi;
            out.classes.push_back(c);
        }
        out.classes[it->second].tasks.push_back(t);
        out.classes[it->second].count_by_action[tn.labels[t]]++;
        out.class_of_task[t] = it->second;
    }
    return out;
}

AugmentedGraph augmented_graph(const StateGraph& g, const EquivClasses& eq,
                               const StrongClasses& sc) {
    AugmentedGraph ag;
    ag.arcs.assign(g.num_states(), {});
    for (int s = 0; s < g.num_states(); ++s) {
        for (int c = 0; c < static_cast<int>(sc.classes.size()); ++c) {
            int to = eq.signature[sc.classes[c].equiv_class][s];
            if (to != -1) ag.arcs[s].emplace_back(c, to);
        }
    }
    return ag;
}

} // namespace htn
