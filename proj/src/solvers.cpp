#include "htn/solvers.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "htn/ilp.hpp"
#include "htn/oracle.hpp"
#include "htn/ordergraph.hpp"
#include "htn/stategraph.hpp"

namespace htn {

std::string query_name(Query q) {
    switch (q) {
        case Query::Verify: return "verify";
        case Query::Exists: return "exists";
        case Query::Executable: return "executable";
        case Query::Reach: return "reach";
    }
    return "?";
}

Query query_from_name(const std::string& name) {
    if (name == "verify") return Query::Verify;
    if (name == "exists") return Query::Exists;
    if (name == "executable") return Query::Executable;
    if (name == "reach") return Query::Reach;
    throw ParseError("unknown query type: " + name);
}

namespace {

struct Budget {
    long long left;
    void tick(long long cost = 1) {
        left -= cost;
        if (left < 0) throw BudgetExceeded("solver budget exhausted");
    }
};

std::vector<int> actions_of_tasks(const Domain& d, const TaskNetwork& tn) {
    std::vector<int> a(tn.size());
    for (int t = 0; t < tn.size(); ++t) a[t] = d.action_index(tn.labels[t]);
    return a;
}

bool plan_matches_label_multiset(const Domain& d, const TaskNetwork& tn,
                                 const std::vector<std::string>& plan) {
    if (static_cast<int>(plan.size()) != tn.size()) return false;
    std::vector<int> have(d.num_actions(), 0), want(d.num_actions(), 0);
    for (const std::string& l : tn.labels) have[d.action_index(l)]++;
    for (const std::string& a : plan) want[d.action_index(a)]++;
    return have == want;
}

Verdict no_verdict(const std::string& route) {
    Verdict v;
    v.stats.route = route;
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Plan Verification via chain DP.
// ---------------------------------------------------------------------------

Verdict verify_gpow(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                    const std::vector<std::string>& plan, const SolveOptions& opts) {
    Verdict out;
    out.stats.route = "gpow-dp";
    int n = tn.size();
    if (!plan_matches_label_multiset(d, tn, plan)) return out;
    if (!execute_plan(d, plan, s0).executable) return out;
    if (n == 0) {
        out.yes = true;
        return out;
    }

    std::vector<std::vector<int>> chains = min_chain_decomposition(tn);
    int w = static_cast<int>(chains.size());
    std::vector<int> plan_action(n);
    for (int i = 0; i < n; ++i) plan_action[i] = d.action_index(plan[i]);
    std::vector<int> action_of = actions_of_tasks(d, tn);

    // Isolated tasks, grouped by action.
    std::vector<std::vector<int>> iso_of_action(d.num_actions());
    for (int t : tn.isolated_tasks()) iso_of_action[action_of[t]].push_back(t);

    // req[t][j]: how much of chain j must be consumed before t is available.
    std::vector<std::vector<int>> req(n, std::vector<int>(w, 0));
    for (int j = 0; j < w; ++j)
        for (int pos = 0; pos < static_cast<int>(chains[j].size()); ++pos) {
            int t = chains[j][pos];
            for (int s : tn.successors(t).members())
                req[s][j] = std::max(req[s][j], pos + 1);
        }
    // prefix_count[j][pos][a] folded as on-demand lambda: occurrences of action
    // a among the first pos tasks of chain j.
    std::vector<std::vector<std::vector<int>>> chain_prefix(w);
    for (int j = 0; j < w; ++j) {
        chain_prefix[j].assign(chains[j].size() + 1, std::vector<int>());
        std::vector<int> acc(d.num_actions(), 0);
        chain_prefix[j][0] = acc;
        for (int pos = 0; pos < static_cast<int>(chains[j].size()); ++pos) {
            acc[action_of[chains[j][pos]]]++;
            chain_prefix[j][pos + 1] = acc;
        }
    }
    std::vector<int> plan_prefix_count; // occurrences of plan_action[i] before i
    {
        std::vector<int> acc(d.num_actions(), 0);
        plan_prefix_count.resize(n);
        for (int i = 0; i < n; ++i) {
            plan_prefix_count[i] = acc[plan_action[i]];
            acc[plan_action[i]]++;
        }
    }

    struct Entry {
        std::vector<int> h;
        int prev = -1;
        int moved_task = -1; // -1 = isolated move
    };
    std::vector<Entry> arena;
    std::vector<std::map<std::vector<int>, int>> level(n + 1);
    Budget budget{opts.node_budget};
    arena.push_back({std::vector<int>(w, 0), -1, -1});
    level[0].emplace(arena[0].h, 0);

    for (int i = 0; i < n; ++i) {
        int a = plan_action[i];
        for (const auto& [h, idx] : level[i]) {
            auto try_insert = [&](std::vector<int> nh, int task) {
                auto it = level[i + 1].find(nh);
                if (it != level[i + 1].end()) return;
                budget.tick();
                arena.push_back({nh, idx, task});
                level[i + 1].emplace(std::move(nh), static_cast<int>(arena.size()) - 1);
            };
            for (int j = 0; j < w; ++j) {
                if (h[j] >= static_cast<int>(chains[j].size())) continue;
                int t = chains[j][h[j]];
                if (action_of[t] != a) continue;
                bool ok = true;
                for (int j2 = 0; j2 < w && ok; ++j2)
                    if (req[t][j2] > h[j2]) ok = false;
                if (!ok) continue;
                std::vector<int> nh = h;
                nh[j]++;
                try_insert(std::move(nh), t);
            }
            // Isolated move: the number of label-a isolated tasks already used
            // is fixed by the plan prefix minus the chain contribution.
            int chain_used_a = 0;
            for (int j = 0; j < w; ++j) chain_used_a += chain_prefix[j][h[j]][a];
            int iso_used_a = plan_prefix_count[i] - chain_used_a;
            if (iso_used_a < static_cast<int>(iso_of_action[a].size()))
                try_insert(h, -1);
        }
        if (level[i + 1].empty()) return out;
    }

    std::vector<int> full(w);
    for (int j = 0; j < w; ++j) full[j] = static_cast<int>(chains[j].size());
    auto it = level[n].find(full);
    if (it == level[n].end()) return out;

    // Reconstruct: chain moves carry their task; isolated moves get the next
    // unused isolated task of the plan action at that position.
    std::vector<int> moves(n, -1);
    int cur = it->second;
    for (int i = n - 1; i >= 0; --i) {
        moves[i] = arena[cur].moved_task;
        cur = arena[cur].prev;
    }
    std::vector<int> iso_next(d.num_actions(), 0);
    out.witness_tasks.resize(n);
    for (int i = 0; i < n; ++i) {
        if (moves[i] != -1) {
            out.witness_tasks[i] = moves[i];
        } else {
            int a = plan_action[i];
            out.witness_tasks[i] = iso_of_action[a][iso_next[a]++];
        }
    }
    for (int t : out.witness_tasks) out.witness_plan.push_back(tn.labels[t]);
    out.yes = true;
    out.stats.nodes = static_cast<long long>(arena.size());
    return out;
}

// ---------------------------------------------------------------------------
// Plan Verification via vertex cover branching.
// ---------------------------------------------------------------------------

Verdict verify_vcn(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                   const std::vector<std::string>& plan, const SolveOptions& opts) {
    Verdict out;
    out.stats.route = "vcn";
    int n = tn.size();
    if (!plan_matches_label_multiset(d, tn, plan)) return out;
    if (!execute_plan(d, plan, s0).executable) return out;
    if (n == 0) {
        out.yes = true;
        return out;
    }
    std::vector<int> action_of = actions_of_tasks(d, tn);
    std::vector<int> plan_action(n);
    for (int i = 0; i < n; ++i) plan_action[i] = d.action_index(plan[i]);

    std::vector<int> cover = min_vertex_cover(tn);
    int m = static_cast<int>(cover.size());
    std::vector<bool> in_cover(n, false);
    for (int v : cover) in_cover[v] = true;

    Budget budget{opts.node_budget};

    // Greedy fill for one cover ordering: earliest-deadline-first among the
    // candidates with the required action. Deadlines are doubled so cover task
    // i can sit between "before cover task i" and "before cover task i+1".
    auto try_order = [&](const std::vector<int>& order) -> bool {
        std::vector<long long> deadline(n, 1LL << 40);
        std::vector<int> cover_pos(n, -1);
        for (int i = 0; i < m; ++i) cover_pos[order[i]] = i;
        for (int t = 0; t < n; ++t) {
            if (in_cover[t]) {
                deadline[t] = 2LL * cover_pos[t] + 1;
                continue;
            }
            for (auto [x, y] : tn.cover_arcs())
                if (x == t && cover_pos[y] >= 0)
                    deadline[t] = std::min(deadline[t], 2LL * (cover_pos[y] + 1));
        }
        std::vector<bool> used(n, false);
        std::vector<int> placed;
        int next_cover = 0;
        Bitset used_set(n);
        for (int i = 0; i < n; ++i) {
            budget.tick();
            int pick = -1;
            for (int t = 0; t < n; ++t) {
                if (used[t] || action_of[t] != plan_action[i]) continue;
                if (in_cover[t] && (next_cover >= m || order[next_cover] != t)) continue;
                if (!tn.predecessors(t).is_subset_of(used_set)) continue;
                if (pick == -1 || deadline[t] < deadline[pick]) pick = t;
            }
            if (pick == -1) return false;
            used[pick] = true;
            used_set.set(pick);
            if (in_cover[pick]) next_cover++;
            placed.push_back(pick);
        }
        out.witness_tasks = placed;
        return true;
    };

    // Enumerate cover orderings consistent with ≺, lexicographic by task id.
    std::vector<int> order;
    std::vector<bool> taken(m, false);
    std::function<bool()> branch = [&]() -> bool {
        if (static_cast<int>(order.size()) == m) {
            budget.tick();
            return try_order(order);
        }
        for (int i = 0; i < m; ++i) {
            if (taken[i]) continue;
            int v = cover[i];
            bool ready = true;
            for (int j = 0; j < m && ready; ++j)
                if (!taken[j] && j != i && tn.precedes(cover[j], v)) ready = false;
            if (!ready) continue;
            taken[i] = true;
            order.push_back(v);
            if (branch()) return true;
            order.pop_back();
            taken[i] = false;
        }
        return false;
    };
    if (branch()) {
        out.yes = true;
        for (int t : out.witness_tasks) out.witness_plan.push_back(tn.labels[t]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cycle machinery shared by the unordered and cover-branching solvers.
// ---------------------------------------------------------------------------

namespace {

// A vertex-simple directed cycle in a labeled multigraph over state indices.
// Arcs are (label, to) pairs; states lists the visited states starting at the
// minimal one, so each cycle is enumerated exactly once.
struct Cycle {
    std::vector<int> states;                // states[i] --arcs[i]--> states[i+1 mod]
    std::vector<int> labels;                // arc labels (action or class ids)
    std::map<int, int> uses;                // label -> multiplicity in the cycle
    Bitset vertex_set;

    bool contains(int s) const { return vertex_set.test(s); }
    int position_of(int s) const {
        for (int i = 0; i < static_cast<int>(states.size()); ++i)
            if (states[i] == s) return i;
        return -1;
    }
};

// All vertex-simple cycles of `adj` (per-state (label,to) lists), rooted at
// their minimal state.
std::vector<Cycle> enumerate_cycles(const std::vector<std::vector<std::pair<int, int>>>& adj,
                                    Budget& budget) {
    int k = static_cast<int>(adj.size());
    std::vector<Cycle> cycles;
    std::vector<int> path_states, path_labels;
    std::vector<bool> on_path(k, false);
    std::function<void(int, int)> dfs = [&](int root, int s) {
        budget.tick();
        for (auto [label, to] : adj[s]) {
            if (to == root) {
                Cycle c;
                c.states = path_states;
                c.labels = path_labels;
                c.labels.push_back(label);
                c.vertex_set = Bitset(k);
                for (int st : c.states) c.vertex_set.set(st);
                for (int l : c.labels) c.uses[l]++;
                cycles.push_back(std::move(c));
            } else if (to > root && !on_path[to]) {
                on_path[to] = true;
                path_states.push_back(to);
                path_labels.push_back(label);
                dfs(root, to);
                path_labels.pop_back();
                path_states.pop_back();
                on_path[to] = false;
            }
        }
    };
    for (int root = 0; root < k; ++root) {
        path_states = {root};
        path_labels = {};
        on_path.assign(k, false);
        on_path[root] = true;
        dfs(root, root);
    }
    return cycles;
}

// Enumerates every subset of `candidates` whose members all connect to the
// base vertex set through shared vertices (directly or via other chosen
// cycles). A candidate joins the subset only when `try_pick` accepts it (and
// records its bookkeeping, undone by `unpick`); rejected picks prune the whole
// superset branch, which is sound whenever rejection is monotone under adding
// more picks. Each surviving subset is reported exactly once, at the leaf
// where no frontier candidate is undecided.
void connected_subsets(const std::vector<const Cycle*>& candidates, const Bitset& base,
                       Budget& budget, const std::function<bool(int)>& try_pick,
                       const std::function<void(int)>& unpick,
                       const std::function<bool(const std::vector<int>&)>& emit) {
    int nc = static_cast<int>(candidates.size());
    std::vector<int> chosen;
    std::vector<int> state(nc, 0); // 0 undecided, 1 chosen, 2 banned
    Bitset region = base;
    std::function<bool()> rec = [&]() -> bool {
        budget.tick();
        int pick = -1;
        for (int i = 0; i < nc; ++i) {
            if (state[i] == 0 && candidates[i]->vertex_set.intersects(region)) {
                pick = i;
                break;
            }
        }
        if (pick == -1) return emit(chosen);
        state[pick] = 2;
        if (!rec()) return false;
        bool cont = true;
        if (try_pick(pick)) {
            state[pick] = 1;
            chosen.push_back(pick);
            Bitset saved = region;
            region |= candidates[pick]->vertex_set;
            cont = rec();
            region = saved;
            chosen.pop_back();
            unpick(pick);
        }
        state[pick] = 0;
        return cont;
    };
    rec();
}

// Splices cycles (with pending multiplicities) into a walk. Emits arc labels
// in execution order; consumes a pending cycle whenever the walk stands on one
// of its vertices. All pending counts must reach zero by the end.
struct Splicer {
    const std::vector<const Cycle*>& cycles;
    std::vector<long long>& pending;
    std::vector<int> emitted;

    void visit(int v) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < cycles.size(); ++i) {
                if (pending[i] <= 0 || !cycles[i]->contains(v)) continue;
                pending[i]--;
                changed = true;
                const Cycle& c = *cycles[i];
                int len = static_cast<int>(c.states.size());
                int start = c.position_of(v);
                for (int step = 0; step < len; ++step) {
                    int idx = (start + step) % len;
                    emitted.push_back(c.labels[idx]);
                    visit(c.states[(idx + 1) % len]);
                }
            }
        }
    }

    void run(int start, const std::vector<std::pair<int, int>>& path_arcs) {
        visit(start);
        for (auto [label, to] : path_arcs) {
            emitted.push_back(label);
            visit(to);
        }
        for (long long p : pending)
            if (p != 0) throw Error("internal: cycle splice left unused traversals");
    }
};

} // namespace

// ---------------------------------------------------------------------------
// State Reachability on unordered networks.
// ---------------------------------------------------------------------------

Verdict reach_antichain(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                        const Bitset& goal, const SolveOptions& opts) {
    if (!tn.cover_arcs().empty())
        throw Error("unordered-network solver called with a nonempty order");
    Verdict out;
    out.stats.route = "antichain";
    StateGraph g = build_state_graph(d, s0, opts.state_cap);
    int k = g.num_states();
    std::vector<int> supply(d.num_actions(), 0);
    for (const std::string& l : tn.labels) supply[d.action_index(l)]++;

    // Keep at most k parallel arcs per state pair, preferring plentiful
    // actions; zero-supply arcs are unusable and dropped first.
    std::vector<std::vector<std::pair<int, int>>> adj(k);
    for (int s = 0; s < k; ++s) {
        std::map<int, std::vector<int>> per_target;
        for (auto [a, t] : g.arcs[s])
            if (supply[a] > 0) per_target[t].push_back(a);
        for (auto& [t, actions] : per_target) {
            std::sort(actions.begin(), actions.end(), [&](int x, int y) {
                if (supply[x] != supply[y]) return supply[x] > supply[y];
                return d.actions()[x].name < d.actions()[y].name;
            });
            if (static_cast<int>(actions.size()) > k) actions.resize(k);
            for (int a : actions) adj[s].emplace_back(a, t);
        }
    }

    Budget budget{opts.node_budget};
    std::vector<bool> visited(k, false);
    std::vector<int> used(d.num_actions(), 0);
    std::vector<int> path_actions;
    std::function<bool(int)> dfs = [&](int s) -> bool {
        budget.tick();
        if (goal.is_subset_of(g.states[s])) return true;
        visited[s] = true;
        for (auto [a, t] : adj[s]) {
            if (visited[t] || used[a] >= supply[a]) continue;
            used[a]++;
            path_actions.push_back(a);
            if (dfs(t)) return true;
            path_actions.pop_back();
            used[a]--;
        }
        visited[s] = false;
        return false;
    };
    if (!dfs(0)) return out;

    out.yes = true;
    std::vector<int> next_task(d.num_actions(), 0);
    auto by_action = tn.tasks_by_label();
    std::vector<std::vector<int>> task_pool(d.num_actions());
    for (auto& [label, ids] : by_action) task_pool[d.action_index(label)] = ids;
    for (int a : path_actions) {
        out.witness_tasks.push_back(task_pool[a][next_task[a]++]);
        out.witness_plan.push_back(d.actions()[a].name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Action Executability on unordered networks.
// ---------------------------------------------------------------------------

Verdict exec_antichain(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       const std::map<std::string, int>& demand,
                       const SolveOptions& opts) {
    if (!tn.cover_arcs().empty())
        throw Error("unordered-network solver called with a nonempty order");
    Verdict out;
    out.stats.route = "antichain";
    if (reduce_R0(tn, demand) == std::optional<bool>(false)) return out;

    StateGraph g = build_state_graph(d, s0, opts.state_cap);
    EquivClasses eq = action_equivalence_classes(d, g);
    R1Result r1 = reduce_R1(d, tn, demand, eq);
    int k = g.num_states();

    std::vector<int> supply(d.num_actions(), 0), need(d.num_actions(), 0);
    for (const std::string& l : r1.tn.labels) supply[d.action_index(l)]++;
    for (const auto& [a, c] : r1.demand) need[d.action_index(a)] = c;

    std::vector<std::vector<std::pair<int, int>>> adj(k);
    for (int s = 0; s < k; ++s)
        for (auto [a, t] : g.arcs[s])
            if (supply[a] > 0) adj[s].emplace_back(a, t);

    Budget budget{opts.node_budget};
    std::vector<Cycle> all_cycles = enumerate_cycles(adj, budget);
    std::vector<const Cycle*> candidates;
    for (const Cycle& c : all_cycles) {
        bool fits = true;
        for (auto [a, u] : c.uses)
            if (u > supply[a]) fits = false;
        if (fits) candidates.push_back(&c);
    }

    std::optional<std::vector<int>> found; // merged-action sequence
    auto try_selection = [&](const std::vector<std::pair<int, int>>& path_arcs,
                             const std::vector<int>& chosen) -> bool {
        budget.tick();
        std::vector<int> path_uses(d.num_actions(), 0);
        for (auto [a, t] : path_arcs) path_uses[a]++;
        IlpProblem ilp;
        std::vector<int> var_of(chosen.size());
        for (std::size_t i = 0; i < chosen.size(); ++i)
            var_of[i] = ilp.add_var(1, IlpProblem::kNoBound);
        bool trivially_bad = false;
        for (int a = 0; a < d.num_actions() && !trivially_bad; ++a) {
            std::vector<std::pair<int, long long>> terms;
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                auto it = candidates[chosen[i]]->uses.find(a);
                if (it != candidates[chosen[i]]->uses.end())
                    terms.emplace_back(var_of[i], it->second);
            }
            long long base = path_uses[a];
            if (terms.empty()) {
                if (base < need[a] || base > supply[a]) trivially_bad = true;
                continue;
            }
            IlpConstraint c;
            c.terms = std::move(terms);
            c.lo = need[a] - base > 0 ? need[a] - base : -IlpProblem::kNoBound;
            c.hi = supply[a] - base;
            ilp.constraints.push_back(std::move(c));
        }
        if (trivially_bad) return true; // keep searching
        std::optional<std::vector<long long>> sol = feasible(ilp, budget.left);
        if (!sol) return true;

        // Splice the chosen cycles into the path.
        std::vector<const Cycle*> chosen_cycles;
        std::vector<long long> pending;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            chosen_cycles.push_back(candidates[chosen[i]]);
            pending.push_back((*sol)[var_of[i]]);
        }
        Splicer splicer{chosen_cycles, pending};
        splicer.run(0, path_arcs);
        found = splicer.emitted;
        return false;
    };

    // Vertex-simple paths from s0; every prefix is itself a candidate path.
    // `current_uses` counts path arcs plus one forced traversal per chosen
    // cycle, so branches that already exceed some action's supply are pruned
    // before reaching the feasibility program.
    std::vector<bool> visited(k, false);
    std::vector<std::pair<int, int>> path_arcs;
    std::vector<int> current_uses(d.num_actions(), 0);
    Bitset path_vertices(k);
    auto pick_cycle = [&](int i) {
        for (auto [a, u] : candidates[i]->uses)
            if (current_uses[a] + u > supply[a]) return false;
        for (auto [a, u] : candidates[i]->uses) current_uses[a] += u;
        return true;
    };
    auto unpick_cycle = [&](int i) {
        for (auto [a, u] : candidates[i]->uses) current_uses[a] -= u;
    };
    std::function<bool(int)> dfs = [&](int s) -> bool {
        budget.tick();
        visited[s] = true;
        path_vertices.set(s);
        bool keep_going = true;
        connected_subsets(candidates, path_vertices, budget, pick_cycle, unpick_cycle,
                          [&](const std::vector<int>& chosen) {
                              keep_going = try_selection(path_arcs, chosen);
                              return keep_going;
                          });
        if (keep_going) {
            for (auto [a, t] : adj[s]) {
                if (visited[t]) continue;
                if (current_uses[a] + 1 > supply[a]) continue;
                current_uses[a]++;
                path_arcs.emplace_back(a, t);
                if (!dfs(t)) {
                    keep_going = false;
                    break;
                }
                path_arcs.pop_back();
                current_uses[a]--;
            }
        }
        visited[s] = false;
        path_vertices.reset(s);
        return keep_going;
    };
    dfs(0);
    if (!found) return out;

    // Undo the merge: distribute each surviving label's uses over its group so
    // that every original action lands within its own demand/supply window.
    std::vector<int> merged_seq = *found;
    std::map<std::string, std::vector<std::string>> group_of;
    for (const auto& grp : r1.merged_groups) group_of[grp.front()] = grp;
    auto original_by_action = tn.tasks_by_label();
    std::vector<std::string> final_actions;
    std::map<std::string, int> uses_of_rep;
    for (int a : merged_seq) uses_of_rep[d.actions()[a].name]++;
    std::map<std::string, std::deque<std::string>> replacement;
    for (auto& [rep, total] : uses_of_rep) {
        auto git = group_of.find(rep);
        if (git == group_of.end()) continue;
        int remaining = total;
        std::vector<std::pair<std::string, int>> alloc;
        for (const std::string& a : git->second) {
            int want = demand.count(a) ? demand.at(a) : 0;
            alloc.emplace_back(a, want);
            remaining -= want;
        }
        for (auto& [a, cnt] : alloc) {
            int cap = original_by_action.count(a)
                          ? static_cast<int>(original_by_action[a].size())
                          : 0;
            int extra = std::min(remaining, cap - cnt);
            cnt += extra;
            remaining -= extra;
        }
        if (remaining != 0) throw Error("internal: demand rebalancing failed");
        for (auto& [a, cnt] : alloc)
            for (int i = 0; i < cnt; ++i) replacement[rep].push_back(a);
    }
    for (int a : merged_seq) {
        std::string name = d.actions()[a].name;
        if (replacement.count(name) && !replacement[name].empty()) {
            final_actions.push_back(replacement[name].front());
            replacement[name].pop_front();
        } else {
            final_actions.push_back(name);
        }
    }
    std::map<std::string, int> next_of;
    out.yes = true;
    for (const std::string& a : final_actions) {
        out.witness_plan.push_back(a);
        out.witness_tasks.push_back(original_by_action.at(a)[next_of[a]++]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// State Reachability / Action Executability via chain DP.
// ---------------------------------------------------------------------------

Verdict reach_exec_gpow(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                        Query query, const std::map<std::string, int>& demand,
                        const Bitset& goal, const SolveOptions& opts) {
    Verdict out;
    out.stats.route = "gpow-dp";
    if (query == Query::Executable && reduce_R0(tn, demand) == std::optional<bool>(false))
        return out;

    StateGraph g = build_state_graph(d, s0, opts.state_cap);
    EquivClasses eq = action_equivalence_classes(d, g);
    std::vector<int> action_of = actions_of_tasks(d, tn);
    std::vector<std::vector<int>> chains = min_chain_decomposition(tn);
    int w = static_cast<int>(chains.size());

    // Isolated tasks grouped by the equivalence class of their action.
    std::map<int, std::vector<int>> iso_by_class;
    for (int t : tn.isolated_tasks()) iso_by_class[eq.class_of_action[action_of[t]]].push_back(t);
    std::vector<int> class_ids;
    std::vector<std::vector<int>> class_tasks;
    for (auto& [c, tasks] : iso_by_class) {
        class_ids.push_back(c);
        class_tasks.push_back(tasks);
    }
    int q = static_cast<int>(class_ids.size());
    // Per-action isolated supply, and action -> position in its class.
    std::vector<int> iso_supply(d.num_actions(), 0);
    for (auto& tasks : class_tasks)
        for (int t : tasks) iso_supply[action_of[t]]++;

    std::vector<int> need(d.num_actions(), 0);
    for (const auto& [a, c] : demand) need[d.action_index(a)] = c;

    int n = tn.size();
    std::vector<std::vector<int>> req(n, std::vector<int>(w, 0));
    for (int j = 0; j < w; ++j)
        for (int pos = 0; pos < static_cast<int>(chains[j].size()); ++pos)
            for (int s : tn.successors(chains[j][pos]).members())
                req[s][j] = std::max(req[s][j], pos + 1);

    struct Node {
        std::vector<int> key; // [state, h..., r...]
        int prev = -1;
        int moved_task = -1;  // chain moves
        int moved_class = -1; // isolated moves (index into class_ids)
    };
    std::vector<Node> arena;
    std::map<std::vector<int>, int> seen;
    std::deque<int> queue;
    Budget budget{opts.node_budget};

    std::vector<int> start(1 + w + q, 0);
    arena.push_back({start, -1, -1, -1});
    seen.emplace(start, 0);
    queue.push_back(0);

    auto accepts = [&](const std::vector<int>& key) -> bool {
        int s = key[0];
        if (query == Query::Reach) return goal.is_subset_of(g.states[s]);
        // Executable: chain prefixes give exact per-action counts; isolated
        // classes cover the remaining deficits if each class used enough and
        // no action's deficit exceeds its isolated supply.
        std::vector<int> have(d.num_actions(), 0);
        for (int j = 0; j < w; ++j)
            for (int pos = 0; pos < key[1 + j]; ++pos) have[action_of[chains[j][pos]]]++;
        std::vector<long long> class_deficit(q, 0);
        for (int a = 0; a < d.num_actions(); ++a) {
            int deficit = need[a] - have[a];
            if (deficit <= 0) continue;
            if (deficit > iso_supply[a]) return false;
            int cls = eq.class_of_action[a];
            int ci = static_cast<int>(
                std::find(class_ids.begin(), class_ids.end(), cls) - class_ids.begin());
            if (ci == q) return false;
            class_deficit[ci] += deficit;
        }
        for (int i = 0; i < q; ++i)
            if (class_deficit[i] > key[1 + w + i]) return false;
        return true;
    };

    int accept_node = -1;
    while (!queue.empty() && accept_node == -1) {
        int cur = queue.front();
        queue.pop_front();
        std::vector<int> key = arena[cur].key;
        if (accepts(key)) {
            accept_node = cur;
            break;
        }
        int s = key[0];
        auto push = [&](std::vector<int> nk, int task, int cls) {
            if (seen.count(nk)) return;
            budget.tick();
            arena.push_back({nk, cur, task, cls});
            seen.emplace(std::move(nk), static_cast<int>(arena.size()) - 1);
            queue.push_back(static_cast<int>(arena.size()) - 1);
        };
        for (int j = 0; j < w; ++j) {
            if (key[1 + j] >= static_cast<int>(chains[j].size())) continue;
            int t = chains[j][key[1 + j]];
            bool ok = true;
            for (int j2 = 0; j2 < w && ok; ++j2)
                if (req[t][j2] > key[1 + j2]) ok = false;
            if (!ok) continue;
            int to = g.target(s, action_of[t]);
            if (to == -1) continue;
            std::vector<int> nk = key;
            nk[0] = to;
            nk[1 + j]++;
            push(std::move(nk), t, -1);
        }
        for (int i = 0; i < q; ++i) {
            if (key[1 + w + i] >= static_cast<int>(class_tasks[i].size())) continue;
            int to = eq.signature[class_ids[i]][s];
            if (to == -1) continue;
            std::vector<int> nk = key;
            nk[0] = to;
            nk[1 + w + i]++;
            push(std::move(nk), -1, i);
        }
    }
    out.stats.nodes = static_cast<long long>(arena.size());
    if (accept_node == -1) return out;

    // Move list, oldest first.
    std::vector<std::pair<int, int>> moves; // (task, class index)
    for (int cur = accept_node; arena[cur].prev != -1; cur = arena[cur].prev)
        moves.emplace_back(arena[cur].moved_task, arena[cur].moved_class);
    std::reverse(moves.begin(), moves.end());

    // Assign isolated class moves to concrete tasks. Reach: lowest ids first.
    // Executable: cover each action's remaining deficit first, then pad.
    const std::vector<int>& final_key = arena[accept_node].key;
    std::vector<std::deque<int>> class_queue(q);
    std::vector<int> have(d.num_actions(), 0);
    for (int j = 0; j < w; ++j)
        for (int pos = 0; pos < final_key[1 + j]; ++pos)
            have[action_of[chains[j][pos]]]++;
    for (int i = 0; i < q; ++i) {
        int used = final_key[1 + w + i];
        std::map<std::string, std::vector<int>> by_action;
        for (int t : class_tasks[i]) by_action[tn.labels[t]].push_back(t);
        std::vector<int> picked;
        if (query == Query::Executable) {
            for (auto& [a, tasks] : by_action) {
                int deficit = std::max(0, need[d.action_index(a)] - have[d.action_index(a)]);
                for (int x = 0; x < deficit; ++x) picked.push_back(tasks[x]);
            }
        }
        std::set<int> already(picked.begin(), picked.end());
        for (int t : class_tasks[i]) {
            if (static_cast<int>(picked.size()) >= used) break;
            if (!already.count(t)) picked.push_back(t);
        }
        if (static_cast<int>(picked.size()) != used)
            throw Error("internal: isolated task assignment failed");
        class_queue[i].assign(picked.begin(), picked.end());
    }
    for (auto [task, cls] : moves) {
        int t = task;
        if (t == -1) {
            t = class_queue[cls].front();
            class_queue[cls].pop_front();
        }
        out.witness_tasks.push_back(t);
        out.witness_plan.push_back(tn.labels[t]);
    }
    out.yes = true;
    return out;
}

// ---------------------------------------------------------------------------
// State Reachability / Action Executability via vertex cover branching.
// ---------------------------------------------------------------------------

namespace {

struct VcnSearch {
    const Domain& d;
    const TaskNetwork& tn;
    Query query;
    const std::map<std::string, int>& demand;
    const Bitset& goal;
    const SolveOptions& opts;

    StateGraph g;
    EquivClasses eq;
    std::vector<int> action_of;
    std::vector<int> cover;
    int m = 0;
    int n = 0;
    Budget budget;

    std::vector<int> need; // per action index

    Verdict result;

    VcnSearch(const Domain& d_, const TaskNetwork& tn_, const Bitset& s0, Query q_,
              const std::map<std::string, int>& dem, const Bitset& goal_,
              const SolveOptions& o)
        : d(d_), tn(tn_), query(q_), demand(dem), goal(goal_), opts(o),
          g(build_state_graph(d_, s0, o.state_cap)),
          eq(action_equivalence_classes(d_, g)),
          action_of(actions_of_tasks(d_, tn_)),
          cover(min_vertex_cover(tn_)),
          m(static_cast<int>(cover.size())),
          n(tn_.size()),
          budget{o.node_budget} {
        need.assign(d.num_actions(), 0);
        for (const auto& [a, c] : dem) need[d.action_index(a)] = c;
        result.stats.route = "vcn";
    }

    bool run() {
        std::vector<bool> in_cover(n, false);
        for (int v : cover) in_cover[v] = true;
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            budget.tick();
            std::vector<int> used_cover, unused_cover;
            for (int i = 0; i < m; ++i)
                (mask >> i & 1 ? used_cover : unused_cover).push_back(cover[i]);
            // Downward closure between cover tasks.
            bool bad = false;
            for (int u : unused_cover)
                for (int v : used_cover)
                    if (tn.precedes(u, v)) bad = true;
            if (bad) continue;
            // Forbidden: tasks needing an unused cover predecessor. Required:
            // tasks below a used cover task.
            Bitset forb(n), req_tasks(n), usable(n);
            for (int t = 0; t < n; ++t) {
                if (in_cover[t]) continue;
                for (int u : unused_cover)
                    if (tn.precedes(u, t)) forb.set(t);
                for (int v : used_cover)
                    if (tn.precedes(t, v)) req_tasks.set(t);
            }
            if (req_tasks.intersects(forb)) continue;
            for (int t = 0; t < n; ++t)
                if (!in_cover[t] && !forb.test(t)) usable.set(t);
            // Order branching over the chosen cover tasks.
            std::vector<int> order;
            std::vector<bool> taken(used_cover.size(), false);
            if (branch_orders(used_cover, taken, order, req_tasks, usable)) return true;
        }
        return false;
    }

    bool branch_orders(const std::vector<int>& used_cover, std::vector<bool>& taken,
                       std::vector<int>& order, const Bitset& req_tasks,
                       const Bitset& usable) {
        if (order.size() == used_cover.size()) {
            budget.tick();
            return try_order(order, req_tasks, usable);
        }
        for (std::size_t i = 0; i < used_cover.size(); ++i) {
            if (taken[i]) continue;
            int v = used_cover[i];
            bool ready = true;
            for (std::size_t j = 0; j < used_cover.size() && ready; ++j)
                if (!taken[j] && j != i && tn.precedes(used_cover[j], v)) ready = false;
            if (!ready) continue;
            taken[i] = true;
            order.push_back(v);
            if (branch_orders(used_cover, taken, order, req_tasks, usable)) return true;
            order.pop_back();
            taken[i] = false;
        }
        return false;
    }

    // For one cover order: strong classes, augmented graph, segment search.
    bool try_order(const std::vector<int>& order, const Bitset& req_tasks,
                   const Bitset& usable) {
        int mu = static_cast<int>(order.size());
        StrongClasses sc = strong_classes(tn, eq, action_of, order, usable);
        for (int t : req_tasks.members())
            if (sc.class_of_task[t] == -1) return false; // required task unusable
        int nc = static_cast<int>(sc.classes.size());
        std::vector<long long> class_supply(nc), class_req(nc, 0);
        std::vector<std::map<std::string, int>> class_req_by_action(nc);
        for (int c = 0; c < nc; ++c)
            class_supply[c] = static_cast<long long>(sc.classes[c].tasks.size());
        for (int t : req_tasks.members()) {
            class_req[sc.class_of_task[t]]++;
            class_req_by_action[sc.class_of_task[t]][tn.labels[t]]++;
        }
        AugmentedGraph ag = augmented_graph(g, eq, sc);

        // Per-segment arc view and cycle candidates.
        int k = g.num_states();
        std::vector<std::vector<std::vector<std::pair<int, int>>>> seg_adj(mu + 1);
        std::vector<std::vector<Cycle>> seg_cycles(mu + 1);
        for (int i = 0; i <= mu; ++i) {
            seg_adj[i].assign(k, {});
            for (int s = 0; s < k; ++s)
                for (auto [c, to] : ag.arcs[s])
                    if (sc.classes[c].lo <= i && i <= sc.classes[c].hi)
                        seg_adj[i][s].emplace_back(c, to);
            seg_cycles[i] = enumerate_cycles(seg_adj[i], budget);
            // A cycle unusable within its classes' supplies can never have a
            // positive count.
            std::vector<Cycle> kept;
            for (Cycle& c : seg_cycles[i]) {
                bool fits = true;
                for (auto [cls, u] : c.uses)
                    if (u > class_supply[cls]) fits = false;
                if (fits) kept.push_back(std::move(c));
            }
            seg_cycles[i] = std::move(kept);
        }

        // Nested search over segment paths and cycle subsets. `current` counts
        // class uses forced so far across every segment (path arcs plus one
        // traversal per chosen cycle), so branches already past some class
        // supply are pruned before the feasibility program sees them.
        std::vector<std::vector<std::pair<int, int>>> seg_paths(mu + 1);
        std::vector<int> seg_start(mu + 1, -1);
        std::vector<long long> current(nc, 0);
        seg_start[0] = 0;

        std::function<bool(int)> search_segment = [&](int i) -> bool {
            // Enumerate vertex-simple paths from seg_start[i] in segment i.
            std::vector<bool> visited(k, false);
            std::vector<std::pair<int, int>> path;
            std::function<bool(int)> dfs = [&](int s) -> bool {
                budget.tick();
                if (i < mu) {
                    int a = action_of[order[i]];
                    int to = g.target(s, a);
                    if (to != -1) {
                        seg_paths[i] = path;
                        seg_start[i + 1] = to;
                        if (search_segment(i + 1)) return true;
                    }
                } else {
                    bool endpoint_ok =
                        query == Query::Executable || goal.is_subset_of(g.states[s]);
                    if (endpoint_ok) {
                        seg_paths[i] = path;
                        if (search_cycles(order, req_tasks, sc, class_supply, class_req,
                                          class_req_by_action, seg_cycles, seg_paths,
                                          seg_start, current))
                            return true;
                    }
                }
                visited[s] = true;
                for (auto [c, to] : seg_adj[i][s]) {
                    if (visited[to]) continue;
                    if (current[c] + 1 > class_supply[c]) continue;
                    current[c]++;
                    path.emplace_back(c, to);
                    if (dfs(to)) return true;
                    path.pop_back();
                    current[c]--;
                }
                visited[s] = false;
                return false;
            };
            return dfs(seg_start[i]);
        };
        return search_segment(0);
    }

    bool search_cycles(const std::vector<int>& order, const Bitset& req_tasks,
                       const StrongClasses& sc, const std::vector<long long>& class_supply,
                       const std::vector<long long>& class_req,
                       const std::vector<std::map<std::string, int>>& class_req_by_action,
                       const std::vector<std::vector<Cycle>>& seg_cycles,
                       const std::vector<std::vector<std::pair<int, int>>>& seg_paths,
                       const std::vector<int>& seg_start, std::vector<long long>& current) {
        int mu = static_cast<int>(order.size());
        int k = g.num_states();
        std::vector<std::vector<const Cycle*>> chosen(mu + 1);
        std::function<bool(int)> per_segment = [&](int i) -> bool {
            if (i > mu)
                return finish_selection(order, req_tasks, sc, class_supply, class_req,
                                        class_req_by_action, seg_paths, seg_start, chosen);
            Bitset base(k);
            base.set(seg_start[i]);
            for (auto [c, to] : seg_paths[i]) base.set(to);
            std::vector<const Cycle*> candidates;
            for (const Cycle& c : seg_cycles[i]) candidates.push_back(&c);
            auto pick = [&](int idx) {
                for (auto [cls, u] : candidates[idx]->uses)
                    if (current[cls] + u > class_supply[cls]) return false;
                for (auto [cls, u] : candidates[idx]->uses) current[cls] += u;
                return true;
            };
            auto unpick = [&](int idx) {
                for (auto [cls, u] : candidates[idx]->uses) current[cls] -= u;
            };
            bool found = false;
            connected_subsets(candidates, base, budget, pick, unpick,
                              [&](const std::vector<int>& subset) {
                                  chosen[i].clear();
                                  for (int idx : subset) chosen[i].push_back(candidates[idx]);
                                  if (per_segment(i + 1)) {
                                      found = true;
                                      return false;
                                  }
                                  return true;
                              });
            return found;
        };
        return per_segment(0);
    }

    // Builds and solves the feasibility program for a complete selection;
    // returns true (and fills `result`) on success.
    bool finish_selection(const std::vector<int>& order, const Bitset& req_tasks,
                          const StrongClasses& sc, const std::vector<long long>& class_supply,
                          const std::vector<long long>& class_req,
                          const std::vector<std::map<std::string, int>>& class_req_by_action,
                          const std::vector<std::vector<std::pair<int, int>>>& seg_paths,
                          const std::vector<int>& seg_start,
                          const std::vector<std::vector<const Cycle*>>& chosen) {
        budget.tick();
        int mu = static_cast<int>(order.size());
        int nc = static_cast<int>(sc.classes.size());

        // Distinct cycles across segments.
        std::map<const Cycle*, std::vector<int>> segments_of;
        for (int i = 0; i <= mu; ++i)
            for (const Cycle* c : chosen[i]) segments_of[c].push_back(i);
        std::vector<const Cycle*> cycle_list;
        for (auto& [c, segs] : segments_of) cycle_list.push_back(c);

        std::vector<long long> path_uses(nc, 0);
        for (int i = 0; i <= mu; ++i)
            for (auto [c, to] : seg_paths[i]) path_uses[c]++;

        IlpProblem ilp;
        std::map<const Cycle*, int> var_of;
        for (const Cycle* c : cycle_list)
            var_of[c] = ilp.add_var(
                static_cast<long long>(segments_of[c].size()), IlpProblem::kNoBound);

        // Class supply and required lower bounds.
        for (int e = 0; e < nc; ++e) {
            std::vector<std::pair<int, long long>> terms;
            for (const Cycle* c : cycle_list) {
                auto it = c->uses.find(e);
                if (it != c->uses.end()) terms.emplace_back(var_of[c], it->second);
            }
            long long base = path_uses[e];
            if (terms.empty()) {
                if (base > class_supply[e] || base < class_req[e]) return false;
                continue;
            }
            IlpConstraint c;
            c.terms = terms;
            c.lo = class_req[e] - base > 0 ? class_req[e] - base : -IlpProblem::kNoBound;
            c.hi = class_supply[e] - base;
            if (c.hi < 0) return false;
            ilp.constraints.push_back(std::move(c));
        }

        std::vector<std::vector<int>> y_vars; // per class: per action var ids
        if (query == Query::Executable) {
            // Assignment variables y[e][a]: how many class-e uses run action a.
            std::vector<int> v_count(d.num_actions(), 0);
            for (int v : order) v_count[action_of[v]]++;
            y_vars.assign(nc, {});
            std::vector<std::vector<std::string>> y_actions(nc);
            for (int e = 0; e < nc; ++e) {
                for (const auto& [a, cnt] : sc.classes[e].count_by_action) {
                    long long lo = 0;
                    auto rit = class_req_by_action[e].find(a);
                    if (rit != class_req_by_action[e].end()) lo = rit->second;
                    y_vars[e].push_back(ilp.add_var(lo, cnt));
                    y_actions[e].push_back(a);
                }
                // Sum of assignments equals total class uses.
                std::vector<std::pair<int, long long>> terms;
                for (int var : y_vars[e]) terms.emplace_back(var, 1);
                for (const Cycle* c : cycle_list) {
                    auto it = c->uses.find(e);
                    if (it != c->uses.end()) terms.emplace_back(var_of[c], -it->second);
                }
                ilp.add_eq(std::move(terms), path_uses[e]);
            }
            for (int a = 0; a < d.num_actions(); ++a) {
                long long lo = need[a] - v_count[a];
                if (lo <= 0) continue;
                std::vector<std::pair<int, long long>> terms;
                for (int e = 0; e < nc; ++e)
                    for (std::size_t xi = 0; xi < y_vars[e].size(); ++xi)
                        if (d.action_index(y_actions[e][xi]) == a)
                            terms.emplace_back(y_vars[e][xi], 1);
                if (terms.empty()) return false;
                ilp.add_ge(std::move(terms), lo);
            }
            // Stash the action names for reconstruction.
            y_action_names = std::move(y_actions);
        }

        std::optional<std::vector<long long>> sol = feasible(ilp, budget.left);
        if (!sol) return false;
        build_witness(order, req_tasks, sc, seg_paths, seg_start, chosen, segments_of,
                      cycle_list, var_of, y_vars, *sol);
        return true;
    }

    std::vector<std::vector<std::string>> y_action_names;

    void build_witness(const std::vector<int>& order, const Bitset& req_tasks,
                       const StrongClasses& sc,
                       const std::vector<std::vector<std::pair<int, int>>>& seg_paths,
                       const std::vector<int>& seg_start,
                       const std::vector<std::vector<const Cycle*>>& chosen,
                       std::map<const Cycle*, std::vector<int>>& segments_of,
                       const std::vector<const Cycle*>& cycle_list,
                       std::map<const Cycle*, int>& var_of,
                       const std::vector<std::vector<int>>& y_vars,
                       const std::vector<long long>& sol) {
        int mu = static_cast<int>(order.size());
        int nc = static_cast<int>(sc.classes.size());
        // Distribute each cycle's traversals: all slack to its first segment.
        std::map<const Cycle*, std::map<int, long long>> per_segment_count;
        for (const Cycle* c : cycle_list) {
            const std::vector<int>& segs = segments_of[c];
            long long total = sol[var_of.at(c)];
            for (std::size_t i = 0; i < segs.size(); ++i)
                per_segment_count[c][segs[i]] =
                    (i == 0) ? total - static_cast<long long>(segs.size() - 1) : 1;
        }
        // Class uses in execution order.
        std::vector<int> class_sequence;
        std::vector<int> joint_positions; // positions of cover tasks in the final plan
        std::vector<std::pair<bool, int>> steps; // (is_cover, id or class)
        for (int i = 0; i <= mu; ++i) {
            std::vector<const Cycle*> segment_cycles = chosen[i];
            std::vector<long long> pending;
            for (const Cycle* c : segment_cycles)
                pending.push_back(per_segment_count[c][i]);
            Splicer splicer{segment_cycles, pending};
            splicer.run(seg_start[i], seg_paths[i]);
            for (int cls : splicer.emitted) steps.emplace_back(false, cls);
            if (i < mu) steps.emplace_back(true, order[i]);
        }
        // Assign concrete tasks per class: required tasks first, then by need
        // (Executable), then lowest ids.
        std::vector<long long> uses_of_class(nc, 0);
        for (auto& [is_cover, x] : steps)
            if (!is_cover) uses_of_class[x]++;
        std::vector<std::deque<int>> class_queue(nc);
        for (int e = 0; e < nc; ++e) {
            std::map<std::string, std::vector<int>> req_by_a, rest_by_a;
            for (int t : sc.classes[e].tasks)
                (req_tasks.test(t) ? req_by_a : rest_by_a)[tn.labels[t]].push_back(t);
            std::vector<int> picked;
            if (query == Query::Executable && !y_vars.empty()) {
                for (std::size_t xi = 0; xi < y_vars[e].size(); ++xi) {
                    const std::string& a = y_action_names[e][xi];
                    long long want = sol[y_vars[e][xi]];
                    std::vector<int> pool;
                    if (req_by_a.count(a))
                        pool.insert(pool.end(), req_by_a[a].begin(), req_by_a[a].end());
                    if (rest_by_a.count(a))
                        pool.insert(pool.end(), rest_by_a[a].begin(), rest_by_a[a].end());
                    for (long long x = 0; x < want; ++x) picked.push_back(pool[x]);
                }
            } else {
                for (auto& [a, ts] : req_by_a)
                    for (int t : ts) picked.push_back(t);
                for (auto& [a, ts] : rest_by_a) {
                    for (int t : ts) {
                        if (static_cast<long long>(picked.size()) >= uses_of_class[e]) break;
                        picked.push_back(t);
                    }
                }
            }
            if (static_cast<long long>(picked.size()) != uses_of_class[e])
                throw Error("internal: class task assignment failed");
            class_queue[e].assign(picked.begin(), picked.end());
        }
        result.witness_tasks.clear();
        result.witness_plan.clear();
        for (auto& [is_cover, x] : steps) {
            int t = is_cover ? x : [&] {
                int id = class_queue[x].front();
                class_queue[x].pop_front();
                return id;
            }();
            result.witness_tasks.push_back(t);
            result.witness_plan.push_back(tn.labels[t]);
        }
        result.yes = true;
    }
};

} // namespace

Verdict reach_exec_vcn(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       Query query, const std::map<std::string, int>& demand,
                       const Bitset& goal, const SolveOptions& opts) {
    if (query != Query::Reach && query != Query::Executable)
        throw Error("cover-branching solver handles reachability and executability only");
    if (query == Query::Executable) {
        if (reduce_R0(tn, demand) == std::optional<bool>(false)) {
            Verdict v;
            v.stats.route = "vcn";
            return v;
        }
    }
    VcnSearch search(d, tn, s0, query, demand, goal, opts);
    if (search.run()) return search.result;
    Verdict v;
    v.stats.route = "vcn";
    v.stats.nodes = opts.node_budget - search.budget.left;
    return v;
}

// ---------------------------------------------------------------------------
// Aggregate entry points.
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, int> full_demand(const TaskNetwork& tn) {
    std::map<std::string, int> dem;
    for (const std::string& l : tn.labels) dem[l]++;
    return dem;
}

Verdict dispatch_reach_exec(const PrimitiveInstance& inst, Query query,
                            const std::map<std::string, int>& demand,
                            const SolveOptions& opts) {
    const Domain& d = inst.domain;
    const TaskNetwork& tn = inst.network;
    if (query == Query::Executable) {
        if (reduce_R0(tn, demand) == std::optional<bool>(false)) {
            Verdict v;
            v.stats.route = "trivial";
            return v;
        }
    }
    auto fallback = [&](const char* why) -> Verdict {
        if (tn.size() > opts.oracle_task_cap)
            throw InstanceTooLarge(std::string("no solver applies: ") + why +
                                   " and the network is too large for the exhaustive one");
        PrimitiveInstance sub = inst;
        sub.query = query;
        sub.demand = demand;
        return oracle_primitive(sub, opts.node_budget);
    };
    try {
        if (tn.cover_arcs().empty()) {
            return query == Query::Reach
                       ? reach_antichain(d, tn, inst.s0, inst.goal, opts)
                       : exec_antichain(d, tn, inst.s0, demand, opts);
        }
        if (gpow(tn) <= opts.gpow_threshold)
            return reach_exec_gpow(d, tn, inst.s0, query, demand, inst.goal, opts);
        if (static_cast<int>(min_vertex_cover(tn).size()) <= opts.vcn_threshold)
            return reach_exec_vcn(d, tn, inst.s0, query, demand, inst.goal, opts);
        return fallback("width and cover both exceed their thresholds");
    } catch (const BudgetExceeded&) {
        return fallback("the specialized solver ran out of budget");
    } catch (const StateSpaceExceeded&) {
        return fallback("the state space exceeds the cap");
    }
}

} // namespace

Verdict plan_existence(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       const SolveOptions& opts) {
    PrimitiveInstance inst{d, tn, s0, Query::Exists, {}, {}, Bitset(d.num_propositions())};
    return dispatch_reach_exec(inst, Query::Executable, full_demand(tn), opts);
}

Verdict dispatch(const PrimitiveInstance& inst, const SolveOptions& opts) {
    for (const std::string& label : inst.network.labels)
        if (!inst.domain.is_action(label))
            throw NotCompound("dispatch requires a primitive network; task label " + label +
                              " is not an action");
    const Domain& d = inst.domain;
    const TaskNetwork& tn = inst.network;
    switch (inst.query) {
        case Query::Verify: {
            if (!plan_matches_label_multiset(d, tn, inst.plan)) {
                Verdict v;
                v.stats.route = "trivial";
                return v;
            }
            auto fallback = [&]() -> Verdict {
                if (tn.size() > opts.oracle_task_cap)
                    throw InstanceTooLarge(
                        "no verification solver applies and the network is too large "
                        "for the exhaustive one");
                return oracle_primitive(inst, opts.node_budget);
            };
            try {
                if (gpow(tn) <= opts.gpow_threshold)
                    return verify_gpow(d, tn, inst.s0, inst.plan, opts);
                if (static_cast<int>(min_vertex_cover(tn).size()) <= opts.vcn_threshold)
                    return verify_vcn(d, tn, inst.s0, inst.plan, opts);
                return fallback();
            } catch (const BudgetExceeded&) {
                return fallback();
            }
        }
        case Query::Exists:
            return dispatch_reach_exec(inst, Query::Executable, full_demand(tn), opts);
        case Query::Executable:
            return dispatch_reach_exec(inst, Query::Executable, inst.demand, opts);
        case Query::Reach:
            return dispatch_reach_exec(inst, Query::Reach, inst.demand, opts);
    }
    throw Error("unreachable");
}

} // namespace htn
