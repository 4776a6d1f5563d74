#include "htn/core.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace htn {

// ---------------------------------------------------------------------------
// Bitset
// ---------------------------------------------------------------------------

int Bitset::count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

bool Bitset::any() const {
    for (std::uint64_t w : words_)
        if (w) return true;
    return false;
}

bool Bitset::is_subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

bool Bitset::intersects(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & other.words_[i]) return true;
    return false;
}

Bitset& Bitset::operator|=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

Bitset& Bitset::operator&=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

Bitset& Bitset::subtract(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
}

std::size_t Bitset::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint64_t w : words_) {
        h ^= static_cast<std::size_t>(w);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<int> Bitset::members() const {
    std::vector<int> out;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            int b = std::countr_zero(w);
            out.push_back(static_cast<int>(wi) * 64 + b);
            w &= w - 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain::Domain(std::vector<std::string> propositions, std::vector<ActionDef> actions,
               std::vector<std::string> compounds)
    : propositions_(std::move(propositions)),
      actions_(std::move(actions)),
      compounds_(std::move(compounds)) {
    for (int i = 0; i < static_cast<int>(propositions_.size()); ++i) {
        if (!prop_index_.emplace(propositions_[i], i).second)
            throw ParseError("duplicate proposition: " + propositions_[i]);
    }
    for (int i = 0; i < static_cast<int>(actions_.size()); ++i) {
        if (!action_index_.emplace(actions_[i].name, i).second)
            throw ParseError("duplicate action: " + actions_[i].name);
    }
    for (int i = 0; i < static_cast<int>(compounds_.size()); ++i) {
        if (action_index_.count(compounds_[i]))
            throw ParseError("name is both action and compound: " + compounds_[i]);
        if (!compound_index_.emplace(compounds_[i], i).second)
            throw ParseError("duplicate compound: " + compounds_[i]);
    }
    for (const ActionDef& a : actions_) {
        pre_masks_.push_back(make_state(a.pre));
        del_masks_.push_back(make_state(a.del));
        add_masks_.push_back(make_state(a.add));
    }
}

int Domain::proposition_index(const std::string& p) const {
    auto it = prop_index_.find(p);
    if (it == prop_index_.end()) throw ParseError("unknown proposition: " + p);
    return it->second;
}

int Domain::action_index(const std::string& name) const {
    auto it = action_index_.find(name);
    if (it == action_index_.end()) throw ParseError("unknown action: " + name);
    return it->second;
}

Bitset Domain::make_state(const std::vector<std::string>& props) const {
    Bitset s(num_propositions());
    for (const std::string& p : props) s.set(proposition_index(p));
    return s;
}

std::vector<std::string> Domain::state_names(const Bitset& state) const {
    std::vector<std::string> out;
    for (int i : state.members()) out.push_back(propositions_[i]);
    return out;
}

void Domain::add_method(const std::string& compound, const TaskNetwork& network) {
    if (!is_compound(compound))
        throw MethodMismatch("method for unknown compound: " + compound);
    for (const std::string& label : network.labels) {
        if (!is_action(label) && !is_compound(label))
            throw MethodMismatch("method network uses unknown label: " + label);
    }
    method_networks_.push_back(network);
    methods_.push_back({compound, static_cast<int>(method_networks_.size()) - 1});
}

const TaskNetwork& Domain::method_network(int network_index) const {
    return method_networks_.at(network_index);
}

std::vector<int> Domain::methods_of(const std::string& compound) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(methods_.size()); ++i)
        if (methods_[i].compound == compound) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Orders
// ---------------------------------------------------------------------------

std::vector<Bitset> transitive_closure(int n, const std::vector<std::pair<int, int>>& arcs) {
    std::vector<std::vector<int>> adj(n);
    std::vector<std::vector<bool>> direct(n, std::vector<bool>(n, false));
    for (auto [a, b] : arcs) {
        if (a == b) throw CycleDetected("self-loop on task " + std::to_string(a));
        if (!direct[a][b]) {
            direct[a][b] = true;
            adj[a].push_back(b);
        }
    }
    // Reverse topological order via iterative DFS, then propagate successor sets.
    std::vector<int> state(n, 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<int> order;      // reverse finish order
    order.reserve(n);
    for (int root = 0; root < n; ++root) {
        if (state[root]) continue;
        std::vector<std::pair<int, int>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < static_cast<int>(adj[v].size())) {
                int u = adj[v][idx++];
                if (state[u] == 1) throw CycleDetected("order relation contains a cycle");
                if (state[u] == 0) {
                    state[u] = 1;
                    stack.push_back({u, 0});
                }
            } else {
                state[v] = 2;
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::vector<Bitset> succ(n, Bitset(n));
    for (int v : order) { // children finish before parents
        for (int u : adj[v]) {
            succ[v].set(u);
            succ[v] |= succ[u];
        }
    }
    return succ;
}

std::vector<std::pair<int, int>> cover_of(const std::vector<Bitset>& succ_closure) {
    int n = static_cast<int>(succ_closure.size());
    std::vector<std::pair<int, int>> cover;
    for (int a = 0; a < n; ++a) {
        for (int b : succ_closure[a].members()) {
            bool has_mid = false;
            for (int c : succ_closure[a].members()) {
                if (c != b && succ_closure[c].test(b)) {
                    has_mid = true;
                    break;
                }
            }
            if (!has_mid) cover.emplace_back(a, b);
        }
    }
    return cover;
}

// ---------------------------------------------------------------------------
// TaskNetwork
// ---------------------------------------------------------------------------

TaskNetwork::TaskNetwork(std::vector<std::string> task_names,
                         std::vector<std::string> task_labels,
                         const std::vector<std::pair<int, int>>& order)
    : names(std::move(task_names)), labels(std::move(task_labels)) {
    if (names.size() != labels.size())
        throw ParseError("task name/label count mismatch");
    int n = size();
    {
        std::set<std::string> seen;
        for (const std::string& name : names)
            if (!seen.insert(name).second)
                throw Error("duplicate task name: " + name);
    }
    for (auto [a, b] : order)
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ParseError("order arc references unknown task id");
    succ_closure = transitive_closure(n, order);
    pred_closure.assign(n, Bitset(n));
    for (int a = 0; a < n; ++a)
        for (int b : succ_closure[a].members()) pred_closure[b].set(a);
    cover = cover_of(succ_closure);
}

std::vector<int> TaskNetwork::isolated_tasks() const {
    std::vector<int> out;
    for (int t = 0; t < size(); ++t)
        if (succ_closure[t].none() && pred_closure[t].none()) out.push_back(t);
    return out;
}

std::map<std::string, std::vector<int>> TaskNetwork::tasks_by_label() const {
    std::map<std::string, std::vector<int>> out;
    for (int t = 0; t < size(); ++t) out[labels[t]].push_back(t);
    return out;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

bool is_executable(const Domain& d, int action, const Bitset& state) {
    return d.pre_mask(action).is_subset_of(state);
}

Bitset apply_effects(const Domain& d, int action, const Bitset& state) {
    Bitset s = state;
    s.subtract(d.del_mask(action));
    s |= d.add_mask(action);
    return s;
}

Bitset execute_action(const Domain& d, const std::string& action, const Bitset& state) {
    int a = d.action_index(action);
    if (!is_executable(d, a, state)) {
        Bitset missing = d.pre_mask(a);
        missing.subtract(state);
        throw PreconditionUnsatisfied("action " + action + " not executable",
                                      d.state_names(missing));
    }
    return apply_effects(d, a, state);
}

PlanResult execute_plan(const Domain& d, const std::vector<std::string>& plan,
                        const Bitset& s0) {
    PlanResult r;
    r.final_state = s0;
    for (int i = 0; i < static_cast<int>(plan.size()); ++i) {
        int a = d.action_index(plan[i]);
        if (!is_executable(d, a, r.final_state)) {
            r.executable = false;
            r.failed_at = i;
            return r;
        }
        r.final_state = apply_effects(d, a, r.final_state);
    }
    r.executable = true;
    return r;
}

bool is_linearization(const TaskNetwork& tn, const std::vector<int>& order) {
    int n = tn.size();
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int t : order) {
        if (t < 0 || t >= n || seen[t]) return false;
        seen[t] = true;
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    for (auto [a, b] : tn.cover_arcs())
        if (pos[a] >= pos[b]) return false;
    return true;
}

bool is_solution(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                 const std::vector<int>& order, bool require_full) {
    int n = tn.size();
    Bitset used(n);
    std::vector<int> pos(n, -1);
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
        int t = order[i];
        if (t < 0 || t >= n || used.test(t)) return false;
        used.set(t);
        pos[t] = i;
    }
    if (require_full && used.count() != n) return false;
    // Downward closure + order consistency: every predecessor of a used task is
    // used and placed earlier.
    for (int t : used.members()) {
        for (int p : tn.predecessors(t).members()) {
            if (!used.test(p) || pos[p] >= pos[t]) return false;
        }
    }
    Bitset state = s0;
    for (int t : order) {
        int a = d.action_index(tn.labels[t]);
        if (!is_executable(d, a, state)) return false;
        state = apply_effects(d, a, state);
    }
    return true;
}

} // namespace htn
