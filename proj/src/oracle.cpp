#include "htn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_map>

#include "htn/hierarchy.hpp"

namespace htn {

namespace {

struct ExhaustiveSearch {
    const Domain& d;
    const TaskNetwork& tn;
    const PrimitiveInstance& inst;
    long long budget;
    long long nodes = 0;

    int n;
    std::vector<int> action_of;
    std::vector<std::uint64_t> pred_mask;
    std::vector<int> demand_need;                    // per action index
    std::unordered_map<std::uint64_t, bool> seen;    // Verify: state fixed by mask
    std::set<std::pair<std::uint64_t, Bitset>> seen_exact; // other queries
    std::vector<int> order;

    explicit ExhaustiveSearch(const PrimitiveInstance& i, long long b)
        : d(i.domain), tn(i.network), inst(i), budget(b), n(tn.size()) {
        if (n > 62)
            throw InstanceTooLarge("exhaustive search limited to 62 tasks, got " +
                                   std::to_string(n));
        action_of.resize(n);
        pred_mask.resize(n);
        for (int t = 0; t < n; ++t) {
            action_of[t] = d.action_index(tn.labels[t]);
            std::uint64_t m = 0;
            for (int p : tn.predecessors(t).members()) m |= (1ull << p);
            pred_mask[t] = m;
        }
        demand_need.assign(d.num_actions(), 0);
        for (const auto& [a, c] : inst.demand) demand_need[d.action_index(a)] = c;
    }

    void tick() {
        if (++nodes > budget) throw BudgetExceeded("exhaustive search budget exhausted");
    }

    bool accepts(std::uint64_t mask, const Bitset& state) const {
        switch (inst.query) {
            case Query::Verify:
            case Query::Exists:
                return mask + 1 == (1ull << n);
            case Query::Reach:
                return inst.goal.is_subset_of(state);
            case Query::Executable: {
                std::vector<int> have(d.num_actions(), 0);
                for (int t = 0; t < n; ++t)
                    if (mask >> t & 1) have[action_of[t]]++;
                for (int a = 0; a < d.num_actions(); ++a)
                    if (have[a] < demand_need[a]) return false;
                return true;
            }
        }
        return false;
    }

    // Verify: the state after i placed tasks is fixed by the plan prefix, so
    // memoization on the used set alone is sound.
    bool search_verify(std::uint64_t mask, const Bitset& state) {
        int i = std::popcount(mask);
        if (i == n) return true;
        auto it = seen.find(mask);
        if (it != seen.end()) return it->second;
        tick();
        bool ok = false;
        int a = d.action_index(inst.plan[i]);
        if (is_executable(d, a, state)) {
            Bitset next = apply_effects(d, a, state);
            for (int t = 0; t < n && !ok; ++t) {
                if (mask >> t & 1) continue;
                if (action_of[t] != a) continue;
                if ((pred_mask[t] & ~mask) != 0) continue;
                order.push_back(t);
                ok = search_verify(mask | (1ull << t), next);
                if (!ok) order.pop_back();
            }
        }
        seen.emplace(mask, ok);
        return ok;
    }

    // Exists / Executable / Reach: walk every reachable (used set, state) pair
    // once; accept as soon as the acceptance predicate holds.
    bool search_subsets(std::uint64_t mask, const Bitset& state) {
        if (accepts(mask, state)) return true;
        if (!seen_exact.emplace(mask, state).second) return false;
        tick();
        for (int t = 0; t < n; ++t) {
            if (mask >> t & 1) continue;
            if ((pred_mask[t] & ~mask) != 0) continue;
            int a = action_of[t];
            if (!is_executable(d, a, state)) continue;
            order.push_back(t);
            if (search_subsets(mask | (1ull << t), apply_effects(d, a, state)))
                return true;
            order.pop_back();
        }
        return false;
    }

    Verdict run() {
        Verdict v;
        v.stats.route = "oracle";
        bool yes = false;
        if (inst.query == Query::Verify) {
            if (static_cast<int>(inst.plan.size()) == n) {
                std::vector<int> have(d.num_actions(), 0), want(d.num_actions(), 0);
                for (int t = 0; t < n; ++t) have[action_of[t]]++;
                for (const std::string& a : inst.plan) want[d.action_index(a)]++;
                if (have == want) yes = search_verify(0, inst.s0);
            }
        } else {
            yes = search_subsets(0, inst.s0);
        }
        v.yes = yes;
        v.stats.nodes = nodes;
        if (yes) {
            v.witness_tasks = order;
            for (int t : order) v.witness_plan.push_back(tn.labels[t]);
        }
        return v;
    }
};

} // namespace

Verdict oracle_primitive(const PrimitiveInstance& inst, long long node_budget) {
    for (const std::string& label : inst.network.labels)
        if (!inst.domain.is_action(label))
            throw NotCompound("exhaustive primitive solver got compound task label: " + label);
    ExhaustiveSearch s(inst, node_budget);
    return s.run();
}

Verdict oracle_compound(const PrimitiveInstance& inst, long long node_budget) {
    // Plain recursive expansion, no deduplication: always decompose the lowest
    // compound task id, methods in declaration order.
    long long nodes = 0;
    Verdict result;
    result.stats.route = "oracle";
    std::function<bool(const TaskNetwork&)> go = [&](const TaskNetwork& net) -> bool {
        int compound_task = -1;
        for (int t = 0; t < net.size(); ++t) {
            if (inst.domain.is_compound(net.labels[t])) {
                compound_task = t;
                break;
            }
        }
        if (compound_task == -1) {
            PrimitiveInstance leaf = inst;
            leaf.network = net;
            Verdict v = oracle_primitive(leaf, node_budget - nodes);
            nodes += v.stats.nodes;
            if (v.yes) {
                result = v;
                return true;
            }
            return false;
        }
        std::vector<int> methods = inst.domain.methods_of(net.labels[compound_task]);
        if (methods.empty())
            throw MethodMismatch("compound " + net.labels[compound_task] + " has no method");
        for (int m : methods) {
            if (++nodes > node_budget)
                throw BudgetExceeded("exhaustive decomposition budget exhausted");
            if (go(decompose_step(inst.domain, net, compound_task, m).network)) return true;
        }
        return false;
    };
    go(inst.network);
    result.stats.nodes = nodes;
    result.stats.route = "oracle";
    return result;
}

unsigned long long count_full_witnesses(const Domain& d, const TaskNetwork& tn,
                                        const Bitset& s0, long long node_budget) {
    int n = tn.size();
    if (n > 62)
        throw InstanceTooLarge("witness counting limited to 62 tasks, got " +
                               std::to_string(n));
    std::vector<int> action_of(n);
    std::vector<std::uint64_t> pred_mask(n, 0);
    for (int t = 0; t < n; ++t) {
        action_of[t] = d.action_index(tn.labels[t]);
        for (int p : tn.predecessors(t).members()) pred_mask[t] |= (1ull << p);
    }
    // Keyed on the exact state, not a hash: counting must never alias.
    std::map<std::pair<std::uint64_t, Bitset>, unsigned long long> memo;
    long long nodes = 0;
    std::function<unsigned long long(std::uint64_t, const Bitset&)> go =
        [&](std::uint64_t mask, const Bitset& state) -> unsigned long long {
        if (mask + 1 == (1ull << n)) return 1;
        auto key = std::make_pair(mask, state);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (++nodes > node_budget) throw BudgetExceeded("witness counting budget exhausted");
        unsigned long long total = 0;
        for (int t = 0; t < n; ++t) {
            if (mask >> t & 1) continue;
            if ((pred_mask[t] & ~mask) != 0) continue;
            if (!is_executable(d, action_of[t], state)) continue;
            total += go(mask | (1ull << t), apply_effects(d, action_of[t], state));
        }
        memo.emplace(key, total);
        return total;
    };
    return go(0, s0);
}

} // namespace htn
