#include "htn/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace htn {

namespace {

// Depth of a compound name: 1 + the worst depth among its method networks.
// on_stack detects recursion, which makes the depth unbounded.
std::optional<int> depth_of(const Domain& d, const std::string& compound,
                            std::map<std::string, int>& memo,
                            std::set<std::string>& on_stack) {
    auto it = memo.find(compound);
    if (it != memo.end()) return it->second;
    if (on_stack.count(compound)) return std::nullopt;
    std::vector<int> methods = d.methods_of(compound);
    if (methods.empty())
        throw MethodMismatch("compound " + compound + " has no method");
    on_stack.insert(compound);
    int worst = 0;
    for (int m : methods) {
        const TaskNetwork& net = d.method_network(d.methods()[m].network_index);
        for (const std::string& label : net.labels) {
            if (!d.is_compound(label)) continue;
            std::optional<int> sub = depth_of(d, label, memo, on_stack);
            if (!sub) {
                on_stack.erase(compound);
                return std::nullopt;
            }
            worst = std::max(worst, *sub);
        }
    }
    on_stack.erase(compound);
    memo.emplace(compound, 1 + worst);
    return 1 + worst;
}

} // namespace

HierarchyMeasures measure_hierarchy(const Domain& d, const TaskNetwork& tn) {
    HierarchyMeasures m;
    for (const std::string& label : tn.labels)
        if (d.is_compound(label)) m.compound_count++;
    for (const Method& method : d.methods())
        m.max_method_size =
            std::max(m.max_method_size, d.method_network(method.network_index).size());
    for (const std::string& c : d.compounds())
        m.max_methods_per_compound = std::max(
            m.max_methods_per_compound, static_cast<int>(d.methods_of(c).size()));
    std::map<std::string, int> memo;
    std::set<std::string> on_stack;
    int depth = 0;
    for (const std::string& label : tn.labels) {
        if (!d.is_compound(label)) continue;
        std::optional<int> sub = depth_of(d, label, memo, on_stack);
        if (!sub) {
            m.depth = std::nullopt;
            return m;
        }
        depth = std::max(depth, *sub);
    }
    m.depth = depth;
    return m;
}

Decomposition decompose_step(const Domain& d, const TaskNetwork& tn, int task,
                             int method_index) {
    if (task < 0 || task >= tn.size())
        throw ParseError("decompose_step: task id out of range");
    if (!d.is_compound(tn.labels[task]))
        throw NotCompound("decompose_step: task " + tn.names[task] + " is primitive");
    if (method_index < 0 || method_index >= static_cast<int>(d.methods().size()))
        throw MethodMismatch("decompose_step: method index out of range");
    const Method& method = d.methods()[method_index];
    if (method.compound != tn.labels[task])
        throw MethodMismatch("decompose_step: method is for compound " + method.compound +
                             ", task is labeled " + tn.labels[task]);
    const TaskNetwork& sub = d.method_network(method.network_index);

    Decomposition out;
    out.old_to_new.assign(tn.size(), -1);
    std::vector<std::string> names, labels;
    std::set<std::string> taken;
    for (int t = 0; t < tn.size(); ++t) {
        if (t == task) continue;
        out.old_to_new[t] = static_cast<int>(names.size());
        names.push_back(tn.names[t]);
        labels.push_back(tn.labels[t]);
        taken.insert(tn.names[t]);
    }
    for (int s = 0; s < sub.size(); ++s) {
        std::string base = tn.names[task] + "." + sub.names[s];
        std::string name = base;
        for (int k = 2; taken.count(name); ++k) name = base + "#" + std::to_string(k);
        taken.insert(name);
        out.new_task_ids.push_back(static_cast<int>(names.size()));
        names.push_back(name);
        labels.push_back(sub.labels[s]);
    }

    std::vector<std::pair<int, int>> arcs;
    for (int a = 0; a < tn.size(); ++a) {
        if (a == task) continue;
        for (int b : tn.successors(a).members()) {
            if (b == task) continue;
            arcs.emplace_back(out.old_to_new[a], out.old_to_new[b]);
        }
    }
    for (int t = 0; t < tn.size(); ++t) {
        if (t == task) continue;
        if (tn.precedes(t, task))
            for (int s : out.new_task_ids) arcs.emplace_back(out.old_to_new[t], s);
        if (tn.precedes(task, t))
            for (int s : out.new_task_ids) arcs.emplace_back(s, out.old_to_new[t]);
    }
    for (int a = 0; a < sub.size(); ++a)
        for (int b : sub.successors(a).members())
            arcs.emplace_back(out.new_task_ids[a], out.new_task_ids[b]);

    out.network = TaskNetwork(std::move(names), std::move(labels), arcs);
    return out;
}

void enumerate_decompositions(const Domain& d, const TaskNetwork& tn,
                              const std::function<bool(const TaskNetwork&)>& visit,
                              long long node_budget) {
    HierarchyMeasures m = measure_hierarchy(d, tn);
    if (!m.depth)
        throw InfiniteDepth("network can be decomposed indefinitely");
    long long nodes = 0;
    std::function<bool(const TaskNetwork&)> go = [&](const TaskNetwork& net) -> bool {
        int compound_task = -1;
        for (int t = 0; t < net.size(); ++t) {
            if (d.is_compound(net.labels[t])) {
                compound_task = t;
                break;
            }
        }
        if (compound_task == -1) return visit(net);
        for (int method : d.methods_of(net.labels[compound_task])) {
            if (++nodes > node_budget)
                throw BudgetExceeded("decomposition enumeration budget exhausted");
            if (!go(decompose_step(d, net, compound_task, method).network)) return false;
        }
        return true;
    };
    go(tn);
}

namespace {

// Color refinement over (label, predecessor colors, successor colors) until
// stable; colors are renumbered each round by sorted signature, so they are
// isomorphism-invariant.
std::vector<int> refine_colors(const TaskNetwork& tn) {
    int n = tn.size();
    std::vector<int> color(n, 0);
    {
        std::map<std::string, int> by_label;
        std::vector<std::string> sorted_labels = tn.labels;
        std::sort(sorted_labels.begin(), sorted_labels.end());
        sorted_labels.erase(std::unique(sorted_labels.begin(), sorted_labels.end()),
                            sorted_labels.end());
        for (int i = 0; i < static_cast<int>(sorted_labels.size()); ++i)
            by_label[sorted_labels[i]] = i;
        for (int t = 0; t < n; ++t) color[t] = by_label[tn.labels[t]];
    }
    while (true) {
        std::vector<std::tuple<int, std::vector<int>, std::vector<int>>> sig(n);
        for (int t = 0; t < n; ++t) {
            std::vector<int> preds, succs;
            for (int p : tn.predecessors(t).members()) preds.push_back(color[p]);
            for (int s : tn.successors(t).members()) succs.push_back(color[s]);
            std::sort(preds.begin(), preds.end());
            std::sort(succs.begin(), succs.end());
            sig[t] = {color[t], std::move(preds), std::move(succs)};
        }
        std::vector<std::tuple<int, std::vector<int>, std::vector<int>>> unique_sigs = sig;
        std::sort(unique_sigs.begin(), unique_sigs.end());
        unique_sigs.erase(std::unique(unique_sigs.begin(), unique_sigs.end()),
                          unique_sigs.end());
        std::vector<int> next(n);
        for (int t = 0; t < n; ++t)
            next[t] = static_cast<int>(
                std::lower_bound(unique_sigs.begin(), unique_sigs.end(), sig[t]) -
                unique_sigs.begin());
        if (next == color) return color;
        color = std::move(next);
    }
}

} // namespace

std::string canonical_network_key(const TaskNetwork& tn, long long node_budget) {
    int n = tn.size();
    std::vector<int> color = refine_colors(tn);
    // Vertex order: color classes ascending, any permutation inside a class;
    // the key is the minimum encoding over those permutations. Isomorphisms
    // preserve refined colors, so equal keys are exactly isomorphic networks.
    std::vector<std::vector<int>> classes;
    {
        int num_colors = n == 0 ? 0 : *std::max_element(color.begin(), color.end()) + 1;
        classes.assign(num_colors, {});
        for (int t = 0; t < n; ++t) classes[color[t]].push_back(t);
    }
    std::vector<int> perm;
    perm.reserve(n);
    std::string best;
    long long nodes = 0;
    auto encode = [&](const std::vector<int>& order) {
        std::ostringstream os;
        os << n << ";";
        for (int t : order) os << tn.labels[t] << ",";
        os << "|";
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[order[i]] = i;
        std::vector<std::pair<int, int>> arcs;
        for (int a = 0; a < n; ++a)
            for (int b : tn.successors(a).members()) arcs.emplace_back(pos[a], pos[b]);
        std::sort(arcs.begin(), arcs.end());
        for (auto [a, b] : arcs) os << a << ">" << b << ";";
        return os.str();
    };
    std::function<void(std::size_t)> go = [&](std::size_t ci) {
        if (ci == classes.size()) {
            if (++nodes > node_budget)
                throw BudgetExceeded("canonical form search budget exhausted");
            std::string enc = encode(perm);
            if (best.empty() || enc < best) best = enc;
            return;
        }
        std::vector<int> cls = classes[ci];
        std::sort(cls.begin(), cls.end());
        do {
            std::size_t base = perm.size();
            perm.insert(perm.end(), cls.begin(), cls.end());
            go(ci + 1);
            perm.resize(base);
        } while (std::next_permutation(cls.begin(), cls.end()));
    };
    go(0);
    return best.empty() ? encode({}) : best;
}

CompoundVerdict solve_compound(const PrimitiveInstance& inst, const SolveOptions& opts) {
    CompoundVerdict out;
    bool primitive = true;
    for (const std::string& label : inst.network.labels)
        if (inst.domain.is_compound(label)) primitive = false;
    if (primitive) {
        out.verdict = dispatch(inst, opts);
        if (out.verdict.yes) out.decomposition = inst.network;
        return out;
    }
    long long leaves = 0;
    enumerate_decompositions(
        inst.domain, inst.network,
        [&](const TaskNetwork& net) {
            ++leaves;
            PrimitiveInstance leaf = inst;
            leaf.network = net;
            Verdict v = dispatch(leaf, opts);
            if (v.yes) {
                out.verdict = v;
                out.decomposition = net;
                return false;
            }
            return true;
        },
        opts.node_budget);
    out.verdict.stats.nodes += leaves;
    if (out.verdict.stats.route.empty()) out.verdict.stats.route = "compound";
    return out;
}

} // namespace htn
