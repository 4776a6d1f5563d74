#ifndef HTN_HIERARCHY_HPP
#define HTN_HIERARCHY_HPP

#include <functional>
#include <optional>

#include "htn/solvers.hpp"

namespace htn {

// Hierarchy measures of a network within a domain. depth is the maximum number
// of decomposition rounds until the network is primitive (0 for primitive
// networks) or nullopt when a reachable compound can recurse forever;
// max_method_size and max_methods_per_compound range over the whole domain.
struct HierarchyMeasures {
    int compound_count = 0;                 // compound tasks in the network
    int max_method_size = 0;                // largest method network, 0 if no methods
    std::optional<int> depth = 0;           // nullopt = unbounded recursion
    int max_methods_per_compound = 0;       // 0 if the domain has no methods
};

HierarchyMeasures measure_hierarchy(const Domain& d, const TaskNetwork& tn);

// One decomposition step: replaces `task` (compound) by the network of the
// method with the given index in d.methods(). New tasks inherit the replaced
// task's order relations; their names extend the replaced task's name so that
// repeated decomposition keeps names unique.
struct Decomposition {
    TaskNetwork network;
    std::vector<int> old_to_new;  // old task id -> new id; replaced task -> -1
    std::vector<int> new_task_ids;
};

Decomposition decompose_step(const Domain& d, const TaskNetwork& tn, int task,
                             int method_index);

// Enumerates every primitive network the given network decomposes into,
// without deduplication, always expanding the lowest compound task id and
// trying methods in declaration order. The callback returns false to stop the
// enumeration early. Throws BudgetExceeded after node_budget expansions and
// InfiniteDepth when the reachable hierarchy can recurse forever.
void enumerate_decompositions(const Domain& d, const TaskNetwork& tn,
                              const std::function<bool(const TaskNetwork&)>& visit,
                              long long node_budget = 10'000'000);

// Canonical encoding of a primitive network: two networks get the same string
// iff they are isomorphic (same labels, same order up to renaming task ids).
// Exponential in the worst case; intended for small networks.
std::string canonical_network_key(const TaskNetwork& tn, long long node_budget = 1'000'000);

// Solves any query on a network with compound tasks by enumerating its
// primitive decompositions and dispatching each; the first yes wins.
struct CompoundVerdict {
    Verdict verdict;
    // The primitive network the witness refers to (present iff yes).
    std::optional<TaskNetwork> decomposition;
};

CompoundVerdict solve_compound(const PrimitiveInstance& inst, const SolveOptions& opts = {});

} // namespace htn

#endif
