#ifndef HTN_SOLVERS_HPP
#define HTN_SOLVERS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htn/core.hpp"

namespace htn {

enum class Query { Verify, Exists, Executable, Reach };

std::string query_name(Query q);
Query query_from_name(const std::string& name);

// A ground instance: the network may contain compound labels, in which case
// only the hierarchy layer accepts it; dispatch() requires primitive labels.
struct PrimitiveInstance {
    Domain domain;
    TaskNetwork network;
    Bitset s0;
    Query query = Query::Exists;
    std::vector<std::string> plan;      // Verify: the plan to check
    std::map<std::string, int> demand;  // Executable: required action counts
    Bitset goal;                        // Reach: satisfied by any superset
};

struct SolveOptions {
    int gpow_threshold = 4;   // use the chain DP up to this width
    int vcn_threshold = 8;    // use the cover branching up to this cover size
    int state_cap = 4096;     // abort state graph construction beyond this
    long long node_budget = 10'000'000;
    int oracle_task_cap = 12; // exhaustive fallback only up to this many tasks
};

struct SolveStats {
    std::string route; // "trivial", "antichain", "gpow-dp", "vcn", "oracle"
    long long nodes = 0;
};

struct Verdict {
    bool yes = false;
    // Task ids in execution order and their labels; empty for "no". Witnesses
    // always satisfy is_solution on the solved network.
    std::vector<int> witness_tasks;
    std::vector<std::string> witness_plan;
    SolveStats stats;
};

// --- Plan Verification -------------------------------------------------------

// Chain DP over a minimum chain decomposition: tracks how far each chain has
// been consumed while scanning the plan; isolated tasks are consumed by label
// counting. Exact for every primitive network; cost grows with the width.
Verdict verify_gpow(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                    const std::vector<std::string>& plan, const SolveOptions& opts = {});

// Branches over orderings of a minimum vertex cover of the comparability
// graph, then fills the plan greedily by earliest-deadline-first, where a
// task's deadline is the first cover task that must come after it.
Verdict verify_vcn(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                   const std::vector<std::string>& plan, const SolveOptions& opts = {});

// --- State Reachability / Action Executability on unordered networks ---------

// Requires an empty order. Searches vertex-simple paths in the state graph
// (parallel arcs thinned to the state count, zero-supply arcs dropped) under
// per-action supply limits; accepts any visited state containing goal.
Verdict reach_antichain(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                        const Bitset& goal, const SolveOptions& opts = {});

// Requires an empty order. Applies the demand reductions, then enumerates
// vertex-simple paths plus connected sets of vertex-simple cycles in the state
// graph and checks per-action usage windows with an integer feasibility
// search. The witness is rebalanced to honor the original per-action demands.
Verdict exec_antichain(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       const std::map<std::string, int>& demand,
                       const SolveOptions& opts = {});

// --- State Reachability / Action Executability, ordered networks -------------

// Chain DP over (state, chain prefixes, per-class isolated counts).
Verdict reach_exec_gpow(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                        Query query, const std::map<std::string, int>& demand,
                        const Bitset& goal, const SolveOptions& opts = {});

// Vertex cover branching: chooses the used cover tasks and their order, then
// searches segment paths and attached cycle sets in the class-labeled state
// graph, with an integer feasibility check on cycle counts and class supplies.
Verdict reach_exec_vcn(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       Query query, const std::map<std::string, int>& demand,
                       const Bitset& goal, const SolveOptions& opts = {});

// --- Aggregate entry points ---------------------------------------------------

// Plan Existence == Action Executability demanding every task's label count.
Verdict plan_existence(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                       const SolveOptions& opts = {});

// Routes an instance to a solver: trivial checks first, then the unordered
// special case, then the chain DP / cover branching by threshold, then the
// exhaustive fallback. Budget or state-space overruns fall back to the
// exhaustive search when the instance is small enough; otherwise they
// propagate. Throws InstanceTooLarge when nothing applies.
Verdict dispatch(const PrimitiveInstance& inst, const SolveOptions& opts = {});

} // namespace htn

#endif
