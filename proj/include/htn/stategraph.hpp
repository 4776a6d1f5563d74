#ifndef HTN_STATEGRAPH_HPP
#define HTN_STATEGRAPH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htn/core.hpp"

namespace htn {

// ---------------------------------------------------------------------------
// State transition graph: all states reachable from s0, one arc per
// (state, executable action) pair. State 0 is always s0.
// ---------------------------------------------------------------------------
struct StateGraph {
    std::vector<Bitset> states;
    // arcs[s] lists (action index, target state index), ascending action index.
    std::vector<std::vector<std::pair<int, int>>> arcs;

    int num_states() const { return static_cast<int>(states.size()); }
    // Index of a state, or -1 if not reachable.
    int index_of(const Bitset& s) const;
    // Target of action a in state s, or -1 if a is not executable in s.
    int target(int s, int a) const;
};

// BFS over executable actions; throws StateSpaceExceeded past state_cap.
StateGraph build_state_graph(const Domain& d, const Bitset& s0, int state_cap);

// Graphviz rendering (states as proposition sets, arcs labeled by action).
std::string to_dot(const Domain& d, const StateGraph& g);

// ---------------------------------------------------------------------------
// Action equivalence: two actions are equivalent iff they are executable in
// exactly the same reachable states and lead to the same targets there.
// ---------------------------------------------------------------------------
struct EquivClasses {
    std::vector<int> class_of_action;        // action index -> class id
    std::vector<std::vector<int>> classes;   // class id -> ascending action indices
    // signature[c][s] = target state of any class-c action in state s, or -1.
    std::vector<std::vector<int>> signature;
};

EquivClasses action_equivalence_classes(const Domain& d, const StateGraph& g);

// ---------------------------------------------------------------------------
// Demand reductions for action-multiset queries. `demand` maps action name to
// the number of times it must occur in the executed plan.
// ---------------------------------------------------------------------------

// Decides trivially-no instances: total demand exceeding the task count, or
// some action demanded more often than it has tasks. nullopt = undecided.
std::optional<bool> reduce_R0(const TaskNetwork& tn,
                              const std::map<std::string, int>& demand);

struct R1Result {
    TaskNetwork tn;                       // relabeled network
    std::map<std::string, int> demand;    // rewritten demand
    // Groups of original actions merged into one surviving label (the group's
    // lexicographically smallest member). Singleton groups are omitted.
    std::vector<std::vector<std::string>> merged_groups;
};

// Merges equivalent actions whose task positions are interchangeable: every
// task of either action has the same ≺-predecessor set and ≺-successor set.
// Demands add up; a plan for the reduced instance can always be relabeled into
// one for the original instance (and vice versa).
R1Result reduce_R1(const Domain& d, const TaskNetwork& tn,
                   const std::map<std::string, int>& demand, const EquivClasses& eq);

// ---------------------------------------------------------------------------
// Strong classes: tasks outside an ordered cover slice grouped by action
// equivalence class plus admissible segment interval. Segment i is the stretch
// executed after the i-th cover task (segment 0 precedes all of them), so a
// task t with cover predecessors/successors among v_1..v_m is usable exactly
// in segments lo(t)..hi(t).
// ---------------------------------------------------------------------------
struct StrongClass {
    int equiv_class = -1;
    int lo = 0;
    int hi = 0;
    std::vector<int> tasks;                    // ascending task ids
    std::map<std::string, int> count_by_action; // label -> member count
};

struct StrongClasses {
    std::vector<StrongClass> classes;
    std::vector<int> class_of_task; // task id -> class id, or -1 if excluded
};

// `usable` masks the candidate tasks (callers exclude cover tasks and tasks
// forbidden by unused cover predecessors); tasks with an empty interval are
// dropped (class_of_task -1).
StrongClasses strong_classes(const TaskNetwork& tn, const EquivClasses& eq,
                             const std::vector<int>& action_of_task,
                             const std::vector<int>& cover_order,
                             const Bitset& usable);

// ---------------------------------------------------------------------------
// Augmented graph: one arc family per strong class, restricted to states where
// the class's action signature is defined.
// ---------------------------------------------------------------------------
struct AugmentedGraph {
    // arcs[s] lists (strong class id, target state), ascending class id.
    std::vector<std::vector<std::pair<int, int>>> arcs;
};

AugmentedGraph augmented_graph(const StateGraph& g, const EquivClasses& eq,
                               const StrongClasses& sc);

} // namespace htn

#endif
