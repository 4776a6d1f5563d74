#ifndef HTN_CORE_HPP
#define HTN_CORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "htn/errors.hpp"

namespace htn {

// ---------------------------------------------------------------------------
// Bitset: fixed-width dynamic bitset used for proposition states and task sets.
// ---------------------------------------------------------------------------
class Bitset {
public:
    Bitset() : num_bits_(0) {}
    explicit Bitset(int num_bits)
        : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    int size() const { return num_bits_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    int count() const;
    bool any() const;
    bool none() const { return !any(); }

    // True iff every bit set in this is also set in other.
    bool is_subset_of(const Bitset& other) const;
    bool intersects(const Bitset& other) const;

    Bitset& operator|=(const Bitset& other);
    Bitset& operator&=(const Bitset& other);
    // Clears every bit that is set in other.
    Bitset& subtract(const Bitset& other);

    friend bool operator==(const Bitset& a, const Bitset& b) {
        return a.num_bits_ == b.num_bits_ && a.words_ == b.words_;
    }
    friend bool operator<(const Bitset& a, const Bitset& b) {
        return a.words_ < b.words_;
    }

    std::size_t hash() const;

    // Indices of set bits, ascending.
    std::vector<int> members() const;

private:
    int num_bits_;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Domain: propositions, primitive actions with STRIPS-style effects, compound
// task names, and decomposition methods.
// ---------------------------------------------------------------------------
struct ActionDef {
    std::string name;
    std::vector<std::string> pre;
    std::vector<std::string> del;
    std::vector<std::string> add;
};

struct TaskNetwork; // forward

struct Method {
    std::string compound;
    // Methods own their network by index into Domain::method_networks to keep
    // Domain copyable without recursive types; see Domain::add_method.
    int network_index = -1;
};

class Domain {
public:
    Domain() = default;
    Domain(std::vector<std::string> propositions, std::vector<ActionDef> actions,
           std::vector<std::string> compounds = {});

    int num_propositions() const { return static_cast<int>(propositions_.size()); }
    int num_actions() const { return static_cast<int>(actions_.size()); }

    const std::vector<std::string>& propositions() const { return propositions_; }
    const std::vector<ActionDef>& actions() const { return actions_; }
    const std::vector<std::string>& compounds() const { return compounds_; }

    bool has_proposition(const std::string& p) const { return prop_index_.count(p) > 0; }
    int proposition_index(const std::string& p) const;
    bool is_action(const std::string& name) const { return action_index_.count(name) > 0; }
    bool is_compound(const std::string& name) const { return compound_index_.count(name) > 0; }
    int action_index(const std::string& name) const;

    // Precondition / delete / add masks over proposition indices.
    const Bitset& pre_mask(int action) const { return pre_masks_[action]; }
    const Bitset& del_mask(int action) const { return del_masks_[action]; }
    const Bitset& add_mask(int action) const { return add_masks_[action]; }

    Bitset make_state(const std::vector<std::string>& props) const;
    std::vector<std::string> state_names(const Bitset& state) const;

    void add_method(const std::string& compound, const TaskNetwork& network);
    const std::vector<Method>& methods() const { return methods_; }
    const TaskNetwork& method_network(int network_index) const;
    // Indices into methods() for one compound, in declaration order.
    std::vector<int> methods_of(const std::string& compound) const;

private:
    std::vector<std::string> propositions_;
    std::vector<ActionDef> actions_;
    std::vector<std::string> compounds_;
    std::map<std::string, int> prop_index_;
    std::map<std::string, int> action_index_;
    std::map<std::string, int> compound_index_;
    std::vector<Bitset> pre_masks_, del_masks_, add_masks_;
    std::vector<Method> methods_;
    std::vector<TaskNetwork> method_networks_;
};

// ---------------------------------------------------------------------------
// TaskNetwork: tasks with dense ids 0..n-1, external names, labels (action or
// compound names), and a strict partial order given by cover arcs.  The
// transitive closure is computed eagerly at construction, so queries never
// mutate and instances are safe to share across threads.
// ---------------------------------------------------------------------------
struct TaskNetwork {
    TaskNetwork() = default;
    // `order` may be any relation whose transitive closure is the intended
    // strict partial order (cover arcs, full closure, or anything between).
    // Throws CycleDetected if the relation is cyclic.
    TaskNetwork(std::vector<std::string> task_names, std::vector<std::string> task_labels,
                const std::vector<std::pair<int, int>>& order);

    int size() const { return static_cast<int>(names.size()); }

    bool precedes(int a, int b) const { return succ_closure[a].test(b); }
    const Bitset& successors(int t) const { return succ_closure[t]; }
    const Bitset& predecessors(int t) const { return pred_closure[t]; }

    // Cover arcs: (a,b) with a ≺ b and no c strictly between.
    const std::vector<std::pair<int, int>>& cover_arcs() const { return cover; }

    // Tasks comparable to nothing.
    std::vector<int> isolated_tasks() const;

    // Task ids grouped by label, ascending ids.
    std::map<std::string, std::vector<int>> tasks_by_label() const;

    std::vector<std::string> names;   // external identifiers, unique
    std::vector<std::string> labels;  // action or compound name per task
    std::vector<std::pair<int, int>> cover;
    std::vector<Bitset> succ_closure;
    std::vector<Bitset> pred_closure;
};

// Transitive closure of an arbitrary arc list over n vertices; throws
// CycleDetected on a cycle. Returned as successor bitsets.
std::vector<Bitset> transitive_closure(int n, const std::vector<std::pair<int, int>>& arcs);

// Cover relation of the strict partial order given by successor closures:
// (a,b) kept iff no c has a ≺ c ≺ b.
std::vector<std::pair<int, int>> cover_of(const std::vector<Bitset>& succ_closure);

// ---------------------------------------------------------------------------
// Execution semantics.
// ---------------------------------------------------------------------------

// True iff pre(action) ⊆ state.
bool is_executable(const Domain& d, int action, const Bitset& state);

// (state \ del) ∪ add, without precondition check.
Bitset apply_effects(const Domain& d, int action, const Bitset& state);

// Checked application; throws PreconditionUnsatisfied naming missing props.
Bitset execute_action(const Domain& d, const std::string& action, const Bitset& state);

// Executes a whole plan (sequence of action names); returns the final state or
// nullopt (with the index of the first failing step) if some precondition fails.
struct PlanResult {
    bool executable = false;
    int failed_at = -1;           // first failing position if not executable
    Bitset final_state;           // state reached (up to failure point)
};
PlanResult execute_plan(const Domain& d, const std::vector<std::string>& plan,
                        const Bitset& s0);

// True iff `order` lists every task of tn exactly once and respects ≺.
bool is_linearization(const TaskNetwork& tn, const std::vector<int>& order);

// Checks the solution conditions for a task subset + linearization against a
// primitive network: `used` must be downward closed under ≺, `order` must be a
// linearization of `used` respecting ≺, and the induced plan must be executable
// from s0. Returns false (with no throw) when any condition fails.
bool is_solution(const Domain& d, const TaskNetwork& tn, const Bitset& s0,
                 const std::vector<int>& order, bool require_full);

} // namespace htn

#endif
