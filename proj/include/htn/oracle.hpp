#ifndef HTN_ORACLE_HPP
#define HTN_ORACLE_HPP

#include "htn/solvers.hpp"

namespace htn {

// Exhaustive reference solver over (used-task-set, state) pairs. Exact for
// every primitive instance and every query; exponential in the task count, so
// callers bound the size. Throws BudgetExceeded past node_budget search nodes.
Verdict oracle_primitive(const PrimitiveInstance& inst,
                         long long node_budget = 50'000'000);

// Exhaustive reference solver for networks with compound tasks: expands every
// decomposition (no deduplication) and runs oracle_primitive on each leaf.
Verdict oracle_compound(const PrimitiveInstance& inst,
                        long long node_budget = 50'000'000);

// Number of executable full linearizations, counted by a memoized sweep over
// (used-task-set, state) pairs.
unsigned long long count_full_witnesses(const Domain& d, const TaskNetwork& tn,
                                        const Bitset& s0,
                                        long long node_budget = 50'000'000);

} // namespace htn

#endif
