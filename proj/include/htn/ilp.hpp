#ifndef HTN_ILP_HPP
#define HTN_ILP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "htn/errors.hpp"

namespace htn {

// Two-sided linear constraint lo ≤ Σ coeff·var ≤ hi (inclusive); use
// IlpProblem::kNoBound sentinels for one-sided constraints.
struct IlpConstraint {
    std::vector<std::pair<int, long long>> terms; // (variable index, coefficient)
    long long lo;
    long long hi;
};

struct IlpProblem {
    static constexpr long long kNoBound = (1LL << 60);

    int num_vars = 0;
    std::vector<long long> lower; // per-variable lower bound
    std::vector<long long> upper; // per-variable upper bound or kNoBound
    std::vector<IlpConstraint> constraints;

    int add_var(long long lo = 0, long long hi = kNoBound);
    void add_le(std::vector<std::pair<int, long long>> terms, long long hi);
    void add_ge(std::vector<std::pair<int, long long>> terms, long long lo);
    void add_eq(std::vector<std::pair<int, long long>> terms, long long value);
};

// Finds any integral assignment satisfying all bounds and constraints, or
// nullopt if none exists. Search: repeated interval propagation to a fixpoint,
// then branching on the variable with the smallest remaining domain, trying
// values ascending. Variables without an explicit upper bound must acquire one
// from some ≤-constraint with nonnegative coefficients, otherwise Error is
// thrown (a search over an unbounded domain cannot be exhaustive). Throws
// BudgetExceeded when more than node_budget assignments are attempted.
std::optional<std::vector<long long>> feasible(const IlpProblem& p, long long node_budget);

} // namespace htn

#endif
