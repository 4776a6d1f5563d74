#include "htn/ilp.hpp"

#include <algorithm>
#include <string>

namespace htn {

namespace {
constexpr long long INF = IlpProblem::kNoBound;

long long sat_add(long long a, long long b) {
    if (a >= INF || b >= INF) return INF;
    if (a <= -INF || b <= -INF) return -INF;
    return std::clamp(a + b, -INF, INF);
}

long long sat_mul(long long c, long long v) {
    if (v >= INF) return c > 0 ? INF : (c < 0 ? -INF : 0);
    if (v <= -INF) return c > 0 ? -INF : (c < 0 ? INF : 0);
    return std::clamp(c * v, -INF, INF);
}

long long div_floor(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long div_ceil(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) == (b < 0))) ? q + 1 : q;
}
} // namespace

int IlpProblem::add_var(long long lo, long long hi) {
    lower.push_back(lo);
    upper.push_back(hi);
    return num_vars++;
}

void IlpProblem::add_le(std::vector<std::pair<int, long long>> terms, long long hi) {
    constraints.push_back({std::move(terms), -kNoBound, hi});
}

void IlpProblem::add_ge(std::vector<std::pair<int, long long>> terms, long long lo) {
    constraints.push_back({std::move(terms), lo, kNoBound});
}

void IlpProblem::add_eq(std::vector<std::pair<int, long long>> terms, long long value) {
    constraints.push_back({std::move(terms), value, value});
}

namespace {

struct Search {
    const IlpProblem& p;
    long long budget;
    long long nodes = 0;

    // Propagates interval bounds to a fixpoint. Returns false on an empty
    // domain or an unsatisfiable constraint.
    bool propagate(std::vector<long long>& lo, std::vector<long long>& hi) const {
        bool changed = true;
        int rounds = 0;
        while (changed) {
            if (++rounds > 10000)
                throw BudgetExceeded("interval propagation did not converge");
            changed = false;
            for (const IlpConstraint& c : p.constraints) {
                long long sum_min = 0, sum_max = 0;
                for (auto [v, coeff] : c.terms) {
                    sum_min = sat_add(sum_min, coeff > 0 ? sat_mul(coeff, lo[v])
                                                         : sat_mul(coeff, hi[v]));
                    sum_max = sat_add(sum_max, coeff > 0 ? sat_mul(coeff, hi[v])
                                                         : sat_mul(coeff, lo[v]));
                }
                if (sum_min > c.hi || sum_max < c.lo) return false;
                for (auto [v, coeff] : c.terms) {
                    // Contribution of the other terms.
                    long long self_min = coeff > 0 ? sat_mul(coeff, lo[v]) : sat_mul(coeff, hi[v]);
                    long long self_max = coeff > 0 ? sat_mul(coeff, hi[v]) : sat_mul(coeff, lo[v]);
                    long long others_min = sat_add(sum_min, -self_min);
                    long long others_max = sat_add(sum_max, -self_max);
                    long long new_lo = lo[v], new_hi = hi[v];
                    if (c.hi < INF && others_min > -INF) {
                        // coeff*v ≤ hi - others_min
                        long long room = sat_add(c.hi, -others_min);
                        if (room < INF) {
                            if (coeff > 0)
                                new_hi = std::min(new_hi, div_floor(room, coeff));
                            else
                                new_lo = std::max(new_lo, div_ceil(room, coeff));
                        }
                    }
                    if (c.lo > -INF && others_max < INF) {
                        // coeff*v ≥ lo - others_max
                        long long room = sat_add(c.lo, -others_max);
                        if (room > -INF) {
                            if (coeff > 0)
                                new_lo = std::max(new_lo, div_ceil(room, coeff));
                            else
                                new_hi = std::min(new_hi, div_floor(room, coeff));
                        }
                    }
                    if (new_lo > new_hi) return false;
                    if (new_lo != lo[v] || new_hi != hi[v]) {
                        lo[v] = new_lo;
                        hi[v] = new_hi;
                        changed = true;
                    }
                }
            }
        }
        return true;
    }

    bool solve(std::vector<long long>& lo, std::vector<long long>& hi,
               std::vector<long long>& out) {
        if (!propagate(lo, hi)) return false;
        int pick = -1;
        long long best_span = INF;
        for (int v = 0; v < p.num_vars; ++v) {
            if (lo[v] == hi[v]) continue;
            long long span = hi[v] - lo[v];
            if (span < best_span) {
                best_span = span;
                pick = v;
            }
        }
        if (pick == -1) {
            out.assign(lo.begin(), lo.end());
            return true;
        }
        for (long long value = lo[pick]; value <= hi[pick]; ++value) {
            if (++nodes > budget) throw BudgetExceeded("feasibility search budget exhausted");
            std::vector<long long> nlo = lo, nhi = hi;
            nlo[pick] = nhi[pick] = value;
            if (solve(nlo, nhi, out)) return true;
        }
        return false;
    }
};

} // namespace

std::optional<std::vector<long long>> feasible(const IlpProblem& p, long long node_budget) {
    std::vector<long long> lo = p.lower, hi = p.upper;
    // Every unbounded variable must get a finite ceiling from a ≤-constraint in
    // which it appears with a positive coefficient and no term can run to -∞.
    for (int v = 0; v < p.num_vars; ++v) {
        if (hi[v] < INF) continue;
        long long best = INF;
        for (const IlpConstraint& c : p.constraints) {
            if (c.hi >= INF) continue;
            long long coeff_v = 0;
            long long others_min = 0;
            bool usable = true;
            for (auto [u, cf] : c.terms) {
                if (u == v) {
                    coeff_v = cf;
                    continue;
                }
                long long m = cf > 0 ? sat_mul(cf, lo[u]) : sat_mul(cf, hi[u]);
                if (m <= -INF || m >= INF) {
                    usable = false;
                    break;
                }
                others_min = sat_add(others_min, m);
            }
            if (!usable || coeff_v <= 0) continue;
            best = std::min(best, div_floor(sat_add(c.hi, -others_min), coeff_v));
        }
        if (best >= INF)
            throw Error("variable " + std::to_string(v) +
                        " has no upper bound; feasibility search would not terminate");
        hi[v] = std::max(best, lo[v] - 1); // empty domain signals infeasible
        if (hi[v] < lo[v]) return std::nullopt;
    }
    Search s{p, node_budget};
    std::vector<long long> out;
    if (!s.solve(lo, hi, out)) return std::nullopt;
    return out;
}

} // namespace htn
