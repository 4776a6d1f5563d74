#ifndef HTN_ORDERGRAPH_HPP
#define HTN_ORDERGRAPH_HPP

#include <vector>

#include "htn/core.hpp"

namespace htn {

// Tasks comparable to no other task.
std::vector<int> isolated_tasks(const TaskNetwork& tn);

// Minimum partition of the non-isolated tasks into chains (totally ordered
// subsets). Each chain is listed in ≺ order; chains are sorted by their first
// task id. Computed via maximum bipartite matching on the comparability arcs,
// so the count equals the width of the order restricted to non-isolated tasks.
std::vector<std::vector<int>> min_chain_decomposition(const TaskNetwork& tn);

// Number of chains in a minimum chain decomposition of the non-isolated tasks.
int gpow(const TaskNetwork& tn);

// Minimum vertex cover of the undirected comparability graph (one edge per
// comparable task pair). The comparability graph is perfect, so the cover is
// obtained exactly as the complement of a maximum antichain, which in turn
// comes from the same matching that yields the chain decomposition.
std::vector<int> min_vertex_cover(const TaskNetwork& tn);

struct OrderMeasures {
    int num_tasks = 0;
    int num_isolated = 0;
    int width = 0; // gpow
    int vcn = 0;
};

OrderMeasures measures(const TaskNetwork& tn);

} // namespace htn

#endif
