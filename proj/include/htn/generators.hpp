#ifndef HTN_GENERATORS_HPP
#define HTN_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "htn/solvers.hpp"

namespace htn {

// ---------------------------------------------------------------------------
// Word shuffle instances. Words use the two-letter alphabet {a, b}; any other
// character throws Error. The membership question "is `target` an interleaving
// of `parts`?" maps to a yes-instance exactly.
// ---------------------------------------------------------------------------

// One unordered chain per nonempty part, labels "a"/"b" with empty effects;
// query verifies `target` as the plan. Width equals the number of nonempty
// parts.
PrimitiveInstance gen_shuffle_verification(const std::vector<std::string>& parts,
                                           const std::string& target);

// Token-passing domain: push_x hands the focus to letter x, pop_x matches it
// against `word`, and a final action closes the run. The pops form one chain
// in word order with the closing task appended; each part contributes a chain
// of pushes whose last task precedes the closing task. The query asks for
// reachability of the goal proposition or executability of the closing action
// (once). The state graph from s0 has at most four states.
PrimitiveInstance gen_shuffle_state(const std::string& word,
                                    const std::vector<std::string>& parts,
                                    Query query);

// ---------------------------------------------------------------------------
// Multicolored clique instances. The graph must be properly colored (colors
// 0..num_colors-1, no edge inside a color class); violations throw
// ImproperColoring. The generated hierarchy picks at most one vertex per color
// and optionally one edge per listed edge; a final action needs every color
// pair connected, so the query is yes iff the graph has a clique with one
// vertex of each color.
// ---------------------------------------------------------------------------

struct ColoredGraph {
    int num_vertices = 0;
    int num_colors = 0;
    std::vector<int> color;                    // per vertex, 0-based
    std::vector<std::pair<int, int>> edges;    // normalized to (min, max)
};

// Which hierarchy measure the instance exercises while the others stay small:
// the number of compound tasks, the method size, or the decomposition depth.
enum class CliqueVariant { CompoundCount, MethodSize, Depth };

PrimitiveInstance gen_clique(const ColoredGraph& graph, CliqueVariant variant,
                             Query query);

// ---------------------------------------------------------------------------
// Seeded random primitive instances. Identical (seed, spec) pairs produce
// identical instances on every platform; only the raw mt19937_64 stream is
// taken from the standard library.
// ---------------------------------------------------------------------------

enum class RandomShape { Antichain, Chains, StarForest, RandomDag };

struct RandomSpec {
    int num_tasks = 6;
    int num_props = 4;
    int num_actions = 4;
    RandomShape shape = RandomShape::RandomDag;
    int width = 2;          // Chains: number of chains
    double density = 0.3;   // RandomDag: arc probability per pair
    Query query = Query::Exists;
};

PrimitiveInstance gen_random(std::uint64_t seed, const RandomSpec& spec);

} // namespace htn

#endif
