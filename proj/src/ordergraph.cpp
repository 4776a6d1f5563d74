#include "htn/ordergraph.hpp"

#include <algorithm>
#include <queue>

namespace htn {

std::vector<int> isolated_tasks(const TaskNetwork& tn) {
    return tn.isolated_tasks();
}

namespace {

// Maximum bipartite matching (Hopcroft–Karp) on the comparability arcs:
// left copy of u connects to right copy of v iff u ≺ v.
struct ComparabilityMatching {
    int n = 0;
    std::vector<std::vector<int>> adj; // left -> rights
    std::vector<int> match_left;       // left u -> matched right v, or -1
    std::vector<int> match_right;      // right v -> matched left u, or -1

    explicit ComparabilityMatching(const TaskNetwork& tn) : n(tn.size()), adj(n) {
        for (int u = 0; u < n; ++u) adj[u] = tn.successors(u).members();
        match_left.assign(n, -1);
        match_right.assign(n, -1);
        static constexpr int INF = 1 << 30;
        std::vector<int> dist(n);
        auto bfs = [&]() {
            std::queue<int> q;
            for (int u = 0; u < n; ++u) {
                if (match_left[u] == -1) {
                    dist[u] = 0;
                    q.push(u);
                } else {
                    dist[u] = INF;
                }
            }
            bool found = false;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int v : adj[u]) {
                    int w = match_right[v];
                    if (w == -1) {
                        found = true;
                    } else if (dist[w] == INF) {
                        dist[w] = dist[u] + 1;
                        q.push(w);
                    }
                }
            }
            return found;
        };
        auto dfs = [&](auto&& self, int u) -> bool {
            for (int v : adj[u]) {
                int w = match_right[v];
                if (w == -1 || (dist[w] == dist[u] + 1 && self(self, w))) {
                    match_left[u] = v;
                    match_right[v] = u;
                    return true;
                }
            }
            dist[u] = INF;
            return false;
        };
        while (bfs()) {
            for (int u = 0; u < n; ++u)
                if (match_left[u] == -1) dfs(dfs, u);
        }
    }

    int size() const {
        int m = 0;
        for (int u = 0; u < n; ++u)
            if (match_left[u] != -1) ++m;
        return m;
    }
};

} // namespace

std::vector<std::vector<int>> min_chain_decomposition(const TaskNetwork& tn) {
    ComparabilityMatching m(tn);
    int n = tn.size();
    std::vector<bool> isolated(n, false);
    for (int t : tn.isolated_tasks()) isolated[t] = true;
    std::vector<std::vector<int>> chains;
    for (int u = 0; u < n; ++u) {
        if (isolated[u] || m.match_right[u] != -1) continue; // not a chain head
        std::vector<int> chain;
        for (int v = u; v != -1; v = m.match_left[v]) chain.push_back(v);
        chains.push_back(std::move(chain));
    }
    return chains;
}

int gpow(const TaskNetwork& tn) {
    ComparabilityMatching m(tn);
    int non_isolated = tn.size() - static_cast<int>(tn.isolated_tasks().size());
    return non_isolated - m.size();
}

std::vector<int> min_vertex_cover(const TaskNetwork& tn) {
    ComparabilityMatching m(tn);
    int n = tn.size();
    // König: vertices reachable by alternating paths from unmatched left
    // vertices; the bipartite cover is (L \ Z) ∪ (R ∩ Z), and a task belongs to
    // a maximum antichain iff neither of its copies is in that cover.
    std::vector<bool> z_left(n, false), z_right(n, false);
    std::queue<int> q;
    for (int u = 0; u < n; ++u) {
        if (m.match_left[u] == -1 && !m.adj[u].empty()) {
            // Left vertices with no edge never enter a cover anyway; seeding
            // them is harmless but keeping Z minimal keeps the walk cheap.
            z_left[u] = true;
            q.push(u);
        } else if (m.match_left[u] == -1) {
            z_left[u] = true;
        }
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : m.adj[u]) {
            if (z_right[v]) continue;
            z_right[v] = true;
            int w = m.match_right[v];
            if (w != -1 && !z_left[w]) {
                z_left[w] = true;
                q.push(w);
            }
        }
    }
    std::vector<int> cover;
    for (int t = 0; t < n; ++t) {
        bool left_in_cover = !z_left[t];
        bool right_in_cover = z_right[t];
        if (left_in_cover || right_in_cover) cover.push_back(t);
    }
    return cover;
}

OrderMeasures measures(const TaskNetwork& tn) {
    OrderMeasures out;
    out.num_tasks = tn.size();
    out.num_isolated = static_cast<int>(tn.isolated_tasks().size());
    out.width = gpow(tn);
    out.vcn = static_cast<int>(min_vertex_cover(tn).size());
    return out;
}

} // namespace htn
