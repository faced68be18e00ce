#pragma once

#include <utility>
#include <vector>

namespace routegame {

/// Directed multigraph plus the global path table. Paths are stored as link
/// index sequences, so parallel links are first-class citizens.
struct NetworkModel {
    int nodes = 0;
    std::vector<std::pair<int, int>> links;   // (tail, head)
    std::vector<std::vector<int>> paths;      // link id sequences
    std::vector<int> path_len;                // links per path
    std::vector<std::vector<int>> paths_through;  // link id -> path ids

    int link_count() const { return static_cast<int>(links.size()); }
    int path_count() const { return static_cast<int>(paths.size()); }
    const std::vector<int>& links_of(int p) const { return paths[p]; }
    int path_source(int p) const { return links[paths[p].front()].first; }
    int path_sink(int p) const { return links[paths[p].back()].second; }
    bool link_on_path(int l, int p) const;

    // Recomputes path_len and paths_through from paths.
    void finalize();
    // Structural invariants: link endpoints in range, paths nonempty with
    // node-adjacent consecutive links, derived tables consistent.
    void validate() const;
};

/// All simple paths (no repeated node) from src to dst with at most max_hops
/// links, in depth-first order with outgoing links tried in index order.
std::vector<std::vector<int>> enumerate_simple_paths(const NetworkModel& net, int src, int dst,
                                                     int max_hops);

}  // namespace routegame
