#include "routegame/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace routegame {

bool NetworkModel::link_on_path(int l, int p) const {
    const auto& seq = paths[p];
    return std::find(seq.begin(), seq.end(), l) != seq.end();
}

void NetworkModel::finalize() {
    path_len.assign(paths.size(), 0);
    paths_through.assign(links.size(), {});
    for (int p = 0; p < path_count(); ++p) {
        path_len[p] = static_cast<int>(paths[p].size());
        for (int l : paths[p]) paths_through[l].push_back(p);
    }
}

void NetworkModel::validate() const {
    for (const auto& [a, b] : links) {
        if (a < 0 || a >= nodes || b < 0 || b >= nodes)
            throw std::invalid_argument("link endpoint out of node range");
        if (a == b) throw std::invalid_argument("self-loop link");
    }
    if (path_len.size() != paths.size() || paths_through.size() != links.size())
        throw std::invalid_argument("network not finalized");
    for (int p = 0; p < path_count(); ++p) {
        const auto& seq = paths[p];
        if (seq.empty()) throw std::invalid_argument("empty path");
        if (path_len[p] != static_cast<int>(seq.size()))
            throw std::invalid_argument("path_len out of sync");
        for (size_t j = 0; j < seq.size(); ++j) {
            if (seq[j] < 0 || seq[j] >= link_count())
                throw std::invalid_argument("path references unknown link");
            if (j > 0 && links[seq[j - 1]].second != links[seq[j]].first)
                throw std::invalid_argument("consecutive path links not node-adjacent");
        }
    }
}

std::vector<std::vector<int>> enumerate_simple_paths(const NetworkModel& net, int src, int dst,
                                                     int max_hops) {
    std::vector<std::vector<int>> out_links(net.nodes);
    for (int l = 0; l < net.link_count(); ++l) out_links[net.links[l].first].push_back(l);

    std::vector<std::vector<int>> found;
    std::vector<int> stack;
    std::vector<char> visited(net.nodes, 0);
    visited[src] = 1;

    auto dfs = [&](auto&& self, int node) -> void {
        if (node == dst) {
            if (!stack.empty()) found.push_back(stack);
            return;
        }
        if (static_cast<int>(stack.size()) >= max_hops) return;
        for (int l : out_links[node]) {
            const int next = net.links[l].second;
            if (visited[next]) continue;
            visited[next] = 1;
            stack.push_back(l);
            self(self, next);
            stack.pop_back();
            visited[next] = 0;
        }
    };
    dfs(dfs, src);
    return found;
}

}  // namespace routegame
