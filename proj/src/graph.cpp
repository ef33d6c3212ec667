#include "corrcomplete/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>

namespace corrcomplete {

namespace {

/// Position of each vertex in the visit order; -1 while unvisited.
std::vector<int> positions(const EliminationOrder& ord, int n) {
    std::vector<int> pos(n, -1);
    for (int k = 0; k < static_cast<int>(ord.order.size()); ++k) {
        int v = ord.order[k];
        if (v < 0 || v >= n || pos[v] != -1)
            throw InvalidInput("elimination order is not a permutation of the vertices");
        pos[v] = k;
    }
    if (static_cast<int>(ord.order.size()) != n)
        throw InvalidInput("elimination order is not a permutation of the vertices");
    return pos;
}

/// Shortest chordless path u -> w avoiding every vertex with banned[x]
/// set. BFS with ascending neighbor expansion keeps the result
/// deterministic. Returns the path including both endpoints, or empty.
std::vector<int> shortest_path(const PatternGraph& g, int u, int w,
                               const std::vector<char>& banned) {
    std::vector<int> parent(g.size(), -2);
    std::deque<int> queue;
    parent[u] = -1;
    queue.push_back(u);
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (x == w) break;
        for (int y : g.neighbors(x)) {
            if (banned[y] || parent[y] != -2) continue;
            parent[y] = x;
            queue.push_back(y);
        }
    }
    if (parent[w] == -2) return {};
    std::vector<int> path;
    for (int x = w; x != -1; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

/// Finds a chordless cycle of length >= 4 in a graph known not to be
/// chordal. For every vertex v and non-adjacent neighbor pair (u, w), a
/// shortest u-w path avoiding v and v's other neighbors closes to a hole
/// through v: shortest paths are induced, v has no other neighbor on the
/// cycle, and u-w is a non-edge. Any hole h1..hk is found at the latest by
/// the triple (h1, h2, hk), so the scan cannot come up empty.
std::vector<int> find_hole(const PatternGraph& g) {
    const int n = g.size();
    std::vector<char> banned(n, 0);
    for (int v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(v);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                int u = nb[i];
                int w = nb[j];
                if (g.has_edge(u, w)) continue;
                std::fill(banned.begin(), banned.end(), 0);
                banned[v] = 1;
                for (int x : nb)
                    if (x != u && x != w) banned[x] = 1;
                std::vector<int> path = shortest_path(g, u, w, banned);
                if (path.empty()) continue;
                std::vector<int> cycle;
                cycle.push_back(v);
                cycle.insert(cycle.end(), path.begin(), path.end());
                return cycle;
            }
        }
    }
    return {};
}

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

PatternGraph::PatternGraph(int n) {
    if (n < 1) throw InvalidInput("a graph needs at least one vertex");
    n_ = n;
    adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    nbrs_.resize(n);
}

void PatternGraph::add_edge(int i, int j) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InvalidInput("edge endpoint out of range");
    if (i == j) throw InvalidInput("self-loops are not allowed");
    if (has_edge(i, j)) return;
    adj_[static_cast<std::size_t>(i) * n_ + j] = 1;
    adj_[static_cast<std::size_t>(j) * n_ + i] = 1;
    nbrs_[i].insert(std::lower_bound(nbrs_[i].begin(), nbrs_[i].end(), j), j);
    nbrs_[j].insert(std::lower_bound(nbrs_[j].begin(), nbrs_[j].end(), i), i);
    ++edge_count_;
}

bool Clique::contains(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

PatternGraph build_pattern_graph(const PartialMatrix& m) {
    PatternGraph g(m.size());
    for (const auto& [pair, value] : m.entries()) g.add_edge(pair.first, pair.second);
    return g;
}

EliminationOrder maximum_cardinality_search(const PatternGraph& g) {
    const int n = g.size();
    std::vector<int> weight(n, 0);
    std::vector<char> visited(n, 0);
    // buckets[w] holds unvisited vertices of weight w; std::set gives the
    // lowest-index member first, which is the tie-break rule.
    std::vector<std::set<int>> buckets(n + 1);
    for (int v = 0; v < n; ++v) buckets[0].insert(v);
    int top = 0;

    EliminationOrder ord;
    ord.order.reserve(n);
    for (int step = 0; step < n; ++step) {
        while (buckets[top].empty()) --top;
        int v = *buckets[top].begin();
        buckets[top].erase(buckets[top].begin());
        visited[v] = 1;
        ord.order.push_back(v);
        for (int u : g.neighbors(v)) {
            if (visited[u]) continue;
            buckets[weight[u]].erase(u);
            ++weight[u];
            buckets[weight[u]].insert(u);
            if (weight[u] > top) top = weight[u];
        }
    }
    return ord;
}

bool is_perfect_elimination_order(const PatternGraph& g, const EliminationOrder& ord) {
    const int n = g.size();
    std::vector<int> pos = positions(ord, n);
    // For each vertex, among its earlier-visited neighbors let u be the
    // latest; the rest must be neighbors of u. This succeeds for every
    // vertex iff earlier neighborhoods are cliques.
    for (int k = 0; k < n; ++k) {
        int v = ord.order[k];
        int u = -1;
        for (int x : g.neighbors(v))
            if (pos[x] < k && (u == -1 || pos[x] > pos[u])) u = x;
        if (u == -1) continue;
        for (int x : g.neighbors(v))
            if (pos[x] < k && x != u && !g.has_edge(u, x)) return false;
    }
    return true;
}

ChordalityResult is_chordal(const PatternGraph& g) {
    EliminationOrder ord = maximum_cardinality_search(g);
    if (is_perfect_elimination_order(g, ord)) return {true, {}};
    return {false, find_hole(g)};
}

std::vector<Clique> maximal_cliques(const PatternGraph& g, const EliminationOrder& ord) {
    const int n = g.size();
    std::vector<int> pos = positions(ord, n);
    if (!is_perfect_elimination_order(g, ord)) {
        ChordalityResult c = is_chordal(g);
        if (!c.chordal)
            throw NotChordal("pattern graph is not chordal", c.certificate);
        throw InvalidInput("order is not a perfect elimination order of the graph");
    }

    // Candidate per vertex: itself plus earlier-visited neighbors. Every
    // maximal clique of a chordal graph appears among these; candidates
    // are pairwise distinct because each one's latest-visited member is
    // its generating vertex.
    std::vector<std::vector<int>> candidates(n);
    for (int k = 0; k < n; ++k) {
        int v = ord.order[k];
        std::vector<int>& c = candidates[k];
        c.push_back(v);
        for (int x : g.neighbors(v))
            if (pos[x] < k) c.push_back(x);
        std::sort(c.begin(), c.end());
    }

    std::vector<Clique> out;
    for (int k = 0; k < n; ++k) {
        bool maximal = true;
        for (int l = 0; l < n && maximal; ++l) {
            if (l == k || candidates[l].size() <= candidates[k].size()) continue;
            maximal = !std::includes(candidates[l].begin(), candidates[l].end(),
                                     candidates[k].begin(), candidates[k].end());
        }
        if (maximal) out.push_back({candidates[k]});
    }
    return out;
}

CliqueTree build_clique_tree(const std::vector<Clique>& cliques) {
    const int k = static_cast<int>(cliques.size());
    struct Candidate {
        int w;
        int a;
        int b;
    };
    std::vector<Candidate> cand;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            auto sep = sorted_intersection(cliques[i].vertices, cliques[j].vertices);
            if (!sep.empty()) cand.push_back({static_cast<int>(sep.size()), i, j});
        }
    }
    // Kruskal on weight descending; candidates are generated with (a, b)
    // ascending, so a stable sort realizes the index tie-break.
    std::stable_sort(cand.begin(), cand.end(),
                     [](const Candidate& x, const Candidate& y) { return x.w > y.w; });

    CliqueTree t;
    t.cliques = cliques;
    UnionFind uf(k);
    for (const Candidate& c : cand) {
        if (!uf.unite(c.a, c.b)) continue;
        t.edges.push_back(
            {c.a, c.b, sorted_intersection(cliques[c.a].vertices, cliques[c.b].vertices)});
    }
    return t;
}

std::vector<std::vector<std::pair<int, int>>> tree_adjacency(const CliqueTree& t) {
    std::vector<std::vector<std::pair<int, int>>> adj(t.cliques.size());
    for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
        adj[t.edges[e].a].emplace_back(t.edges[e].b, e);
        adj[t.edges[e].b].emplace_back(t.edges[e].a, e);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

bool verify_intersection_property(const CliqueTree& t) {
    const int k = static_cast<int>(t.cliques.size());
    auto adj = tree_adjacency(t);
    for (int i = 0; i < k; ++i) {
        // BFS from i recording parents; then every reachable j's path back
        // to i must keep cliques[i] ∩ cliques[j] in each intermediate node.
        std::vector<int> parent(k, -2);
        parent[i] = -1;
        std::deque<int> queue{i};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (auto [y, e] : adj[x]) {
                if (parent[y] != -2) continue;
                parent[y] = x;
                queue.push_back(y);
            }
        }
        for (int j = 0; j < k; ++j) {
            if (j == i || parent[j] == -2) continue;
            auto common = sorted_intersection(t.cliques[i].vertices, t.cliques[j].vertices);
            if (common.empty()) continue;
            for (int x = j; x != i; x = parent[x]) {
                if (sorted_intersection(common, t.cliques[x].vertices).size() != common.size())
                    return false;
            }
        }
    }
    return true;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace corrcomplete
