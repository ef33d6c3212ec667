#pragma once

#include <vector>

#include "corrcomplete/errors.hpp"
#include "corrcomplete/pattern.hpp"

namespace corrcomplete {

/// Undirected graph on the variable indices of a PartialMatrix. An edge
/// means the corresponding entry is specified. No self-loops.
class PatternGraph {
public:
    explicit PatternGraph(int n);

    int size() const noexcept { return n_; }
    int edge_count() const noexcept { return edge_count_; }

    /// Throws InvalidInput on self-loops or out-of-range indices.
    /// Adding an existing edge is a no-op.
    void add_edge(int i, int j);

    bool has_edge(int i, int j) const {
        return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
    }

    /// Neighbor indices in ascending order.
    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }

private:
    int n_ = 0;
    int edge_count_ = 0;
    std::vector<char> adj_;
    std::vector<std::vector<int>> nbrs_;
};

/// Visit order produced by maximum cardinality search. order[k] is the
/// vertex visited k-th; the reverse of this sequence is the elimination
/// order proper.
struct EliminationOrder {
    std::vector<int> order;
};

/// Vertex set inducing a complete subgraph, maximal under inclusion.
/// Vertices are kept sorted ascending.
struct Clique {
    std::vector<int> vertices;

    bool contains(int v) const;
    int size() const noexcept { return static_cast<int>(vertices.size()); }
};

struct CliqueTreeEdge {
    int a;  // clique index, a < b
    int b;
    std::vector<int> separator;  // = cliques[a] ∩ cliques[b], ascending
};

/// Spanning forest of the maximal cliques (one tree per connected component
/// of the pattern graph) satisfying the intersection property: for cliques
/// in one tree, their intersection is contained in every clique on the
/// path between them.
struct CliqueTree {
    std::vector<Clique> cliques;
    std::vector<CliqueTreeEdge> edges;
};

struct ChordalityResult {
    bool chordal = false;
    /// Empty when chordal; otherwise a chordless cycle of length >= 4 in
    /// cycle order (certificate).
    std::vector<int> certificate;
};

PatternGraph build_pattern_graph(const PartialMatrix& m);

/// Maximum cardinality search. Repeatedly visits an unvisited vertex with
/// the most visited neighbors; ties go to the lowest vertex index, which
/// makes the order deterministic.
EliminationOrder maximum_cardinality_search(const PatternGraph& g);

/// True iff visiting the vertices in ord leaves each vertex's
/// earlier-visited neighbors forming a clique (equivalently, the reverse
/// of ord is a perfect elimination order). Throws InvalidInput if ord is
/// not a permutation of the vertices.
bool is_perfect_elimination_order(const PatternGraph& g, const EliminationOrder& ord);

/// Chordality test: runs MCS and checks the resulting order. On failure
/// the certificate is a chordless cycle found by direct search.
ChordalityResult is_chordal(const PatternGraph& g);

/// Maximal cliques of a chordal graph, from the per-vertex candidate sets
/// {v} ∪ {earlier-visited neighbors of v} with non-maximal candidates
/// dropped. Reported in candidate discovery order, which fixes clique
/// indices for all downstream tie-breaking. Throws NotChordal (with a
/// certificate) if g is not chordal, InvalidInput if g is chordal but ord
/// is not one of its perfect elimination orders.
std::vector<Clique> maximal_cliques(const PatternGraph& g, const EliminationOrder& ord);

/// Maximum-weight spanning forest of the clique intersection graph
/// (weight = intersection size, Kruskal; ties broken by lowest clique
/// index pair). For maximal cliques of a chordal graph the result has the
/// intersection property.
CliqueTree build_clique_tree(const std::vector<Clique>& cliques);

/// Exhaustively checks the intersection property over all clique pairs in
/// the same tree component.
bool verify_intersection_property(const CliqueTree& t);

/// Adjacency of the clique tree: for each clique, its (neighbor clique,
/// edge index) pairs with neighbors ascending.
std::vector<std::vector<std::pair<int, int>>> tree_adjacency(const CliqueTree& t);

/// Set operations on ascending index vectors.
std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace corrcomplete
