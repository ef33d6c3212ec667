#pragma once

#include <utility>
#include <vector>

#include "corrcomplete/graph.hpp"
#include "corrcomplete/linalg.hpp"
#include "corrcomplete/pattern.hpp"

namespace corrcomplete {

/// One entry produced by the completion, stored with i < j.
struct FillEntry {
    int i;
    int j;
    double value;
};

/// Record of one clique merge. The merge partitions the vertices seen so
/// far into (new_clique ∖ separator, separator, absorbed): the coupling
/// values between the first and last group are what the step fills in.
struct MergeStep {
    Clique new_clique;
    std::vector<int> separator;  // = new_clique ∩ union of prior cliques
    std::vector<int> absorbed;   // prior vertices outside the separator
    std::vector<FillEntry> filled;
};

/// Principal block of a matrix on an explicit vertex set. vertices are
/// ascending global indices; values(r, c) refers to vertices[r], vertices[c].
struct LabeledBlock {
    std::vector<int> vertices;
    SymMatrix values;
};

/// Which clique the merge traversal starts from.
struct RootPolicy {
    enum class Kind { largest_clique, index, explicit_clique };

    Kind kind = Kind::largest_clique;
    std::vector<Label> clique_labels;  // explicit_clique only

    static RootPolicy largest() { return {}; }
    static RootPolicy first_index() { return {Kind::index, {}}; }
    static RootPolicy explicit_set(std::vector<Label> labels) {
        return {Kind::explicit_clique, std::move(labels)};
    }
};

struct PlanStep {
    int clique;
    std::vector<int> separator;  // empty for the first clique of a component
};

struct CompletionReport {
    std::vector<Label> labels;
    std::vector<FillEntry> fill_in;  // ascending (i, j); exactly the unspecified pairs
    double log_det = 0.0;
    double entropy = 0.0;
    std::vector<MergeStep> steps;
    CliqueTree clique_tree;
    std::vector<int> merge_order;  // clique indices in processing order
    int root = 0;
};

/// Breadth-first clique order starting at root, expanding neighbors by
/// ascending clique index. Remaining components follow, each started at
/// its lowest-index clique. Every clique after the first of its component
/// is tree-adjacent to an earlier one, so its intersection with the union
/// of its predecessors is exactly one tree-edge separator.
std::vector<int> clique_order(const CliqueTree& t, int root);

/// Resolve a root policy against the clique list. largest_clique breaks
/// ties by lowest clique index; explicit_clique must name the exact
/// vertex set of one clique.
int choose_root(const CliqueTree& t, const RootPolicy& policy,
                const std::vector<Label>& labels);

/// Separators the merge traversal will use, without running it.
std::vector<PlanStep> derive_merge_plan(const CliqueTree& t, const std::vector<int>& order);

/// Merge partitions (new_clique, separator, absorbed) for each step of the
/// order; filled lists are left empty. Lets verification recompute
/// per-step residuals on an existing dense matrix.
std::vector<MergeStep> plan_partitions(const CliqueTree& t, const std::vector<int>& order);

/// Principal block of a partial matrix on a clique. Throws InvalidInput if
/// any pair inside the clique is unspecified.
LabeledBlock clique_block(const PartialMatrix& m, const Clique& c);

/// Couple a clique block onto an accumulated block. The unknown coupling W
/// between the clique's new vertices and the absorbed vertices is set to
/// B C^{-1} D (B: new-to-separator, C: separator, D: separator-to-absorbed),
/// the unique choice that zeroes W's slot in the inverse. Empty separator
/// couples with zeros.
///
/// Throws InvalidInput if sep is not the vertex intersection,
/// SeparatorMismatch if the two separator blocks are not bit-identical,
/// NotPositiveDefinite if the separator block fails factorization.
std::pair<LabeledBlock, MergeStep> merge_step(const LabeledBlock& acc,
                                              const LabeledBlock& clique,
                                              const std::vector<int>& sep,
                                              double pivot_tol = kDefaultPivotTol);

/// Maximum-determinant positive-definite completion of a chordal pattern.
/// Specified entries are copied to the output bit-exactly. Throws
/// NotChordal (with a certificate cycle) for non-chordal patterns and
/// CliqueBlockNotPD (naming the clique) if some fully specified clique
/// block is not positive definite.
std::pair<DenseCorrMatrix, CompletionReport> complete(
    const PartialMatrix& m, const RootPolicy& policy = {},
    double pivot_tol = kDefaultPivotTol);

}  // namespace corrcomplete
