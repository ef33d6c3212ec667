#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corrcomplete/errors.hpp"
#include "corrcomplete/linalg.hpp"

namespace corrcomplete {

/// Identifier of a stochastic variable. Must be non-empty and free of the
/// CSV separator characters (comma, newline).
using Label = std::string;

enum class MatrixFormat { json, csv };

/// Symmetric correlation matrix with some off-diagonal entries unspecified.
/// The diagonal is implicitly 1 and never stored; specified entries are
/// keyed by unordered index pairs (stored with i < j). Immutable after
/// construction.
class PartialMatrix {
public:
    struct Entry {
        int i;
        int j;
        double value;
    };

    /// Throws InvalidInput on: empty or duplicate labels, labels containing
    /// separator characters, diagonal or duplicate pairs, out-of-range
    /// indices, or values outside the open interval (-1, 1).
    PartialMatrix(std::vector<Label> labels, const std::vector<Entry>& entries);

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    const std::vector<Label>& labels() const noexcept { return labels_; }

    /// Index of a label, or -1 if absent.
    int find_label(const Label& name) const;

    bool is_specified(int i, int j) const;

    /// Value of a specified pair; 1.0 on the diagonal; nullopt otherwise.
    std::optional<double> value(int i, int j) const;

    /// Specified entries, keyed by (i, j) with i < j.
    const std::map<std::pair<int, int>, double>& entries() const noexcept { return entries_; }

    int specified_count() const noexcept { return static_cast<int>(entries_.size()); }

    /// Unspecified off-diagonal pairs, ascending (i, j) with i < j.
    std::vector<std::pair<int, int>> unspecified_pairs() const;

private:
    std::vector<Label> labels_;
    std::unordered_map<std::string, int> index_;
    std::map<std::pair<int, int>, double> entries_;
};

/// Fully specified symmetric matrix with unit diagonal. Positive
/// definiteness is asserted by the verify module, not here.
class DenseCorrMatrix {
public:
    /// Throws InvalidInput if the diagonal is not exactly 1 or labels are
    /// invalid. Symmetry is inherited from SymMatrix storage.
    DenseCorrMatrix(std::vector<Label> labels, SymMatrix values);

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    double operator()(int i, int j) const { return values_(i, j); }
    const SymMatrix& values() const noexcept { return values_; }

private:
    std::vector<Label> labels_;
    SymMatrix values_;
};

/// Parse a partially specified matrix from JSON or CSV text.
PartialMatrix parse_partial(const std::string& text, MatrixFormat format);

std::string serialize_partial(const PartialMatrix& m, MatrixFormat format);

/// Serialize a dense matrix. Values are written in decimal with 17
/// significant digits, so parse(serialize(m)) reproduces every entry
/// bit-exactly.
std::string serialize_dense(const DenseCorrMatrix& m, MatrixFormat format);

/// Convert a fully specified PartialMatrix to dense form; throws
/// InvalidInput if any pair is unspecified.
DenseCorrMatrix to_dense(const PartialMatrix& m);

/// Validate a label list (used by both matrix types).
void validate_labels(const std::vector<Label>& labels);

/// Shortest-correct decimal form is not required; this prints %.17g, which
/// round-trips doubles exactly and keeps output byte-deterministic.
std::string format_value(double v);

}  // namespace corrcomplete
