#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corrcomplete {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or semantically invalid input: parse errors, bad parameters,
/// violated constructor invariants.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A Cholesky pivot fell at or below tolerance; the matrix is not strictly
/// positive definite. Carries the index of the failing pivot.
class NotPositiveDefinite : public Error {
public:
    NotPositiveDefinite(const std::string& what, int pivot_index)
        : Error(what), pivot_index_(pivot_index) {}

    int pivot_index() const noexcept { return pivot_index_; }

private:
    int pivot_index_;
};

/// The pattern graph is not chordal. Carries a certificate: a chordless
/// cycle of length >= 4, as vertex indices in cycle order.
class NotChordal : public Error {
public:
    NotChordal(const std::string& what, std::vector<int> cycle)
        : Error(what), cycle_(std::move(cycle)) {}

    const std::vector<int>& cycle() const noexcept { return cycle_; }

private:
    std::vector<int> cycle_;
};

/// A fully specified clique block of the input is not positive definite.
/// Carries the labels of the offending clique.
class CliqueBlockNotPD : public Error {
public:
    CliqueBlockNotPD(const std::string& what, std::vector<std::string> labels)
        : Error(what), labels_(std::move(labels)) {}

    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    std::vector<std::string> labels_;
};

/// The separator blocks of two merge operands disagree.
class SeparatorMismatch : public Error {
public:
    using Error::Error;
};

/// No positive definite starting completion could be found.
class NoFeasiblePoint : public Error {
public:
    using Error::Error;
};

}  // namespace corrcomplete
