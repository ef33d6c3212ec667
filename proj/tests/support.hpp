#pragma once

// Shared test plumbing: a reproducible RNG, random matrix and graph
// factories, and small brute-force oracles kept deliberately independent
// of the library's algorithms.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "corrcomplete/graph.hpp"
#include "corrcomplete/linalg.hpp"
#include "corrcomplete/models.hpp"

namespace test_support {

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int below(int k) { return static_cast<int>(engine() % static_cast<std::uint64_t>(k)); }

    double normal() {
        double u = uniform();
        double v = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }
};

/// Gram matrix of n random unit vectors in dimension 4n; comfortably PD.
inline corrcomplete::SymMatrix random_correlation(int n, Rng& rng) {
    const int dim = 4 * n;
    std::vector<std::vector<double>> vecs(n, std::vector<double>(dim));
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            vecs[i][d] = rng.normal();
            norm2 += vecs[i][d] * vecs[i][d];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int d = 0; d < dim; ++d) vecs[i][d] *= inv;
    }
    corrcomplete::SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        m.set(i, i, 1.0);
        for (int j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (int d = 0; d < dim; ++d) dot += vecs[i][d] * vecs[j][d];
            m.set(i, j, dot);
        }
    }
    return m;
}

inline corrcomplete::PatternGraph random_graph(int n, double p, Rng& rng) {
    corrcomplete::PatternGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) g.add_edge(i, j);
    return g;
}

/// Brute-force hole detector for small graphs: some vertex subset of size
/// >= 4 induces a cycle (every member has exactly two neighbors inside the
/// subset, and the subset is connected). A graph is chordal iff no such
/// subset exists.
inline bool has_hole_bruteforce(const corrcomplete::PatternGraph& g) {
    const int n = g.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < n; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        if (verts.size() < 4) continue;

        bool degrees_ok = true;
        for (int v : verts) {
            int deg = 0;
            for (int u : verts)
                if (u != v && g.has_edge(u, v)) ++deg;
            if (deg != 2) {
                degrees_ok = false;
                break;
            }
        }
        if (!degrees_ok) continue;

        std::vector<int> stack{verts[0]};
        std::vector<char> seen(n, 0);
        seen[verts[0]] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : verts) {
                if (seen[u] || !g.has_edge(u, v)) continue;
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
        if (reached == static_cast<int>(verts.size())) return true;
    }
    return false;
}

/// A valid certificate is a chordless cycle: length >= 4, distinct
/// vertices, consecutive pairs (wrapping) adjacent, all other pairs not.
inline bool valid_hole_certificate(const corrcomplete::PatternGraph& g,
                                   const std::vector<int>& cycle) {
    const int k = static_cast<int>(cycle.size());
    if (k < 4) return false;
    for (int a = 0; a < k; ++a) {
        if (cycle[a] < 0 || cycle[a] >= g.size()) return false;
        for (int b = a + 1; b < k; ++b) {
            if (cycle[a] == cycle[b]) return false;
            const bool consecutive = (b == a + 1) || (a == 0 && b == k - 1);
            if (g.has_edge(cycle[a], cycle[b]) != consecutive) return false;
        }
    }
    return true;
}

/// 3x3 determinant written out longhand; the independent value for
/// log-det and inverse checks on small fixtures.
inline double det3(const corrcomplete::SymMatrix& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Random coefficients for the two-economy model with a strictly PD
/// {E, A, X} triangle (resampled until the determinant has margin).
inline corrcomplete::XccyParams random_xccy_params(Rng& rng) {
    corrcomplete::XccyParams p{};
    p.e_nuE = rng.uniform(-0.95, 0.95);
    p.a_nuA = rng.uniform(-0.95, 0.95);
    p.x_nuX = rng.uniform(-0.95, 0.95);
    for (;;) {
        p.e_a = rng.uniform(-0.95, 0.95);
        p.e_x = rng.uniform(-0.95, 0.95);
        p.a_x = rng.uniform(-0.95, 0.95);
        const double det = 1.0 + 2.0 * p.e_a * p.e_x * p.a_x - p.e_a * p.e_a -
                           p.e_x * p.e_x - p.a_x * p.a_x;
        if (det > 1e-3) return p;
    }
}

}  // namespace test_support
