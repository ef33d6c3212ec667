#include "corrcomplete/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "corrcomplete/graph.hpp"
#include "corrcomplete/linalg.hpp"

namespace corrcomplete {

namespace {

void require_unit(double v, const std::string& name) {
    if (!std::isfinite(v) || !(std::abs(v) < 1.0))
        throw InvalidInput("coefficient " + name + " = " + format_value(v) +
                           " is outside the open interval (-1, 1)");
}

/// {E, K, X} triangle with correlations e_k, e_x, k_x must be strictly PD.
void require_triangle_pd(double e_k, double e_x, double k_x, const std::string& which) {
    SymMatrix block(3);
    for (int i = 0; i < 3; ++i) block.set(i, i, 1.0);
    block.set(0, 1, e_k);
    block.set(0, 2, e_x);
    block.set(1, 2, k_x);
    try {
        cholesky(block);
    } catch (const NotPositiveDefinite&) {
        throw InvalidInput("the " + which + " block is not positive definite");
    }
}

void validate(const XccyParams& p) {
    require_unit(p.e_nuE, "(E,nu_E)");
    require_unit(p.a_nuA, "(A,nu_A)");
    require_unit(p.e_a, "(E,A)");
    require_unit(p.e_x, "(E,X)");
    require_unit(p.a_x, "(A,X)");
    require_unit(p.x_nuX, "(X,nu_X)");
    require_triangle_pd(p.e_a, p.e_x, p.a_x, "{E, A, X}");
}

/// Deterministic helpers on top of the standard engine: the standard
/// distributions are implementation-defined, these are not, so generated
/// fixtures are stable across toolchains.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    int below(int k) { return static_cast<int>(engine() % static_cast<std::uint64_t>(k)); }

    double normal() {
        double u = uniform();
        double v = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }
};

}  // namespace

PartialMatrix xccy_pattern(const XccyParams& p) {
    validate(p);
    std::vector<Label> labels{"E", "nu_E", "A", "nu_A", "X", "nu_X"};
    std::vector<PartialMatrix::Entry> entries{
        {0, 1, p.e_nuE},  // (E, nu_E)
        {2, 3, p.a_nuA},  // (A, nu_A)
        {0, 2, p.e_a},    // (E, A)
        {0, 4, p.e_x},    // (E, X)
        {2, 4, p.a_x},    // (A, X)
        {4, 5, p.x_nuX},  // (X, nu_X)
    };
    return PartialMatrix(std::move(labels), entries);
}

DenseCorrMatrix xccy_closed_form(const XccyParams& p) {
    validate(p);
    SymMatrix h(6);
    for (int i = 0; i < 6; ++i) h.set(i, i, 1.0);
    h.set(0, 1, p.e_nuE);
    h.set(2, 3, p.a_nuA);
    h.set(0, 2, p.e_a);
    h.set(0, 4, p.e_x);
    h.set(2, 4, p.a_x);
    h.set(4, 5, p.x_nuX);

    h.set(0, 5, p.x_nuX * p.e_x);            // (E, nu_X)
    h.set(2, 5, p.x_nuX * p.a_x);            // (A, nu_X)
    h.set(0, 3, p.a_nuA * p.e_a);            // (E, nu_A)
    h.set(3, 4, p.a_nuA * p.a_x);            // (X, nu_A)
    h.set(3, 5, p.a_nuA * p.x_nuX * p.a_x);  // (nu_X, nu_A)
    h.set(1, 2, p.e_nuE * p.e_a);            // (nu_E, A)
    h.set(1, 3, p.e_nuE * p.a_nuA * p.e_a);  // (nu_E, nu_A)
    h.set(1, 4, p.e_nuE * p.e_x);            // (nu_E, X)
    h.set(1, 5, p.e_nuE * p.x_nuX * p.e_x);  // (nu_E, nu_X)

    return DenseCorrMatrix({"E", "nu_E", "A", "nu_A", "X", "nu_X"}, std::move(h));
}

std::vector<Label> currency_names(int count) {
    if (count < 1) throw InvalidInput("need at least one foreign currency");
    std::vector<Label> names;
    for (char c = 'A'; c <= 'Z' && static_cast<int>(names.size()) < count; ++c)
        if (c != 'E') names.emplace_back(1, c);
    for (char a = 'A'; a <= 'Z' && static_cast<int>(names.size()) < count; ++a)
        for (char b = 'A'; b <= 'Z' && static_cast<int>(names.size()) < count; ++b)
            names.push_back(std::string(1, a) + std::string(1, b));
    if (static_cast<int>(names.size()) < count)
        throw InvalidInput("too many foreign currencies to name");
    return names;
}

PartialMatrix n_currency_pattern(const NCurrencyParams& p) {
    if (p.legs.empty()) throw InvalidInput("need at least one foreign currency");
    require_unit(p.e_nuE, "(" + p.domestic + ",nu_" + p.domestic + ")");
    const std::vector<Label> names = currency_names(static_cast<int>(p.legs.size()));

    std::vector<Label> labels{p.domestic, "nu_" + p.domestic};
    std::vector<PartialMatrix::Entry> entries{{0, 1, p.e_nuE}};
    for (std::size_t k = 0; k < p.legs.size(); ++k) {
        const NCurrencyLeg& leg = p.legs[k];
        const Label& c = names[k];
        const Label x = "X_" + p.domestic + "_" + c;
        require_unit(leg.k_nuK, "(" + c + ",nu_" + c + ")");
        require_unit(leg.e_k, "(" + p.domestic + "," + c + ")");
        require_unit(leg.e_x, "(" + p.domestic + "," + x + ")");
        require_unit(leg.k_x, "(" + c + "," + x + ")");
        require_unit(leg.x_nuX, "(" + x + ",nu_" + x + ")");
        require_triangle_pd(leg.e_k, leg.e_x, leg.k_x,
                            "{" + p.domestic + ", " + c + ", " + x + "}");

        const int base = static_cast<int>(labels.size());
        labels.push_back(c);            // base
        labels.push_back("nu_" + c);    // base + 1
        labels.push_back(x);            // base + 2
        labels.push_back("nu_" + x);    // base + 3
        entries.push_back({base, base + 1, leg.k_nuK});
        entries.push_back({0, base, leg.e_k});
        entries.push_back({0, base + 2, leg.e_x});
        entries.push_back({base, base + 2, leg.k_x});
        entries.push_back({base + 2, base + 3, leg.x_nuX});
    }
    return PartialMatrix(std::move(labels), entries);
}

RandomInstance random_chordal_instance(int n, std::uint64_t seed, double edge_prob) {
    if (n < 1) throw InvalidInput("need at least one variable");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw InvalidInput("edge probability must lie in [0, 1]");
    Rng rng(seed);

    // Random base edges, then the fill of a random elimination order: in
    // elimination sequence, each vertex's later neighbors get pairwise
    // connected. The filled graph is chordal with that order as its
    // perfect elimination order.
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) adj[i][j] = adj[j][i] = 1;

    std::vector<int> elim(n);
    for (int i = 0; i < n; ++i) elim[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(elim[i], elim[rng.below(i + 1)]);

    std::vector<int> rank(n);
    for (int k = 0; k < n; ++k) rank[elim[k]] = k;
    for (int k = 0; k < n; ++k) {
        int v = elim[k];
        std::vector<int> later;
        for (int u = 0; u < n; ++u)
            if (adj[v][u] && rank[u] > k) later.push_back(u);
        for (std::size_t a = 0; a < later.size(); ++a)
            for (std::size_t b = a + 1; b < later.size(); ++b)
                adj[later[a]][later[b]] = adj[later[b]][later[a]] = 1;
    }

    // Gram matrix of unit vectors in dimension 4n: comfortably PD (its
    // smallest eigenvalue concentrates near 1/4), so completions stay well
    // conditioned.
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
    SymMatrix source(n);
    for (int i = 0; i < n; ++i) {
        source.set(i, i, 1.0);
        for (int j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (int d = 0; d < dim; ++d) dot += vecs[i][d] * vecs[j][d];
            source.set(i, j, dot);
        }
    }

    std::vector<Label> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));

    std::vector<PartialMatrix::Entry> entries;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adj[i][j]) entries.push_back({i, j, source(i, j)});

    PartialMatrix pattern(labels, entries);
    return {std::move(pattern), DenseCorrMatrix(std::move(labels), std::move(source))};
}

}  // namespace corrcomplete
