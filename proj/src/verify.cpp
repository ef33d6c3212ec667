#include "corrcomplete/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace corrcomplete {

namespace {

/// Positions of `wanted` within the ascending vector `all`.
std::vector<int> positions_in(const std::vector<int>& all, const std::vector<int>& wanted) {
    std::vector<int> pos;
    pos.reserve(wanted.size());
    for (int v : wanted) {
        auto it = std::lower_bound(all.begin(), all.end(), v);
        pos.push_back(static_cast<int>(it - all.begin()));
    }
    return pos;
}

double log_det_of(const SymMatrix& m, double pivot_tol) {
    return m.dim() == 0 ? 0.0 : log_det(m, pivot_tol);
}

/// One coordinate-ascent sweep over the free entries, in place. For each
/// entry t at (i, j), det H(t) is the parabola
///   det H(t0) + 2 cof_ij(t0) (t - t0) - det M (t - t0)^2,
/// M = H with rows and columns i, j removed, so the vertex sits at
///   t* = t0 + (H^{-1})_{ij} det H / det M.
/// The parabola is positive exactly on the PD interval of t, hence the
/// vertex is PD; the halving guard only absorbs last-ulp rounding.
double ascent_sweep(SymMatrix& h, const std::vector<std::pair<int, int>>& free_pairs,
                    double pivot_tol) {
    const int n = h.dim();
    std::vector<int> keep;
    keep.reserve(n);
    double max_change = 0.0;
    for (auto [i, j] : free_pairs) {
        CholFactor f = cholesky(h, pivot_tol);
        Mat e(n, 1);
        e.at(j, 0) = 1.0;
        f.solve_in_place(e);
        const double hinv_ij = e.at(i, 0);

        keep.clear();
        for (int v = 0; v < n; ++v)
            if (v != i && v != j) keep.push_back(v);
        const double log_det_minor = log_det_of(h.submatrix(keep), pivot_tol);

        const double t0 = h(i, j);
        double t = t0 + hinv_ij * std::exp(f.log_det() - log_det_minor);
        h.set(i, j, t);
        for (int guard = 0; guard < 80 && t != t0; ++guard) {
            try {
                cholesky(h, pivot_tol);
                break;
            } catch (const NotPositiveDefinite&) {
                t = 0.5 * (t + t0);
                h.set(i, j, t);
            }
        }
        max_change = std::max(max_change, std::abs(t - t0));
    }
    return max_change;
}

bool is_pd(const SymMatrix& m, double pivot_tol) {
    try {
        cholesky(m, pivot_tol);
        return true;
    } catch (const NotPositiveDefinite&) {
        return false;
    }
}

}  // namespace

double check_inverse_zeros(const DenseCorrMatrix& h, const PatternGraph& pattern,
                           double pivot_tol) {
    if (pattern.size() != h.size())
        throw InvalidInput("pattern size does not match matrix size");
    SymMatrix inv = inverse_spd(h.values(), pivot_tol);
    double worst = 0.0;
    for (int i = 0; i < h.size(); ++i)
        for (int j = i + 1; j < h.size(); ++j)
            if (!pattern.has_edge(i, j)) worst = std::max(worst, std::abs(inv(i, j)));
    return worst;
}

double check_fischer(const DenseCorrMatrix& h, const MergeStep& step, double pivot_tol) {
    const std::vector<int> xs = sorted_difference(step.new_clique.vertices, step.separator);
    const std::vector<int>& z = step.separator;
    const std::vector<int>& ys = step.absorbed;

    const std::vector<int> xz = sorted_union(xs, z);
    const std::vector<int> yz = sorted_union(ys, z);
    const std::vector<int> all = sorted_union(xz, yz);

    const SymMatrix hx = h.values().submatrix(xz);
    const SymMatrix hy = h.values().submatrix(yz);

    const double ld_all = log_det_of(h.values().submatrix(all), pivot_tol);
    const double ld_c = log_det_of(h.values().submatrix(z), pivot_tol);
    const double ld_x_over_c = log_det_of(schur_complement(hx, positions_in(xz, z), pivot_tol),
                                          pivot_tol);
    const double ld_y_over_c = log_det_of(schur_complement(hy, positions_in(yz, z), pivot_tol),
                                          pivot_tol);
    return std::abs(ld_all - (ld_c + ld_x_over_c + ld_y_over_c));
}

double check_conditional_independence(const DenseCorrMatrix& h, const MergeStep& step,
                                      double pivot_tol) {
    const std::vector<int> xs = sorted_difference(step.new_clique.vertices, step.separator);
    const std::vector<int>& z = step.separator;
    const std::vector<int> all = sorted_union(sorted_union(xs, z), step.absorbed);

    SymMatrix s = schur_complement(h.values().submatrix(all), positions_in(all, z), pivot_tol);
    const std::vector<int> rest = sorted_difference(all, z);

    double frob = 0.0;
    for (int r = 0; r < static_cast<int>(rest.size()); ++r) {
        if (!std::binary_search(xs.begin(), xs.end(), rest[r])) continue;
        for (int c = 0; c < static_cast<int>(rest.size()); ++c) {
            if (std::binary_search(xs.begin(), xs.end(), rest[c])) continue;
            frob += s(r, c) * s(r, c);
        }
    }
    return std::sqrt(frob);
}

double entropy_from_log_det(double log_det, int n) {
    return 0.5 * log_det + 0.5 * n * (1.0 + std::log(2.0 * std::numbers::pi));
}

double entropy(const DenseCorrMatrix& h, double pivot_tol) {
    return entropy_from_log_det(log_det(h.values(), pivot_tol), h.size());
}

OracleResult oracle_max_det(const PartialMatrix& m, const OracleOptions& opts) {
    const int n = m.size();
    const std::vector<std::pair<int, int>> free_pairs = m.unspecified_pairs();
    if (static_cast<int>(free_pairs.size()) > opts.max_free)
        throw InvalidInput("oracle limited to " + std::to_string(opts.max_free) +
                           " unspecified entries, got " + std::to_string(free_pairs.size()));

    auto assemble = [&](double lambda, const SymMatrix& prev) {
        SymMatrix h(n);
        for (int i = 0; i < n; ++i) h.set(i, i, 1.0);
        for (auto [i, j] : free_pairs) h.set(i, j, prev.dim() == n ? prev(i, j) : 0.0);
        for (const auto& [pair, v] : m.entries()) h.set(pair.first, pair.second, v * lambda);
        return h;
    };

    SymMatrix h = assemble(1.0, SymMatrix());
    if (free_pairs.empty()) {
        double ld = log_det(h, opts.pivot_tol);
        return {DenseCorrMatrix(m.labels(), std::move(h)), ld, 0, true};
    }

    if (!is_pd(h, opts.pivot_tol)) {
        // The zeros fill is infeasible. Shrink the specified entries toward
        // zero until PD (the identity is the lambda = 0 limit), then walk
        // lambda back to 1, re-optimizing the free entries at each stop so
        // the iterate stays interior.
        double lambda = 0.0;
        double step = 0.25;
        h = assemble(0.0, SymMatrix());
        while (lambda < 1.0) {
            const double next = std::min(1.0, lambda + step);
            SymMatrix trial = assemble(next, h);
            if (is_pd(trial, opts.pivot_tol)) {
                h = std::move(trial);
                lambda = next;
                for (int s = 0; s < 50; ++s)
                    if (ascent_sweep(h, free_pairs, opts.pivot_tol) < 1e-8) break;
                step *= 2.0;
            } else {
                step *= 0.5;
                if (step < 1e-9)
                    throw NoFeasiblePoint(
                        "no strictly positive definite completion found "
                        "(feasibility continuation stalled at scale " +
                        std::to_string(lambda) + ")");
            }
        }
    }

    OracleResult result{DenseCorrMatrix(m.labels(), SymMatrix::identity(n)), 0.0, 0, false};
    for (int s = 0; s < opts.max_sweeps; ++s) {
        ++result.sweeps;
        if (ascent_sweep(h, free_pairs, opts.pivot_tol) < opts.tol) {
            result.converged = true;
            break;
        }
    }
    result.log_det = log_det(h, opts.pivot_tol);
    result.matrix = DenseCorrMatrix(m.labels(), std::move(h));
    return result;
}

VerificationResult verify_completion(const DenseCorrMatrix& h,
                                     const std::optional<PartialMatrix>& pattern,
                                     const VerificationOptions& opts) {
    VerificationResult result;
    double ld = 0.0;
    try {
        ld = log_det(h.values(), opts.pivot_tol);
    } catch (const NotPositiveDefinite&) {
        return result;
    }
    result.pd = true;
    result.entropy = entropy_from_log_det(ld, h.size());
    if (!pattern) return result;

    if (pattern->labels() != h.labels())
        throw InvalidInput("pattern labels do not match matrix labels");

    PatternGraph g = build_pattern_graph(*pattern);
    result.max_inverse_residual = check_inverse_zeros(h, g, opts.pivot_tol);

    if (is_chordal(g).chordal) {
        EliminationOrder ord = maximum_cardinality_search(g);
        CliqueTree tree = build_clique_tree(maximal_cliques(g, ord));
        int root = choose_root(tree, RootPolicy::largest(), h.labels());
        double worst = 0.0;
        for (const MergeStep& step : plan_partitions(tree, clique_order(tree, root)))
            worst = std::max(worst, check_fischer(h, step, opts.pivot_tol));
        result.fischer_residual = worst;
    }

    if (opts.with_oracle &&
        static_cast<int>(pattern->unspecified_pairs().size()) <= opts.oracle.max_free) {
        OracleResult oracle = oracle_max_det(*pattern, opts.oracle);
        result.oracle_gap = std::abs(oracle.log_det - ld);
    }
    return result;
}

}  // namespace corrcomplete
