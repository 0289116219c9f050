#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smoothcut/errors.hpp"

namespace smoothcut {

// Exact small-instance ERM for piecewise linear-through-origin regression:
// partition the dataset into at most K clusters, each fit exactly by one
// coefficient vector. The determination number ell equals the coefficient
// count (= d for linear pieces; callers with polynomial pieces expand x into
// monomials first).
struct ErmProblem {
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    int K = 1;
    int ell = 1;
    double fit_tol = 1e-8;  // relative

    std::size_t size() const { return xs.size(); }
};

struct ErmSolution {
    int n = 0;                                   // clusters used, <= K
    std::vector<Eigen::VectorXd> functions;      // coefficient vectors
    std::vector<std::vector<int>> partition;     // indices into the dataset
};

namespace detail {

inline bool fits(const Eigen::VectorXd& g, const Eigen::VectorXd& x, double y, double tol) {
    return std::abs(g.dot(x) - y) <= tol * (1.0 + std::abs(y));
}

// exact least-norm fit of <= ell points; empty optional when inconsistent
inline std::optional<Eigen::VectorXd> exact_fit(const std::vector<Eigen::VectorXd>& xs,
                                                const std::vector<double>& ys,
                                                const std::vector<int>& idx, double tol) {
    const int d = static_cast<int>(xs[0].size());
    Eigen::MatrixXd X(idx.size(), d);
    Eigen::VectorXd Y(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        X.row(static_cast<Eigen::Index>(r)) = xs[idx[r]].transpose();
        Y(static_cast<Eigen::Index>(r)) = ys[idx[r]];
    }
    Eigen::VectorXd g = X.completeOrthogonalDecomposition().solve(Y);
    for (int i : idx)
        if (!fits(g, xs[i], ys[i], tol)) return std::nullopt;
    return g;
}

}  // namespace detail

// Enumerates candidate coefficient vectors from all size-ell subsets in
// general position, deduplicates, then searches for an exact minimum cover
// (branch and bound over candidates in canonical order, minimizing the
// cluster count and breaking ties toward the lexicographically smallest
// cover). Points no candidate covers are grouped into <= ell-point leftover
// clusters, which always admit an exact fit. Deterministic throughout.
inline ErmSolution erm_partition(const ErmProblem& prob) {
    const int m = static_cast<int>(prob.size());
    if (m == 0) return {};
    if (m > prob.K * (prob.ell + 1))
        throw std::invalid_argument("erm_partition: dataset exceeds K(ell+1)");
    if (m > 63) throw std::invalid_argument("erm_partition: dataset too large for bitmask search");

    // candidate functions from ell-subsets (plus singletons, covering the
    // rank-deficient corners); rank-deficient subsets are skipped. Keep-first
    // dedup on coefficients and on cover masks.
    std::vector<Eigen::VectorXd> candidates;
    std::vector<std::uint64_t> cover;
    auto add_candidate = [&](const Eigen::VectorXd& g) {
        std::uint64_t mask = 0;
        for (int i = 0; i < m; ++i)
            if (detail::fits(g, prob.xs[i], prob.ys[i], prob.fit_tol)) mask |= (1ULL << i);
        if (mask == 0) return;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (cover[c] == mask ||
                (candidates[c] - g).norm() <= prob.fit_tol * (1.0 + g.norm()))
                return;  // duplicate
        }
        candidates.push_back(g);
        cover.push_back(mask);
    };

    std::vector<int> subset;
    std::function<void(int, int)> enumerate = [&](int start, int need) {
        if (need == 0) {
            if (auto g = detail::exact_fit(prob.xs, prob.ys, subset, prob.fit_tol)) add_candidate(*g);
            return;
        }
        for (int i = start; i <= m - need; ++i) {
            subset.push_back(i);
            enumerate(i + 1, need - 1);
            subset.pop_back();
        }
    };
    const int take = std::min(prob.ell, m);
    enumerate(0, take);
    for (int i = 0; i < m; ++i) {
        subset = {i};
        if (auto g = detail::exact_fit(prob.xs, prob.ys, subset, prob.fit_tol)) add_candidate(*g);
    }

    const std::uint64_t full = (m == 64) ? ~0ULL : ((1ULL << m) - 1);

    // exact minimum cover: try n = 1, 2, ..., K picks of candidates in
    // canonical (index) order; first solution found is the lexicographically
    // smallest at the minimal count
    std::vector<int> chosen, best;
    std::function<bool(std::size_t, std::uint64_t, int)> search =
        [&](std::size_t start, std::uint64_t covered, int remaining) {
            if (covered == full) {
                best = chosen;
                return true;
            }
            if (remaining == 0) return false;
            for (std::size_t c = start; c < candidates.size(); ++c) {
                if ((cover[c] | covered) == covered) continue;  // adds nothing
                chosen.push_back(static_cast<int>(c));
                if (search(c + 1, covered | cover[c], remaining - 1)) return true;
                chosen.pop_back();
            }
            return false;
        };

    for (int n = 1; n <= prob.K; ++n) {
        chosen.clear();
        if (search(0, 0, n)) break;
    }
    if (best.empty() && full != 0)
        throw ErmInfeasible("erm_partition: no exact cover with <= K pieces (wrong K/ell or non-realizable data)");

    // assign each point to the first chosen candidate that fits it
    ErmSolution sol;
    sol.partition.assign(best.size(), {});
    for (std::size_t c = 0; c < best.size(); ++c) sol.functions.push_back(candidates[best[c]]);
    for (int i = 0; i < m; ++i) {
        for (std::size_t c = 0; c < best.size(); ++c) {
            if (cover[best[c]] & (1ULL << i)) {
                sol.partition[c].push_back(i);
                break;
            }
        }
    }
    // distinctness post-processing: merge near-equal functions into the lower
    // index, and drop clusters emptied by first-fit assignment
    for (std::size_t c2 = sol.functions.size(); c2-- > 1;) {
        for (std::size_t c1 = 0; c1 < c2; ++c1) {
            if ((sol.functions[c2] - sol.functions[c1]).norm() <=
                prob.fit_tol * (1.0 + sol.functions[c1].norm())) {
                sol.partition[c1].insert(sol.partition[c1].end(), sol.partition[c2].begin(),
                                         sol.partition[c2].end());
                std::sort(sol.partition[c1].begin(), sol.partition[c1].end());
                sol.partition.erase(sol.partition.begin() + static_cast<std::ptrdiff_t>(c2));
                sol.functions.erase(sol.functions.begin() + static_cast<std::ptrdiff_t>(c2));
                break;
            }
        }
    }
    for (std::size_t c = sol.partition.size(); c-- > 0;) {
        if (sol.partition[c].empty()) {
            sol.partition.erase(sol.partition.begin() + static_cast<std::ptrdiff_t>(c));
            sol.functions.erase(sol.functions.begin() + static_cast<std::ptrdiff_t>(c));
        }
    }
    sol.n = static_cast<int>(sol.partition.size());
    return sol;
}

// Independent validity check of a solution: exact cover, per-cluster fit,
// pairwise distinct functions.
inline bool erm_solution_valid(const ErmProblem& prob, const ErmSolution& sol) {
    std::vector<int> seen(prob.size(), 0);
    for (std::size_t c = 0; c < sol.partition.size(); ++c) {
        for (int i : sol.partition[c]) {
            ++seen[i];
            if (!detail::fits(sol.functions[c], prob.xs[i], prob.ys[i], prob.fit_tol)) return false;
        }
    }
    for (int s : seen)
        if (s != 1) return false;
    for (std::size_t a = 0; a < sol.functions.size(); ++a)
        for (std::size_t b = a + 1; b < sol.functions.size(); ++b)
            if ((sol.functions[a] - sol.functions[b]).norm() <=
                prob.fit_tol * (1.0 + sol.functions[a].norm()))
                return false;
    return static_cast<int>(sol.partition.size()) == sol.n && sol.n <= prob.K;
}

// True iff g and g' agree on every supplied point (vacuously true when the
// point set is empty). With ell generic points, agreement forces equality.
inline bool determination_check(const Eigen::VectorXd& g, const Eigen::VectorXd& g2,
                                const std::vector<Eigen::VectorXd>& points, double tol = 1e-9) {
    for (const auto& x : points)
        if (std::abs(g.dot(x) - g2.dot(x)) > tol * (1.0 + std::abs(g.dot(x)))) return false;
    return true;
}

}  // namespace smoothcut
