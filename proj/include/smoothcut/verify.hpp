#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "smoothcut/erm.hpp"
#include "smoothcut/john.hpp"
#include "smoothcut/rng.hpp"
#include "smoothcut/sampling.hpp"

namespace smoothcut {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// --- analytic inscribed-ellipsoid cases -------------------------------------

inline CheckResult check_analytic_ellipsoids() {
    CheckResult out{"analytic_ellipsoids", true, ""};
    for (int d = 2; d <= 6; ++d) {
        Ellipsoid e = max_inscribed_ellipsoid(HalfspacePolytope(d));
        double cerr = e.center.norm();
        double serr = (e.shape - Eigen::MatrixXd::Identity(d, d)).norm();
        if (cerr > 1e-6 || serr > 1e-5) {
            out.pass = false;
            out.detail += "box d=" + std::to_string(d) + " center_err=" + std::to_string(cerr) +
                          " shape_err=" + std::to_string(serr) + "; ";
        }
    }
    {
        // anisotropic box |w1| <= 1, |w2| <= 0.5 -> diag(1, 0.5)
        HalfspacePolytope p(2);
        Eigen::Vector2d e2(0.0, 1.0);
        p = p.cut(e2, 0.5).cut(-e2, 0.5);
        Ellipsoid e = max_inscribed_ellipsoid(p);
        Eigen::Matrix2d want;
        want << 1.0, 0.0, 0.0, 0.5;
        if ((e.shape - want).norm() > 1e-5 || e.center.norm() > 1e-6) {
            out.pass = false;
            out.detail += "anisotropic box mismatch; ";
        }
    }
    {
        // triangle w1 >= 0, w2 >= 0, w1 + w2 <= 1: centroid center, Steiner
        // inellipse area pi/(6 sqrt(3))
        HalfspacePolytope p(2);
        Eigen::Vector2d e1(1.0, 0.0), e2(0.0, 1.0), ones(1.0, 1.0);
        p = p.cut(-e1, 0.0).cut(-e2, 0.0).cut(ones, 1.0);
        Ellipsoid e = max_inscribed_ellipsoid(p);
        double area_err = std::abs(std::exp(e.log_volume) - M_PI / (6.0 * std::sqrt(3.0)));
        double c_err = (e.center - Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)).norm();
        if (area_err > 1e-4 || c_err > 1e-4) {
            out.pass = false;
            out.detail += "triangle: area_err=" + std::to_string(area_err) +
                          " center_err=" + std::to_string(c_err) + "; ";
        }
    }
    if (out.pass) out.detail = "boxes d=2..6, anisotropic box, triangle";
    return out;
}

// --- random polytope helpers -------------------------------------------------

inline HalfspacePolytope random_polytope(int d, int n_cuts, Rng& rng) {
    HalfspacePolytope p(d);
    for (int i = 0; i < n_cuts; ++i) {
        Eigen::VectorXd g = sample_unit_sphere(d, rng);
        // offsets keep a decent interior: cut planes at distance 0.15..0.9
        p = p.cut(g, rng.uniform(0.15, 0.9), i);
    }
    return p;
}

// --- sandwich batch ----------------------------------------------------------

inline CheckResult check_sandwich_batch(int n_polytopes = 100, int n_samples = 10000,
                                        std::uint64_t seed = 2024) {
    Rng rng(seed);
    CheckResult out{"sandwich_batch", true, ""};
    int total_inner = 0, total_outer = 0;
    for (int i = 0; i < n_polytopes; ++i) {
        int d = 2 + static_cast<int>(rng.uniform_index(5));  // d in 2..6
        HalfspacePolytope p = random_polytope(d, 2 + static_cast<int>(rng.uniform_index(7)), rng);
        Ellipsoid e;
        try {
            e = max_inscribed_ellipsoid(p);
        } catch (const InfeasibleOrDegenerate&) {
            continue;  // rare degenerate draw; not a sandwich violation
        }
        SandwichReport rep = sandwich_check(p, e, n_samples, rng);
        total_inner += rep.inner_violations;
        total_outer += rep.outer_violations;
    }
    out.pass = (total_inner == 0 && total_outer == 0);
    out.detail = std::to_string(n_polytopes) + " polytopes x " + std::to_string(n_samples) +
                 " samples: inner=" + std::to_string(total_inner) +
                 " outer=" + std::to_string(total_outer);
    return out;
}

// --- center-cut decay batch ---------------------------------------------------

// Volume ratios after cutting random polytopes through their inscribed-
// ellipsoid centers. Every ratio must be <= 8/9 + slack.
inline std::vector<double> tarasov_ratios(int n_pairs, int max_dim, Rng& rng) {
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(n_pairs));
    while (static_cast<int>(ratios.size()) < n_pairs) {
        int d = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_dim - 1)));
        HalfspacePolytope p = random_polytope(d, static_cast<int>(rng.uniform_index(8)), rng);
        Ellipsoid before;
        try {
            before = max_inscribed_ellipsoid(p);
        } catch (const InfeasibleOrDegenerate&) {
            continue;
        }
        Eigen::VectorXd g = sample_unit_sphere(d, rng);
        HalfspacePolytope cutp = p.cut(g, g.dot(before.center), 0);
        try {
            Ellipsoid after = max_inscribed_ellipsoid(cutp);
            ratios.push_back(std::exp(after.log_volume - before.log_volume));
        } catch (const InfeasibleOrDegenerate&) {
            ratios.push_back(0.0);  // collapsed to nothing: decay holds trivially
        }
    }
    return ratios;
}

inline CheckResult check_tarasov_ratios(const std::vector<double>& ratios, double slack = 1e-3) {
    CheckResult out{"tarasov_decay", true, ""};
    int violations = 0;
    double worst = 0.0;
    for (double r : ratios) {
        worst = std::max(worst, r);
        if (r > 8.0 / 9.0 + slack) ++violations;
    }
    out.pass = violations == 0;
    out.detail = std::to_string(ratios.size()) + " center cuts, worst ratio " +
                 std::to_string(worst) + ", violations " + std::to_string(violations);
    return out;
}

inline CheckResult check_tarasov_batch(int n_pairs = 1000, int max_dim = 5,
                                       std::uint64_t seed = 7) {
    Rng rng(seed);
    return check_tarasov_ratios(tarasov_ratios(n_pairs, max_dim, rng));
}

// --- ERM cross-check ----------------------------------------------------------

// Exhaustive partition search: the minimum number of exactly-fittable blocks
// over all set partitions. Independent of the candidate-enumeration path.
inline int exhaustive_min_cover(const ErmProblem& prob) {
    const int m = static_cast<int>(prob.size());
    std::vector<int> assign(m, -1);
    int best = prob.K + 1;
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (used >= best) return;
        if (i == m) {
            best = used;
            return;
        }
        for (int c = 0; c < std::min(used + 1, prob.K); ++c) {
            assign[i] = c;
            // the block containing i must stay exactly fittable
            std::vector<int> block;
            for (int j = 0; j <= i; ++j)
                if (assign[j] == c) block.push_back(j);
            if (detail::exact_fit(prob.xs, prob.ys, block, prob.fit_tol))
                rec(i + 1, std::max(used, c + 1));
        }
        assign[i] = -1;
    };
    rec(0, 0);
    return best <= prob.K ? best : -1;  // -1: no <= K cover
}

inline ErmProblem random_erm_instance(int max_m, int max_d, int max_k, Rng& rng) {
    ErmProblem prob;
    const int d = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_d)));
    prob.K = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_k)));
    prob.ell = d;
    const int pieces = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(prob.K)));
    std::vector<Eigen::VectorXd> coeffs;
    for (int p = 0; p < pieces; ++p) {
        Eigen::VectorXd a(d);
        for (int j = 0; j < d; ++j) a(j) = std::round(rng.uniform(-3.0, 3.0));
        coeffs.push_back(a);
    }
    const int m = 1 + static_cast<int>(rng.uniform_index(
                          static_cast<std::uint64_t>(std::min(max_m, prob.K * (d + 1)))));
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd x = sample_uniform_ball(d, rng);
        int p = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(pieces)));
        prob.xs.push_back(x);
        prob.ys.push_back(coeffs[static_cast<std::size_t>(p)].dot(x));
    }
    return prob;
}

inline CheckResult check_erm_crosscheck(int n_instances = 300, std::uint64_t seed = 99) {
    Rng rng(seed);
    CheckResult out{"erm_crosscheck", true, ""};
    int mismatches = 0, infeasibles = 0;
    for (int i = 0; i < n_instances; ++i) {
        ErmProblem prob = random_erm_instance(8, 2, 3, rng);
        int want = exhaustive_min_cover(prob);
        int got;
        ErmSolution sol;
        try {
            sol = erm_partition(prob);
            got = sol.n;
        } catch (const ErmInfeasible&) {
            got = -1;
        }
        if (want == -1) {
            ++infeasibles;
            if (got != -1) ++mismatches;
            continue;
        }
        if (got != want || !erm_solution_valid(prob, sol)) ++mismatches;
    }
    out.pass = mismatches == 0;
    out.detail = std::to_string(n_instances) + " instances, " + std::to_string(mismatches) +
                 " mismatches (" + std::to_string(infeasibles) + " infeasible cases)";
    return out;
}

}  // namespace smoothcut
