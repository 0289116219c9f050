#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "smoothcut/ellipsoid.hpp"
#include "smoothcut/errors.hpp"
#include "smoothcut/lp.hpp"
#include "smoothcut/polytope.hpp"

namespace smoothcut {

struct JohnOptions {
    double tol = 1e-8;            // feasibility margin allowance
    double rel_gap = 1e-6;        // relative optimality gap target on log det
    double eigen_floor = 1e-10;   // below this min eigenvalue the body counts as degenerate
};

struct JohnSolution {
    Ellipsoid ellipsoid;
    double optimality_gap = 0.0;  // barrier bound on the log-det suboptimality
    int newton_steps = 0;
    double chebyshev_radius = 0.0;
};

// Maximum-volume inscribed ellipsoid of a halfspace polytope.
//
// Solves  maximize sum_j log L_jj  s.t.  <a_i, c> + ||L^T a_i|| <= b_i
// (L lower triangular with positive diagonal) by a log-barrier Newton method,
// after translating/scaling the polytope by its bounding box so the iterates
// are well conditioned. The returned shape matrix is the symmetric square
// root of L L^T mapped back to original coordinates.
//
// Every step is deterministic, so fixed inputs give bitwise-identical output.
class JohnSolver {
public:
    explicit JohnSolver(JohnOptions opts = {}) : opts_(opts) {}

    JohnSolution solve(const HalfspacePolytope& poly) const {
        const int d = poly.dim();
        Eigen::MatrixXd A;
        Eigen::VectorXd b;
        poly.matrix_form(A, b);
        const int m = static_cast<int>(A.rows());

        // unit-normalize rows
        for (int i = 0; i < m; ++i) {
            double n = A.row(i).norm();
            A.row(i) /= n;
            b(i) /= n;
        }

        // Active-set outer loop: solve on a working subset, test the result
        // against every constraint, pull in the violators, repeat. A subset
        // optimum that is feasible for the full system is the full optimum
        // (the subset problem is a relaxation), so the loop is exact. Version
        // spaces can carry thousands of facets while the inscribed ellipsoid
        // touches only O(d^2) of them; this keeps the per-solve LPs small.
        std::vector<int> subset;
        std::vector<char> in_subset(m, 0);
        auto add_row = [&](int i) {
            if (!in_subset[i]) {
                in_subset[i] = 1;
                subset.push_back(i);
            }
        };
        for (int i = 0; i < std::min(2 * d, m); ++i) add_row(i);  // box facets come first
        for (int i = m - 1; i >= 0 && static_cast<int>(subset.size()) < 6 * d; --i)
            add_row(i);  // most recent cuts are the likeliest to bind

        JohnSolution sol;
        Eigen::VectorXd center;
        Eigen::MatrixXd B;
        const int max_outer = 200;
        for (int outer = 0;; ++outer) {
            if (outer >= max_outer)
                throw LPFailure("max_inscribed_ellipsoid: active-set loop did not converge");
            Eigen::MatrixXd As(subset.size(), d);
            Eigen::VectorXd bs(subset.size());
            for (std::size_t r = 0; r < subset.size(); ++r) {
                As.row(static_cast<Eigen::Index>(r)) = A.row(subset[r]);
                bs(static_cast<Eigen::Index>(r)) = b(subset[r]);
            }
            solve_subset(As, bs, center, B, sol);

            // violations against the full system, worst first
            std::vector<std::pair<double, int>> violators;
            for (int i = 0; i < m; ++i) {
                if (in_subset[i]) continue;
                double margin = A.row(i).dot(center) + (B * A.row(i).transpose()).norm() - b(i);
                if (margin > 1e-11) violators.emplace_back(-margin, i);
            }
            if (violators.empty()) break;
            std::sort(violators.begin(), violators.end());
            for (std::size_t k = 0; k < violators.size() && k < static_cast<std::size_t>(2 * d); ++k)
                add_row(violators[k].second);
        }

        // guarantee the feasibility contract against every original constraint
        double shrink = 1.0;
        for (int i = 0; i < m; ++i) {
            double room = b(i) - A.row(i).dot(center);
            double need = (B * A.row(i).transpose()).norm();
            if (need > 1e-300 && room / need < shrink) shrink = std::max(room / need, 0.0);
        }
        if (shrink < 1.0) B *= shrink;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> floor_check(B);
        double min_ev = floor_check.eigenvalues().minCoeff();
        if (min_ev < opts_.eigen_floor)
            throw InfeasibleOrDegenerate(
                "max_inscribed_ellipsoid: solution eigenvalue " + std::to_string(min_ev) +
                " below floor (collapsed version space or non-realizable data)");

        sol.ellipsoid = Ellipsoid::make(center, B);
        return sol;
    }

private:
    JohnOptions opts_;

    // one inscribed-ellipsoid solve on a (small) constraint system: bounding
    // box prescale, Chebyshev-center warm start, then the barrier Newton loop
    void solve_subset(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& center,
                      Eigen::MatrixXd& B, JohnSolution& sol) const {
        const int d = static_cast<int>(A.cols());
        const int m = static_cast<int>(A.rows());

        Eigen::VectorXd lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
            e(j) = 1.0;
            LpResult up = lp_maximize(A, b, e);
            LpResult dn = lp_maximize(A, b, -e);
            if (up.status == LpStatus::IterationLimit || dn.status == LpStatus::IterationLimit)
                throw LPFailure("max_inscribed_ellipsoid: bounding-box LP stalled");
            if (up.status != LpStatus::Optimal || dn.status != LpStatus::Optimal)
                throw InfeasibleOrDegenerate("max_inscribed_ellipsoid: empty polytope");
            hi(j) = up.value;
            lo(j) = -dn.value;
        }
        Eigen::VectorXd mid = 0.5 * (lo + hi);
        Eigen::VectorXd half = 0.5 * (hi - lo);
        for (int j = 0; j < d; ++j) {
            if (half(j) < opts_.eigen_floor)
                throw InfeasibleOrDegenerate("max_inscribed_ellipsoid: polytope width " +
                                             std::to_string(half(j)) + " below eigenvalue floor");
            half(j) = std::max(half(j), 1e-14);
        }

        // scaled problem: w = mid + S w'  with S = diag(half)
        Eigen::MatrixXd As(m, d);
        Eigen::VectorXd bs(m);
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd row = A.row(i).transpose().cwiseProduct(half);
            double n = row.norm();
            As.row(i) = row.transpose() / n;
            bs(i) = (b(i) - A.row(i).dot(mid)) / n;
        }

        auto [c0, r0] = chebyshev(As, bs);
        if (r0 <= 1e-13)
            throw InfeasibleOrDegenerate("max_inscribed_ellipsoid: no interior (chebyshev radius " +
                                         std::to_string(r0) + ")");

        Eigen::VectorXd c = c0;
        Eigen::MatrixXd L = (0.9 * r0) * Eigen::MatrixXd::Identity(d, d);
        barrier_solve(As, bs, c, L, sol);
        sol.chebyshev_radius = r0;

        // map back: shape_general = S * L, B = (S L L^T S)^{1/2}
        Eigen::MatrixXd SL = half.asDiagonal() * L;
        Eigen::MatrixXd BB = SL * SL.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (BB + BB.transpose()));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        B = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        center = mid + half.cwiseProduct(c);
    }

    static std::pair<Eigen::VectorXd, double> chebyshev(const Eigen::MatrixXd& A,
                                                        const Eigen::VectorXd& b) {
        const int m = static_cast<int>(A.rows());
        const int d = static_cast<int>(A.cols());
        Eigen::MatrixXd Ac(m, d + 1);
        Ac.leftCols(d) = A;
        for (int i = 0; i < m; ++i) Ac(i, d) = 1.0;  // rows are unit norm
        Eigen::VectorXd obj = Eigen::VectorXd::Zero(d + 1);
        obj(d) = 1.0;
        LpResult r = lp_maximize(Ac, b, obj);
        if (r.status != LpStatus::Optimal) return {Eigen::VectorXd::Zero(d), -1.0};
        return {r.point.head(d), r.value};
    }

    // packs (c, vech L); lower-triangular column-major
    static int pack_index(int d, int j, int k) {
        // offset of column k = sum_{t<k} (d - t)
        return d + k * d - k * (k - 1) / 2 + (j - k);
    }

    void barrier_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& c,
                       Eigen::MatrixXd& L, JohnSolution& sol) const {
        const int d = static_cast<int>(A.cols());
        const int m = static_cast<int>(A.rows());
        const int nL = d * (d + 1) / 2;
        const int n = d + nL;

        auto objective = [&](const Eigen::MatrixXd& Lm) {
            double f = 0.0;
            for (int j = 0; j < d; ++j) f -= std::log(Lm(j, j));
            return f;
        };
        auto slacks = [&](const Eigen::VectorXd& cv, const Eigen::MatrixXd& Lm, Eigen::VectorXd& s,
                          Eigen::MatrixXd& V) {
            V = Lm.transpose() * A.transpose();  // column i = L^T a_i
            for (int i = 0; i < m; ++i) s(i) = b(i) - A.row(i).dot(cv) - V.col(i).norm();
        };

        Eigen::VectorXd s(m);
        Eigen::MatrixXd V(d, m);
        slacks(c, L, s, V);

        double mu = 1.0;
        const int max_outer = 60;
        for (int outer = 0; outer < max_outer; ++outer) {
            // Newton loop at fixed mu
            for (int it = 0; it < 80; ++it) {
                Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
                Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
                for (int j = 0; j < d; ++j) {
                    int idx = pack_index(d, j, j);
                    grad(idx) -= 1.0 / L(j, j);
                    H(idx, idx) += 1.0 / (L(j, j) * L(j, j));
                }
                for (int i = 0; i < m; ++i) {
                    const double si = s(i);
                    Eigen::VectorXd vhat = V.col(i);
                    double vn = vhat.norm();
                    if (vn < 1e-300) vn = 1e-300;
                    vhat /= vn;
                    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
                    u.head(d) = A.row(i).transpose();
                    for (int k = 0; k < d; ++k)
                        for (int j = k; j < d; ++j)
                            u(pack_index(d, j, k)) = A(i, j) * vhat(k);
                    grad += (mu / si) * u;
                    H += (mu / (si * si)) * u * u.transpose();
                    // curvature of ||L^T a||: (a a^T) (x) (I - vhat vhat^T)/||v||
                    const double w = mu / (si * vn);
                    for (int k = 0; k < d; ++k) {
                        for (int kp = 0; kp < d; ++kp) {
                            double base = ((k == kp) ? 1.0 : 0.0) - vhat(k) * vhat(kp);
                            if (base == 0.0) continue;
                            base *= w;
                            for (int j = k; j < d; ++j) {
                                const double aj = A(i, j);
                                if (aj == 0.0) continue;
                                int row = pack_index(d, j, k);
                                for (int jp = kp; jp < d; ++jp)
                                    H(row, pack_index(d, jp, kp)) += base * aj * A(i, jp);
                            }
                        }
                    }
                }

                Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
                Eigen::VectorXd step = -ldlt.solve(grad);
                if (!step.allFinite()) {
                    H.diagonal().array() += 1e-10;
                    step = -Eigen::LDLT<Eigen::MatrixXd>(H).solve(grad);
                    if (!step.allFinite()) throw LPFailure("john barrier: singular Newton system");
                }
                double decrement2 = -grad.dot(step);
                if (decrement2 <= 2e-10 * (1.0 + std::abs(objective(L)))) break;

                // backtracking line search: stay strictly feasible, then Armijo
                double phi0 = objective(L);
                for (int i = 0; i < m; ++i) phi0 -= mu * std::log(s(i));
                double alpha = 1.0;
                Eigen::VectorXd c_try;
                Eigen::MatrixXd L_try;
                Eigen::VectorXd s_try(m);
                Eigen::MatrixXd V_try;
                bool moved = false;
                for (int bt = 0; bt < 60; ++bt) {
                    c_try = c + alpha * step.head(d);
                    L_try = L;
                    for (int k = 0; k < d; ++k)
                        for (int j = k; j < d; ++j) L_try(j, k) += alpha * step(pack_index(d, j, k));
                    bool ok = true;
                    for (int j = 0; j < d; ++j)
                        if (L_try(j, j) <= 0.0) ok = false;
                    if (ok) {
                        slacks(c_try, L_try, s_try, V_try);
                        for (int i = 0; i < m; ++i)
                            if (s_try(i) <= 0.0) ok = false;
                    }
                    if (ok) {
                        double phi = objective(L_try);
                        for (int i = 0; i < m; ++i) phi -= mu * std::log(s_try(i));
                        if (phi <= phi0 - 0.25 * alpha * decrement2) {
                            moved = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                if (!moved) break;
                c = c_try;
                L = L_try;
                s = s_try;
                V = V_try;
                ++sol.newton_steps;
            }

            double gap_target = opts_.rel_gap * (1.0 + std::abs(objective(L)));
            if (m * mu <= gap_target) {
                sol.optimality_gap = m * mu;
                return;
            }
            mu = std::max(mu * 0.15, 0.9 * gap_target / m);
        }
        sol.optimality_gap = m * mu;  // hit the outer cap; gap is still reported honestly
    }
};

inline JohnSolution max_inscribed_ellipsoid_full(const HalfspacePolytope& poly,
                                                 JohnOptions opts = {}) {
    return JohnSolver(opts).solve(poly);
}

inline Ellipsoid max_inscribed_ellipsoid(const HalfspacePolytope& poly, double tol = 1e-8) {
    JohnOptions opts;
    opts.tol = tol;
    return JohnSolver(opts).solve(poly).ellipsoid;
}

}  // namespace smoothcut
