#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <vector>

#include "smoothcut/errors.hpp"

namespace smoothcut {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Eigen::VectorXd point;
    bool early_stopped = false;  // objective crossed the caller's stop threshold
};

// Dense two-phase tableau simplex for
//     maximize c.x  subject to  A x <= b,   x free.
//
// Free variables are split x = xp - xm; rows with negative rhs get an
// artificial variable in phase one. Bland's rule throughout, so the pivot
// sequence (and hence the output) is deterministic for fixed inputs.
class SimplexSolver {
public:
    // stop_above: return as soon as the objective provably exceeds this value
    // (used for redundancy certificates, where only the comparison matters).
    // max_pivots: degenerate systems can make Bland's rule crawl; callers
    // that can live with an inconclusive answer set a budget and check for
    // LpStatus::IterationLimit.
    LpResult maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                      double stop_above = std::numeric_limits<double>::infinity(),
                      int max_pivots = 200000) {
        const int m = static_cast<int>(A.rows());
        const int d = static_cast<int>(A.cols());
        const int n_struct = 2 * d;  // xp, xm
        int n = n_struct + m;        // + slacks

        // count artificials
        std::vector<int> artificial_row;
        for (int i = 0; i < m; ++i)
            if (b(i) < 0.0) artificial_row.push_back(i);
        const int n_art = static_cast<int>(artificial_row.size());
        const int n_total = n + n_art;

        // tableau: m rows of [vars | rhs], plus objective handled separately
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, n_total + 1);
        basis_.assign(m, -1);
        for (int i = 0; i < m; ++i) {
            double sgn = (b(i) < 0.0) ? -1.0 : 1.0;
            for (int j = 0; j < d; ++j) {
                T(i, j) = sgn * A(i, j);
                T(i, d + j) = -sgn * A(i, j);
            }
            T(i, n_struct + i) = sgn;  // slack
            T(i, n_total) = sgn * b(i);
        }
        int art = 0;
        for (int i : artificial_row) {
            T(i, n + art) = 1.0;
            basis_[i] = n + art;
            ++art;
        }
        for (int i = 0; i < m; ++i)
            if (basis_[i] < 0) basis_[i] = n_struct + i;

        pivot_budget_ = max_pivots;
        if (n_art > 0) {
            // phase one: minimize sum of artificials
            Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_total);
            for (int j = n; j < n_total; ++j) cost(j) = 1.0;
            double obj = run_phase(T, cost, n_total);
            if (iteration_limited_) return {LpStatus::IterationLimit, 0.0, {}};
            if (obj > 1e-7) return {LpStatus::Infeasible, 0.0, {}};
            // drive artificials out of the basis where possible
            for (int i = 0; i < m; ++i) {
                if (basis_[i] >= n) {
                    int enter = -1;
                    for (int j = 0; j < n; ++j)
                        if (std::abs(T(i, j)) > 1e-9) { enter = j; break; }
                    if (enter >= 0) pivot(T, i, enter, n_total);
                    // else: redundant row, harmless to leave
                }
            }
        }

        // phase two: minimize -(c.xp - c.xm); artificial columns frozen out
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_total);
        for (int j = 0; j < d; ++j) {
            cost(j) = -c(j);
            cost(d + j) = c(j);
        }
        double obj = run_phase(T, cost, n, n_total, -stop_above);
        if (unbounded_) return {LpStatus::Unbounded, 0.0, {}, early_stopped_};
        if (iteration_limited_) return {LpStatus::IterationLimit, -obj, {}, early_stopped_};

        Eigen::VectorXd z = Eigen::VectorXd::Zero(n_total);
        for (int i = 0; i < m; ++i)
            if (basis_[i] < n_total) z(basis_[i]) = T(i, n_total);
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x(j) = z(j) - z(d + j);
        return {LpStatus::Optimal, -obj, x, early_stopped_};
    }

private:
    std::vector<int> basis_;
    bool unbounded_ = false;
    bool early_stopped_ = false;
    bool iteration_limited_ = false;
    int pivot_budget_ = 200000;

    void pivot(Eigen::MatrixXd& T, int row, int col, int rhs_col) {
        T.row(row) /= T(row, col);
        for (int i = 0; i < T.rows(); ++i) {
            if (i == row) continue;
            double f = T(i, col);
            if (f != 0.0) T.row(i) -= f * T.row(row);
        }
        (void)rhs_col;
        basis_[row] = col;
    }

    // minimizes cost over columns [0, n_active); tableau has n_cols columns + rhs;
    // bails out once the objective drops below stop_below
    double run_phase(Eigen::MatrixXd& T, const Eigen::VectorXd& cost, int n_active, int n_cols = -1,
                     double stop_below = -std::numeric_limits<double>::infinity()) {
        if (n_cols < 0) n_cols = n_active;
        const int m = static_cast<int>(T.rows());
        const int rhs = static_cast<int>(T.cols()) - 1;
        unbounded_ = false;
        early_stopped_ = false;
        iteration_limited_ = false;

        // reduced costs r_j = cost_j - cost_B . B^{-1} A_j, maintained as a row
        Eigen::RowVectorXd r = cost.transpose().head(n_cols);
        double obj = 0.0;
        for (int i = 0; i < m; ++i) {
            if (cost(basis_[i]) != 0.0) {
                r -= cost(basis_[i]) * T.row(i).head(n_cols);
                obj += cost(basis_[i]) * T(i, rhs);
            }
        }

        // Bland's rule throughout: immune to cycling, and deterministic
        for (int iter = 0; iter < pivot_budget_; ++iter) {
            int enter = -1;
            for (int j = 0; j < n_active; ++j) {
                if (r(j) < -1e-9) { enter = j; break; }
            }
            if (enter < 0) return obj;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (T(i, enter) > 1e-11) {
                    double ratio = T(i, rhs) / T(i, enter);
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) {
                unbounded_ = true;
                return obj;
            }
            double rc = r(enter);
            pivot(T, leave, enter, rhs);
            r -= rc * T.row(leave).head(n_cols);
            r(enter) = 0.0;
            obj += rc * T(leave, rhs);
            if (obj < stop_below) {
                early_stopped_ = true;
                return obj;
            }
        }
        iteration_limited_ = true;
        return obj;
    }
};

inline LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                            double stop_above = std::numeric_limits<double>::infinity(),
                            int max_pivots = 200000) {
    SimplexSolver s;
    return s.maximize(A, b, c, stop_above, max_pivots);
}

}  // namespace smoothcut
