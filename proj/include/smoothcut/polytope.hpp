#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "smoothcut/errors.hpp"
#include "smoothcut/lp.hpp"

namespace smoothcut {

// Where a constraint came from. Box facets are permanent; data cuts carry the
// round that produced them and the John center recorded at insertion time
// (used by the decay verifier).
struct ConstraintTag {
    bool box_facet = false;
    std::int64_t round = -1;
};

struct Halfspace {
    Eigen::VectorXd normal;  // <normal, w> <= offset
    double offset = 0.0;
    ConstraintTag tag;
};

// Version space F_t as an intersection of halfspaces. Always carries the 2d
// facets of the box [-1,1]^d, so the body is bounded from day one.
class HalfspacePolytope {
public:
    explicit HalfspacePolytope(int dim) : dim_(dim) {
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
            e(i) = 1.0;
            constraints_.push_back({e, 1.0, {true, -1}});
            constraints_.push_back({-e, 1.0, {true, -1}});
        }
    }

    int dim() const { return dim_; }
    const std::vector<Halfspace>& constraints() const { return constraints_; }
    std::size_t size() const { return constraints_.size(); }

    // New polytope = this ∩ {<normal, w> <= offset}. Value semantics; the list
    // grows by exactly one. Emptiness is detected lazily by the solver.
    HalfspacePolytope cut(const Eigen::VectorXd& normal, double offset,
                          std::int64_t round = -1) const {
        if (normal.norm() <= 0.0) throw std::invalid_argument("cut: zero normal");
        HalfspacePolytope out = *this;
        out.constraints_.push_back({normal, offset, {false, round}});
        return out;
    }

    bool contains(const Eigen::VectorXd& point, double slack = 0.0) const {
        for (const auto& h : constraints_)
            if (h.normal.dot(point) > h.offset + slack) return false;
        return true;
    }

    // (A, b) view of the constraint system.
    void matrix_form(Eigen::MatrixXd& A, Eigen::VectorXd& b) const {
        const int m = static_cast<int>(constraints_.size());
        A.resize(m, dim_);
        b.resize(m);
        for (int i = 0; i < m; ++i) {
            A.row(i) = constraints_[i].normal.transpose();
            b(i) = constraints_[i].offset;
        }
    }

    // max <obj, w> over the polytope.
    LpResult support(const Eigen::VectorXd& obj) const {
        Eigen::MatrixXd A;
        Eigen::VectorXd b;
        matrix_form(A, b);
        return lp_maximize(A, b, obj);
    }

    // Drops every data cut whose support over an enclosing ellipsoid already
    // stays under its offset: max over E of <a, w> = <a, c> + ||B a||, so the
    // test is O(d^2) per cut and needs no LP. The caller supplies an E known
    // to contain the polytope (the d-fold dilation of its inscribed
    // ellipsoid). Weaker than the LP certificate but cheap enough for
    // facet-rich version spaces.
    HalfspacePolytope prune_by_enclosure(const Eigen::VectorXd& center,
                                         const Eigen::MatrixXd& shape) const {
        HalfspacePolytope out(dim_);
        out.constraints_.clear();
        for (const auto& h : constraints_) {
            if (!h.tag.box_facet) {
                double support = h.normal.dot(center) + (shape * h.normal).norm();
                if (support <= h.offset - 1e-12 * (1.0 + std::abs(h.offset))) continue;
            }
            out.constraints_.push_back(h);
        }
        return out;
    }

    // Drops every data cut certified redundant by one LP: maximize <a, w> over
    // the remaining constraints and check the optimum stays <= b. Constraints
    // are tested in insertion order and removed as we go, so of two duplicates
    // exactly one survives. Box facets are never removed. Member set is
    // unchanged.
    HalfspacePolytope prune_redundant() const {
        HalfspacePolytope out(dim_);
        out.constraints_ = constraints_;
        std::size_t i = 2 * static_cast<std::size_t>(dim_);  // skip box facets
        while (i < out.constraints_.size()) {
            Halfspace h = out.constraints_[i];
            std::vector<Halfspace> rest;
            rest.reserve(out.constraints_.size() - 1);
            for (std::size_t j = 0; j < out.constraints_.size(); ++j)
                if (j != i) rest.push_back(out.constraints_[j]);

            Eigen::MatrixXd A(rest.size(), dim_);
            Eigen::VectorXd b(rest.size());
            for (std::size_t j = 0; j < rest.size(); ++j) {
                A.row(j) = rest[j].normal.transpose();
                // graded upward perturbation: relaxing the other constraints
                // can only raise the support, so a "redundant" verdict stays
                // sound, while the tie-broken right-hand sides stop the
                // simplex from stalling on degenerate vertices
                double scale = 1.0 + std::abs(rest[j].offset);
                b(j) = rest[j].offset + 1e-11 * scale * (1.0 + static_cast<double>(j) / rest.size());
            }
            // the LP bails out the moment the support crosses the offset: only
            // the redundant-or-not comparison matters here. A blown pivot
            // budget leaves the verdict inconclusive and the constraint kept,
            // which is always member-set-safe.
            const double threshold = h.offset + 1e-10 * (1.0 + std::abs(h.offset));
            LpResult r = lp_maximize(A, b, h.normal, threshold, 3000);
            if (r.status == LpStatus::Unbounded)
                throw LPFailure("prune_redundant: unbounded support LP on a boxed polytope");
            const bool redundant =
                r.status == LpStatus::Infeasible ||  // empty remainder: everything is redundant
                (r.status == LpStatus::Optimal && !r.early_stopped && r.value <= threshold);
            if (redundant)
                out.constraints_.erase(out.constraints_.begin() + static_cast<std::ptrdiff_t>(i));
            else
                ++i;
        }
        return out;
    }

private:
    int dim_;
    std::vector<Halfspace> constraints_;
};

}  // namespace smoothcut
