#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include "smoothcut/errors.hpp"
#include "smoothcut/john.hpp"
#include "smoothcut/polytope.hpp"

namespace smoothcut {

// Shared state of every cutting-plane learner: a version space over the
// parameter box, the current classifier vector, and the John-volume
// surrogate. The classifier starts at e_1; the surrogate starts at the
// volume of the unit ball (the inscribed ellipsoid of the fresh box).
class CutPlaneCore {
public:
    explicit CutPlaneCore(int dim, JohnOptions opts = {}, int prune_base_factor = 8)
        : poly_(dim),
          w_(Eigen::VectorXd::Unit(dim, 0)),
          log_volume_(log_unit_ball_volume(dim)),
          opts_(opts),
          prune_base_(prune_base_factor * dim),
          prune_at_(prune_base_factor * dim) {}

    int dim() const { return poly_.dim(); }
    const Eigen::VectorXd& classifier() const { return w_; }
    const HalfspacePolytope& version_space() const { return poly_; }
    double log_volume() const { return log_volume_; }
    int mistake_count() const { return mistakes_; }
    int recompute_count() const { return recomputes_; }

    int predict_sign(const Eigen::VectorXd& x) const { return sign_pm_(w_.dot(x)); }

    // W <- W ∩ { <w, y x> >= 0 }, i.e. normal = -y x, offset 0.
    void add_cut(const Eigen::VectorXd& x, int y, std::int64_t round) {
        poly_ = poly_.cut(-static_cast<double>(y) * x, 0.0, round);
        maybe_prune();
    }

    // John center refresh; only called on mistake (or bucket-full) rounds.
    void recompute_center() {
        try {
            Ellipsoid e = JohnSolver(opts_).solve(poly_).ellipsoid;
            w_ = e.center;
            log_volume_ = e.log_volume;
            ++recomputes_;
        } catch (const InfeasibleOrDegenerate& err) {
            throw NonRealizable(std::string("version space collapsed: ") + err.what());
        }
    }

    // One full round of the base algorithm: cut every round, recompute the
    // center only when the prediction was wrong.
    UpdateReport observe(const Eigen::VectorXd& x, int y, std::int64_t round) {
        const bool mistake = predict_sign(x) != y;
        add_cut(x, y, round);
        if (mistake) {
            ++mistakes_;
            recompute_center();
        }
        return {mistake, mistake, log_volume_};
    }

    // Censored-feedback path (K-class reduction): the cut and the recompute
    // happen together, and only when this instance is handed feedback.
    void error_update(const Eigen::VectorXd& x, int y, std::int64_t round) {
        add_cut(x, y, round);
        ++mistakes_;
        recompute_center();
    }

    nlohmann::json snapshot() const {
        nlohmann::json cons = nlohmann::json::array();
        for (const auto& h : poly_.constraints()) {
            cons.push_back({{"normal", std::vector<double>(h.normal.data(), h.normal.data() + h.normal.size())},
                            {"offset", h.offset},
                            {"box", h.tag.box_facet},
                            {"round", h.tag.round}});
        }
        return {{"w", std::vector<double>(w_.data(), w_.data() + w_.size())},
                {"log_volume", log_volume_},
                {"mistakes", mistakes_},
                {"constraints", cons}};
    }

private:
    HalfspacePolytope poly_;
    Eigen::VectorXd w_;
    double log_volume_;
    JohnOptions opts_;
    int prune_base_;
    int prune_at_;
    int mistakes_ = 0;
    int recomputes_ = 0;

    static int sign_pm_(double v) { return v >= 0.0 ? 1 : -1; }

    void maybe_prune() {
        if (static_cast<int>(poly_.size()) <= prune_at_) return;
        if (static_cast<int>(poly_.size()) <= 150) {
            poly_ = poly_.prune_redundant();
        } else {
            // facet-rich version space: per-facet LPs would dominate the run.
            // One fresh solve gives P ⊆ c + d·(B·ball); cuts slack against
            // that enclosure are certified redundant in O(d^2) each.
            try {
                Ellipsoid e = JohnSolver(opts_).solve(poly_).ellipsoid;
                poly_ = poly_.prune_by_enclosure(e.center, static_cast<double>(dim()) * e.shape);
            } catch (const InfeasibleOrDegenerate&) {
                // leave pruning to the next recompute, which will surface it
            }
        }
        // multiplicative escalation: a version space can carry many genuinely
        // irredundant facets, and a linear schedule would make prune passes
        // dominate the run
        prune_at_ = (static_cast<int>(poly_.size()) > prune_base_)
                        ? (3 * static_cast<int>(poly_.size())) / 2
                        : prune_base_;
    }
};

}  // namespace smoothcut
