#pragma once

#include "smoothcut/learners/cutplane_core.hpp"
#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

// x~ = z (x, 1) / 4 with z ~ Unif(1,2). Sign-preserving for every (w, b) and
// keeps the lifted context in the unit ball.
inline Eigen::VectorXd affine_lift_wrap(const Eigen::VectorXd& x, double z) {
    Eigen::VectorXd out(x.size() + 1);
    out.head(x.size()) = x;
    out(x.size()) = 1.0;
    return (z / 4.0) * out;
}

inline Eigen::VectorXd affine_lift_wrap(const Eigen::VectorXd& x, Rng& rng) {
    return affine_lift_wrap(x, rng.uniform(1.0, 2.0));
}

// The lift costs smoothness: a sigma-smooth context stream becomes
// sigma / 4^(d+2)-smooth in dimension d+1.
inline double affine_lift_sigma(double sigma, int d) { return sigma / std::pow(4.0, d + 2); }

// Binary classification with affine thresholds: run the linear learner on the
// randomized lift. The z draw happens at predict time and is reused by the
// following update call.
class JohnAffineLearner : public Learner {
public:
    explicit JohnAffineLearner(int dim, JohnOptions opts = {}, int prune_factor = 8)
        : context_dim_(dim), core_(dim + 1, opts, prune_factor) {}

    Label predict(const Eigen::VectorXd& x, Rng& rng) override {
        lifted_ = affine_lift_wrap(x, rng);
        return core_.predict_sign(lifted_);
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng& rng) override {
        // the lift drawn at predict time is this round's view; draw one here
        // only if update was called cold
        if (lifted_.size() == 0) lifted_ = affine_lift_wrap(x, rng);
        UpdateReport rep = core_.observe(lifted_, label_int(y), round_++);
        lifted_.resize(0);
        return rep;
    }

    std::optional<double> log_volume_surrogate() const override { return core_.log_volume(); }

    std::optional<BoundaryHint> boundary_hint() const override {
        // lifted classifier (w, b) cuts context space along <w, x> + b = 0
        return BoundaryHint{core_.classifier().head(context_dim_),
                            core_.classifier()(context_dim_)};
    }

    const CutPlaneCore& core() const { return core_; }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"}, {"kind", "john_affine"}, {"state", core_.snapshot()}};
    }

private:
    int context_dim_;
    CutPlaneCore core_;
    Eigen::VectorXd lifted_;
    std::int64_t round_ = 0;
};

}  // namespace smoothcut
