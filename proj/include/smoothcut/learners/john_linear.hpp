#pragma once

#include "smoothcut/learners/cutplane_core.hpp"
#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

// Binary classification with linear thresholds: predict sign(<w_t, x>), cut
// the version space by {<w, y x> >= 0} every round, move w_t to the John
// center of the version space on mistakes.
class JohnLinearLearner : public Learner {
public:
    explicit JohnLinearLearner(int dim, JohnOptions opts = {}, int prune_factor = 8)
        : core_(dim, opts, prune_factor) {}

    Label predict(const Eigen::VectorXd& x, Rng&) override { return core_.predict_sign(x); }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng&) override {
        return core_.observe(x, label_int(y), round_++);
    }

    std::optional<double> log_volume_surrogate() const override { return core_.log_volume(); }

    std::optional<BoundaryHint> boundary_hint() const override {
        return BoundaryHint{core_.classifier(), 0.0};
    }

    const CutPlaneCore& core() const { return core_; }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"}, {"kind", "john_linear"}, {"state", core_.snapshot()}};
    }

private:
    CutPlaneCore core_;
    std::int64_t round_ = 0;
};

}  // namespace smoothcut
