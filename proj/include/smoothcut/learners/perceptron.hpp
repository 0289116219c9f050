#pragma once

#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

// Classical online perceptron, w_1 = e_1, additive update on mistakes.
// Tolerates non-realizable streams; never errors.
class PerceptronLearner : public Learner {
public:
    // lift_affine: process (x, 1) instead of x, for affine comparators
    explicit PerceptronLearner(int dim, bool lift_affine = false)
        : lift_(lift_affine), w_(Eigen::VectorXd::Unit(dim + (lift_affine ? 1 : 0), 0)) {}

    Label predict(const Eigen::VectorXd& x, Rng&) override {
        return sign_pm(w_.dot(view(x)));
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng&) override {
        const int yi = label_int(y);
        Eigen::VectorXd v = view(x);
        const bool mistake = sign_pm(w_.dot(v)) != yi;
        if (mistake) {
            w_ += static_cast<double>(yi) * v;
            ++mistakes_;
        }
        return {mistake, false, std::nullopt};
    }

    const Eigen::VectorXd& weights() const { return w_; }
    int mistake_count() const { return mistakes_; }

    std::optional<BoundaryHint> boundary_hint() const override {
        if (!lift_) return BoundaryHint{w_, 0.0};
        return BoundaryHint{w_.head(w_.size() - 1), w_(w_.size() - 1)};
    }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "perceptron"},
                {"lift_affine", lift_},
                {"w", std::vector<double>(w_.data(), w_.data() + w_.size())},
                {"mistakes", mistakes_}};
    }

private:
    bool lift_;
    Eigen::VectorXd w_;
    int mistakes_ = 0;

    Eigen::VectorXd view(const Eigen::VectorXd& x) const {
        if (!lift_) return x;
        Eigen::VectorXd v(x.size() + 1);
        v.head(x.size()) = x;
        v(x.size()) = 1.0;
        return v;
    }
};

// The naive consistent threshold strategy in one dimension: track the
// rightmost point labelled -1 and the leftmost labelled +1, and place the
// threshold a hair (eta) to the right of the former. Consistent but provably
// poor against a ramp adversary.
class NaiveThresholdLearner : public Learner {
public:
    explicit NaiveThresholdLearner(double eta) : eta_(eta) {}

    Label predict(const Eigen::VectorXd& x, Rng&) override {
        const double v = x(0);
        if (neg_max_ + eta_ < pos_min_) return sign_pm(v - neg_max_ - eta_);
        return sign_pm(v - 0.5 * (neg_max_ + pos_min_));
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng& rng) override {
        const int yi = label_int(y);
        const bool mistake = label_int(predict(x, rng)) != yi;
        if (yi < 0) neg_max_ = std::max(neg_max_, x(0));
        else pos_min_ = std::min(pos_min_, x(0));
        return {mistake, false, std::nullopt};
    }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "naive_threshold"},
                {"eta", eta_},
                {"neg_max", neg_max_},
                {"pos_min", pos_min_}};
    }

private:
    double eta_;
    double neg_max_ = -1.0;
    double pos_min_ = 1.0;
};

}  // namespace smoothcut
