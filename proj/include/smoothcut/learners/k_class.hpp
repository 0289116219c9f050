#pragma once

#include <memory>
#include <vector>

#include "smoothcut/learners/cutplane_core.hpp"
#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

// Resolves pairwise votes into a class: the first index i <= M whose pairwise
// prediction beats every j in (i, M]. Index M always qualifies vacuously.
// `vote(i, j)` must return the prediction of the (i, j) instance, i < j,
// classes 1-based.
template <typename VoteFn>
int resolve_class_from_votes(int M, VoteFn&& vote) {
    for (int i = 1; i < M; ++i) {
        bool wins = true;
        for (int j = i + 1; j <= M; ++j) {
            if (vote(i, j) != 1) {
                wins = false;
                break;
            }
        }
        if (wins) return i;
    }
    return M;
}

// The (i, j) pair and binary label handed to exactly one pairwise instance on
// a K-class mistake. j is the smallest qualifying index, so the selection is
// deterministic.
struct PairSelection {
    int i = 0, j = 0;
    int binary_label = 0;  // sign(yhat - y)
};

template <typename VoteFn>
PairSelection select_error_pair(int y_true, int y_hat, int M, VoteFn&& vote) {
    PairSelection sel;
    if (y_true < y_hat) {
        sel.i = y_true;
        sel.j = 0;
        for (int j = y_true + 1; j <= M; ++j) {
            if (vote(y_true, j) == -1) {
                sel.j = j;
                break;
            }
        }
        sel.binary_label = 1;
    } else {
        sel.i = y_hat;
        sel.j = y_true;
        sel.binary_label = -1;
    }
    return sel;
}

// K-class linear classification by a lexicographic tournament over
// binom(K,2) binary cutting-plane instances. Each instance receives feedback
// (one cut + one center recompute) only on the round it is selected for; all
// other rounds are censored for it.
class KClassLearner : public Learner {
public:
    KClassLearner(int K, int dim, JohnOptions opts = {}) : K_(K), dim_(dim) {
        pairs_.reserve(static_cast<std::size_t>(K) * (K - 1) / 2);
        for (int i = 1; i < K; ++i)
            for (int j = i + 1; j <= K; ++j) pairs_.emplace_back(dim, opts);
    }

    int pair_index(int i, int j) const {
        // i < j, 1-based; row-major over the strict upper triangle
        return (i - 1) * (2 * K_ - i) / 2 + (j - i - 1);
    }

    Label predict(const Eigen::VectorXd& x, Rng&) override {
        votes_.assign(pairs_.size(), 0);
        for (std::size_t p = 0; p < pairs_.size(); ++p) votes_[p] = pairs_[p].predict_sign(x);
        last_prediction_ = resolve_class_from_votes(
            K_, [&](int i, int j) { return votes_[pair_index(i, j)]; });
        return last_prediction_;
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng& rng) override {
        if (votes_.size() != pairs_.size()) predict(x, rng);  // update called cold
        const int yt = label_int(y);
        ++round_;
        if (yt == last_prediction_) return {false, false, total_log_volume()};
        PairSelection sel = select_error_pair(yt, last_prediction_, K_,
                                              [&](int i, int j) { return votes_[pair_index(i, j)]; });
        pairs_[pair_index(sel.i, sel.j)].error_update(x, sel.binary_label, round_);
        ++binary_error_updates_;
        return {true, true, total_log_volume()};
    }

    // joint surrogate: sum of the pairwise John log volumes
    double total_log_volume() const {
        double s = 0.0;
        for (const auto& p : pairs_) s += p.log_volume();
        return s;
    }

    std::optional<double> log_volume_surrogate() const override { return total_log_volume(); }

    int binary_error_updates() const { return binary_error_updates_; }
    int binary_mistakes_total() const {
        int s = 0;
        for (const auto& p : pairs_) s += p.mistake_count();
        return s;
    }
    const CutPlaneCore& pair(int i, int j) const { return pairs_[pair_index(i, j)]; }

    nlohmann::json snapshot() const override {
        nlohmann::json inst = nlohmann::json::array();
        for (const auto& p : pairs_) inst.push_back(p.snapshot());
        return {{"format", "smoothcut-learner-v1"}, {"kind", "k_class"}, {"K", K_}, {"pairs", inst}};
    }

private:
    int K_, dim_;
    std::vector<CutPlaneCore> pairs_;
    std::vector<int> votes_;
    int last_prediction_ = 1;
    int binary_error_updates_ = 0;
    std::int64_t round_ = 0;
};

// Supervised variant used inside piecewise regression: predicts only among
// the first M classes, and every pairwise instance starts dormant, voting +1
// until its first error update re-initializes it at w = e_1 over a fresh box.
class KClassSupervised {
public:
    KClassSupervised(int K, int dim, JohnOptions opts = {}) : K_(K), dim_(dim), opts_(opts) {
        pairs_.resize(static_cast<std::size_t>(K) * (K - 1) / 2);
    }

    int pair_index(int i, int j) const { return (i - 1) * (2 * K_ - i) / 2 + (j - i - 1); }

    int vote(int i, int j, const Eigen::VectorXd& x) const {
        const auto& p = pairs_[pair_index(i, j)];
        return p ? p->predict_sign(x) : 1;  // dormant pairs vote +1
    }

    int classify(const Eigen::VectorXd& x, int M) const {
        return resolve_class_from_votes(M, [&](int i, int j) { return vote(i, j, x); });
    }

    // y_true <= M guaranteed by the caller
    void error_update(const Eigen::VectorXd& x, int y_true, int M) {
        ++round_;
        const int y_hat = classify(x, M);
        if (y_hat == y_true) return;
        PairSelection sel =
            select_error_pair(y_true, y_hat, M, [&](int i, int j) { return vote(i, j, x); });
        auto& p = pairs_[pair_index(sel.i, sel.j)];
        if (!p) {
            // first feedback for a dormant pair: wake it at w = e_1, fresh box
            p = std::make_unique<CutPlaneCore>(dim_, opts_);
        } else {
            p->error_update(x, sel.binary_label, round_);
        }
        ++binary_error_updates_;
    }

    double total_log_volume() const {
        // dormant pairs count at the fresh-box volume so the surrogate never jumps
        double s = static_cast<double>(pairs_.size()) * log_unit_ball_volume(dim_);
        for (const auto& p : pairs_)
            if (p) s += p->log_volume() - log_unit_ball_volume(dim_);
        return s;
    }

    int binary_error_updates() const { return binary_error_updates_; }

    nlohmann::json snapshot() const {
        nlohmann::json inst = nlohmann::json::array();
        for (const auto& p : pairs_) inst.push_back(p ? p->snapshot() : nlohmann::json("dormant"));
        return {{"K", K_}, {"pairs", inst}};
    }

private:
    int K_, dim_;
    JohnOptions opts_;
    std::vector<std::unique_ptr<CutPlaneCore>> pairs_;
    int binary_error_updates_ = 0;
    std::int64_t round_ = 0;
};

}  // namespace smoothcut
