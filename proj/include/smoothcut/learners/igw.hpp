#pragma once

#include <memory>
#include <vector>

#include "smoothcut/errors.hpp"
#include "smoothcut/learners/piecewise.hpp"

namespace smoothcut {

struct IGWConfig {
    double gamma = 1.0;  // learning rate
    double mu = 1.0;     // exploration parameter; a valid distribution needs mu >= A
    int n_actions = 2;
};

// Inverse Gap Weighting over one piecewise regressor per action: predict
// every action's loss, put mass 1/(mu + gamma * gap) on each non-greedy
// action, the rest on the greedy one, sample, and train only the chosen
// action's regressor on the observed loss.
class IGWBandit {
public:
    IGWBandit(IGWConfig cfg, int dim, PiecewiseOptions piece_opts) : cfg_(cfg) {
        for (int a = 0; a < cfg.n_actions; ++a)
            regressors_.push_back(std::make_unique<PiecewiseRegLearner>(dim, piece_opts));
    }

    // action indices are 0-based
    int decide(const Eigen::VectorXd& x, Rng& rng) {
        const int A = cfg_.n_actions;
        last_predictions_.resize(A);
        for (int a = 0; a < A; ++a) last_predictions_[a] = regressors_[a]->predict_value(x);

        int b = 0;  // argmin, lexicographic ties
        for (int a = 1; a < A; ++a)
            if (last_predictions_[a] < last_predictions_[b]) b = a;

        last_probs_.assign(A, 0.0);
        double rest = 0.0;
        for (int a = 0; a < A; ++a) {
            if (a == b) continue;
            last_probs_[a] = 1.0 / (cfg_.mu + cfg_.gamma * (last_predictions_[a] - last_predictions_[b]));
            rest += last_probs_[a];
        }
        last_probs_[b] = 1.0 - rest;
        if (last_probs_[b] < 0.0)
            throw InvalidDistribution("igw: greedy mass negative (mu < number of actions?)");

        double u = rng.uniform01(), acc = 0.0;
        int choice = A - 1;
        for (int a = 0; a < A; ++a) {
            acc += last_probs_[a];
            if (u < acc) {
                choice = a;
                break;
            }
        }
        last_choice_ = choice;
        return choice;
    }

    // feedback for the action actually played; only its regressor trains
    void reward(const Eigen::VectorXd& x, int action, double loss, Rng& rng) {
        regressors_[action]->update(x, Label(loss), rng);
    }

    const std::vector<double>& last_probs() const { return last_probs_; }
    const std::vector<double>& last_predictions() const { return last_predictions_; }
    int last_choice() const { return last_choice_; }
    const PiecewiseRegLearner& regressor(int a) const { return *regressors_[a]; }

    nlohmann::json snapshot() const {
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& r : regressors_) rs.push_back(r->snapshot());
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "igw"},
                {"gamma", cfg_.gamma},
                {"mu", cfg_.mu},
                {"regressors", rs}};
    }

private:
    IGWConfig cfg_;
    std::vector<std::unique_ptr<PiecewiseRegLearner>> regressors_;
    std::vector<double> last_predictions_;
    std::vector<double> last_probs_;
    int last_choice_ = 0;
};

}  // namespace smoothcut
