#pragma once

#include <algorithm>
#include <vector>

#include "smoothcut/erm.hpp"
#include "smoothcut/learners/k_class.hpp"
#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

struct PiecewiseOptions {
    int K = 2;
    int ell = 0;           // determination number; 0 means "use dim" (linear pieces)
    double fit_tol = 1e-8; // relative exact-match tolerance
    JohnOptions john;
};

// Piecewise linear regression by sequential cluster discovery: predict with
// the piece chosen by a supervised K-class classifier over the pieces known
// so far; when no known piece explains a label exactly, feed the uncertain
// set through the exact ERM oracle and promote every cluster that reaches
// ell+1 points to a new known piece.
class PiecewiseRegLearner : public Learner {
public:
    PiecewiseRegLearner(int dim, PiecewiseOptions opts)
        : dim_(dim),
          opts_(opts),
          ell_(opts.ell > 0 ? opts.ell : dim),
          classifier_(opts.K, dim, opts.john) {}

    double predict_value(const Eigen::VectorXd& x) const {
        if (n_known_ == 0) return 0.0;
        const int k = classifier_.classify(x, n_known_);
        return g_hat_[static_cast<std::size_t>(k - 1)].dot(x);
    }

    Label predict(const Eigen::VectorXd& x, Rng&) override { return predict_value(x); }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng&) override {
        const double yv = label_real(y);
        const double yhat = predict_value(x);
        const bool mistake = !matches(yhat, yv);

        // first known piece that reproduces the label exactly
        int k_star = 0;
        for (int k = 1; k <= n_known_; ++k) {
            if (matches(g_hat_[static_cast<std::size_t>(k - 1)].dot(x), yv)) {
                k_star = k;
                break;
            }
        }

        if (k_star > 0) {
            const int k_hat = classifier_.classify(x, n_known_);
            if (k_hat != k_star) classifier_.error_update(x, k_star, n_known_);
        } else {
            if (mistake) ++undiscovered_mistakes_;
            run_erm(x, yv);
        }
        return {mistake, false, classifier_.total_log_volume()};
    }

    std::optional<double> log_volume_surrogate() const override {
        return classifier_.total_log_volume();
    }

    int n_known() const { return n_known_; }
    const std::vector<Eigen::VectorXd>& pieces() const { return g_hat_; }
    const std::vector<std::pair<Eigen::VectorXd, double>>& uncertain() const { return uncertain_; }
    int erm_calls() const { return erm_calls_; }
    int erm_max_input() const { return erm_max_input_; }
    int undiscovered_mistakes() const { return undiscovered_mistakes_; }
    const KClassSupervised& classifier() const { return classifier_; }

    nlohmann::json snapshot() const override {
        nlohmann::json gs = nlohmann::json::array();
        for (const auto& g : g_hat_)
            gs.push_back(std::vector<double>(g.data(), g.data() + g.size()));
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "piecewise"},
                {"K", opts_.K},
                {"ell", ell_},
                {"n_known", n_known_},
                {"g_hat", gs},
                {"uncertain_size", uncertain_.size()},
                {"classifier", classifier_.snapshot()}};
    }

private:
    int dim_;
    PiecewiseOptions opts_;
    int ell_;
    KClassSupervised classifier_;
    int n_known_ = 0;
    std::vector<Eigen::VectorXd> g_hat_;
    std::vector<std::pair<Eigen::VectorXd, double>> uncertain_;
    int erm_calls_ = 0;
    int erm_max_input_ = 0;
    int undiscovered_mistakes_ = 0;

    bool matches(double pred, double y) const {
        return std::abs(pred - y) <= opts_.fit_tol * (1.0 + std::abs(y));
    }

    void run_erm(const Eigen::VectorXd& x, double y) {
        ErmProblem prob;
        prob.K = opts_.K;
        prob.ell = ell_;
        prob.fit_tol = opts_.fit_tol;
        for (const auto& [ux, uy] : uncertain_) {
            prob.xs.push_back(ux);
            prob.ys.push_back(uy);
        }
        prob.xs.push_back(x);
        prob.ys.push_back(y);

        ++erm_calls_;
        erm_max_input_ = std::max(erm_max_input_, static_cast<int>(prob.size()));
        ErmSolution sol = erm_partition(prob);

        std::vector<Eigen::VectorXd> promoted;
        for (std::size_t c = 0; c < sol.partition.size(); ++c) {
            if (static_cast<int>(sol.partition[c].size()) >= ell_ + 1) {
                g_hat_.push_back(sol.functions[c]);
                promoted.push_back(sol.functions[c]);
                ++n_known_;
            }
        }
        // rebuild the uncertain set without the points any promoted piece explains
        std::vector<std::pair<Eigen::VectorXd, double>> next;
        for (std::size_t i = 0; i < prob.size(); ++i) {
            bool explained = false;
            for (const auto& g : promoted)
                if (matches(g.dot(prob.xs[i]), prob.ys[i])) explained = true;
            if (!explained) next.emplace_back(prob.xs[i], prob.ys[i]);
        }
        uncertain_ = std::move(next);
    }
};

}  // namespace smoothcut
