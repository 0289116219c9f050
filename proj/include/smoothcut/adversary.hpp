#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <json.hpp>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "smoothcut/learners/learner.hpp"
#include "smoothcut/rng.hpp"
#include "smoothcut/sampling.hpp"

namespace smoothcut {

// Picks the adversarial center x_hat for the noise-based samplers.
enum class CenterPolicy {
    Origin,          // x_hat = 0
    Boundary,        // aim at the learner's current decision boundary
    OracleBoundary,  // aim at the true classifier's boundary
    Fixed,           // a constant point
};

inline CenterPolicy center_policy_from_string(const std::string& s) {
    if (s == "origin") return CenterPolicy::Origin;
    if (s == "boundary") return CenterPolicy::Boundary;
    if (s == "oracle_boundary") return CenterPolicy::OracleBoundary;
    if (s == "fixed") return CenterPolicy::Fixed;
    throw std::invalid_argument("unknown center policy: " + s);
}

// Closest point of the hyperplane {<w, x> + b = 0} to the origin, with a
// random tangential offset, clipped to max_norm by shrinking toward the
// origin (the noise is never shrunk).
inline Eigen::VectorXd boundary_center(const BoundaryHint& hint, double max_norm, Rng& rng) {
    const int d = static_cast<int>(hint.normal.size());
    double n2 = hint.normal.squaredNorm();
    Eigen::VectorXd p = (n2 > 0) ? (-hint.offset / n2 * hint.normal).eval()
                                 : Eigen::VectorXd::Zero(d);
    if (d > 1 && n2 > 0) {
        Eigen::VectorXd t = sample_unit_sphere(d, rng);
        t -= (t.dot(hint.normal) / n2) * hint.normal;  // tangential component
        double tn = t.norm();
        if (tn > 1e-12) p += rng.uniform01() * max_norm * (t / tn);
    }
    double pn = p.norm();
    if (pn > max_norm) p *= max_norm / pn;
    return p;
}

// Context sampler with optional self-labelling (the 1-d lower-bound
// construction labels its own margin points). next() is const given the
// sampler state; state advances only through observe().
class ContextSampler {
public:
    virtual ~ContextSampler() = default;
    virtual Eigen::VectorXd next(const std::optional<BoundaryHint>& hint, Rng& rng) const = 0;
    virtual void observe(const Eigen::VectorXd&, const Label&) {}
    virtual std::optional<int> self_label(const Eigen::VectorXd&, Rng&) { return std::nullopt; }

    virtual std::string kind() const = 0;
    // declared smoothness; nullopt when the kind is not sigma-smooth for any sigma
    virtual std::optional<double> sigma() const = 0;
    virtual std::optional<double> sigma_dir() const { return std::nullopt; }
    virtual nlohmann::json params() const { return nlohmann::json::object(); }
};

class UniformAdversary final : public ContextSampler {
public:
    explicit UniformAdversary(int dim) : dim_(dim) {}
    Eigen::VectorXd next(const std::optional<BoundaryHint>&, Rng& rng) const override {
        return sample_uniform_ball(dim_, rng);
    }
    std::string kind() const override { return "uniform"; }
    std::optional<double> sigma() const override { return 1.0; }

private:
    int dim_;
};

// Worst-case center plus uniform noise on an epsilon-ball; sigma = epsilon^d.
class EpsBallAdversary final : public ContextSampler {
public:
    EpsBallAdversary(int dim, double eps, CenterPolicy policy,
                     Eigen::VectorXd fixed = {}, Eigen::VectorXd oracle_normal = {},
                     double oracle_offset = 0.0)
        : dim_(dim), eps_(eps), policy_(policy), fixed_(std::move(fixed)),
          oracle_hint_{std::move(oracle_normal), oracle_offset} {}

    Eigen::VectorXd next(const std::optional<BoundaryHint>& hint, Rng& rng) const override {
        Eigen::VectorXd c = center(hint, rng);
        return c + eps_ * sample_uniform_ball(dim_, rng);
    }
    std::string kind() const override { return "eps_ball"; }
    std::optional<double> sigma() const override { return std::pow(eps_, dim_); }
    nlohmann::json params() const override { return {{"epsilon", eps_}}; }

private:
    int dim_;
    double eps_;
    CenterPolicy policy_;
    Eigen::VectorXd fixed_;
    BoundaryHint oracle_hint_;

    Eigen::VectorXd center(const std::optional<BoundaryHint>& hint, Rng& rng) const {
        const double max_norm = 1.0 - eps_;
        switch (policy_) {
            case CenterPolicy::Boundary:
                if (hint) return boundary_center(*hint, max_norm, rng);
                return Eigen::VectorXd::Zero(dim_);
            case CenterPolicy::OracleBoundary:
                return boundary_center(oracle_hint_, max_norm, rng);
            case CenterPolicy::Fixed: {
                Eigen::VectorXd c = fixed_;
                double n = c.norm();
                if (n > max_norm) c *= max_norm / n;
                return c;
            }
            case CenterPolicy::Origin:
            default:
                return Eigen::VectorXd::Zero(dim_);
        }
    }
};

// Center plus uniform noise along one direction drawn once; directionally
// smooth with sigma_dir = r but not sigma-smooth for any sigma when d > 1.
class DirectionalLineAdversary final : public ContextSampler {
public:
    DirectionalLineAdversary(int dim, double r, CenterPolicy policy, Rng& init_rng,
                             Eigen::VectorXd oracle_normal = {}, double oracle_offset = 0.0)
        : dim_(dim), r_(r), policy_(policy), direction_(sample_unit_sphere(dim, init_rng)),
          oracle_hint_{std::move(oracle_normal), oracle_offset} {}

    Eigen::VectorXd next(const std::optional<BoundaryHint>& hint, Rng& rng) const override {
        const double max_norm = std::min(0.5, 1.0 - 0.5 * r_);
        Eigen::VectorXd c;
        switch (policy_) {
            case CenterPolicy::Boundary:
                c = hint ? boundary_center(*hint, max_norm, rng) : Eigen::VectorXd::Zero(dim_);
                break;
            case CenterPolicy::OracleBoundary:
                c = boundary_center(oracle_hint_, max_norm, rng);
                break;
            default:
                c = Eigen::VectorXd::Zero(dim_);
        }
        return c + rng.uniform(-0.5 * r_, 0.5 * r_) * direction_;
    }
    std::string kind() const override { return "directional_line"; }
    std::optional<double> sigma() const override { return std::nullopt; }
    std::optional<double> sigma_dir() const override { return r_; }
    const Eigen::VectorXd& direction() const { return direction_; }
    nlohmann::json params() const override { return {{"r", r_}}; }

private:
    int dim_;
    double r_;
    CenterPolicy policy_;
    Eigen::VectorXd direction_;
    BoundaryHint oracle_hint_;
};

// The 1-d logarithmic lower-bound construction: track the disagreement
// interval D_t of threshold classifiers, sample near its boundary with
// probability min(mu(annulus)/sigma, 1) (else emit 0), and label margin
// points by independent Rademacher draws. Realizability is maintained by the
// interval bookkeeping; once the interval is numerically tiny the adversary
// commits to its midpoint as the ground truth.
class LowerBound1DAdversary final : public ContextSampler {
public:
    LowerBound1DAdversary(int dim, double sigma, double commit_width = 1e-7)
        : dim_(dim), sigma_(sigma), commit_width_(commit_width) {}

    static constexpr double kEps = 1.0 - 1.0 / M_E;  // annulus thickness parameter

    Eigen::VectorXd next(const std::optional<BoundaryHint>&, Rng& rng) const override {
        const double R = pos_min_ - neg_max_;
        const double mid = 0.5 * (neg_max_ + pos_min_);
        const double annulus_mass = kEps * R / 2.0;  // mu uniform on [-1, 1]
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
        if (rng.uniform01() < std::min(annulus_mass / sigma_, 1.0)) {
            double a = rng.uniform((1.0 - kEps) * R / 2.0, R / 2.0);
            x(0) = mid + (rng.rademacher() > 0 ? a : -a);
        }
        return x;
    }

    std::optional<int> self_label(const Eigen::VectorXd& x, Rng& label_rng) override {
        const double v = x(0);
        if (committed_) return v < commit_point_ ? -1 : 1;
        if (v <= neg_max_) return -1;
        if (v >= pos_min_) return 1;
        return label_rng.rademacher();  // margin point: adversarial coin flip
    }

    void observe(const Eigen::VectorXd& x, const Label& y) override {
        const double v = x(0);
        const int yi = label_int(y);
        if (yi < 0) neg_max_ = std::max(neg_max_, v);
        else pos_min_ = std::min(pos_min_, v);
        if (!committed_ && pos_min_ - neg_max_ < commit_width_) {
            committed_ = true;
            commit_point_ = 0.5 * (neg_max_ + pos_min_);
        }
    }

    std::string kind() const override { return "lower_bound_1d"; }
    std::optional<double> sigma() const override { return sigma_; }
    double interval_width() const { return pos_min_ - neg_max_; }
    nlohmann::json params() const override {
        return {{"epsilon", kEps}, {"commit_width", commit_width_}};
    }

private:
    int dim_;
    double sigma_;
    double commit_width_;
    double neg_max_ = -1.0;
    double pos_min_ = 1.0;
    bool committed_ = false;
    double commit_point_ = 0.0;
};

// The ramp adversary that punishes naive consistent play: x_t sweeps
// [-1, -1 + 2 sigma t] in steps of width 2 sigma for t <= floor(1/sigma),
// then plays uniform. Self-labels with the threshold at +1 (all -1).
class NaivePunisherAdversary final : public ContextSampler {
public:
    explicit NaivePunisherAdversary(double sigma) : sigma_(sigma) {}

    Eigen::VectorXd next(const std::optional<BoundaryHint>&, Rng& rng) const override {
        Eigen::VectorXd x(1);
        const double t = static_cast<double>(t_ + 1);
        if (t <= std::floor(1.0 / sigma_))
            x(0) = -1.0 + 2.0 * sigma_ * (t - 1.0) + 2.0 * sigma_ * rng.uniform01();
        else
            x(0) = rng.uniform(-1.0, 1.0);
        return x;
    }

    std::optional<int> self_label(const Eigen::VectorXd& x, Rng&) override {
        return sign_pm(x(0) - 1.0);
    }

    void observe(const Eigen::VectorXd&, const Label&) override { ++t_; }

    std::string kind() const override { return "naive_punisher"; }
    std::optional<double> sigma() const override { return sigma_; }

private:
    double sigma_;
    std::int64_t t_ = 0;
};

// The Omega(d) lower-bound branch: the first d contexts are uniform ball
// draws labelled by independent Rademacher coins (realizable for d generic
// points under linear thresholds); afterwards a consistent parameter is
// pinned and labels become deterministic.
class RademacherGPAdversary final : public ContextSampler {
public:
    explicit RademacherGPAdversary(int dim) : dim_(dim) {}

    Eigen::VectorXd next(const std::optional<BoundaryHint>&, Rng& rng) const override {
        return sample_uniform_ball(dim_, rng);
    }

    std::optional<int> self_label(const Eigen::VectorXd& x, Rng& label_rng) override {
        if (static_cast<int>(history_.size()) < dim_) return label_rng.rademacher();
        if (!w_) pin_parameter();
        return sign_pm(w_->dot(x));
    }

    void observe(const Eigen::VectorXd& x, const Label& y) override {
        if (static_cast<int>(history_.size()) < dim_) history_.emplace_back(x, label_int(y));
    }

    std::string kind() const override { return "rademacher_gp"; }
    std::optional<double> sigma() const override { return 1.0; }

private:
    int dim_;
    std::vector<std::pair<Eigen::VectorXd, int>> history_;
    std::optional<Eigen::VectorXd> w_;

    void pin_parameter() {
        // solve for a max-margin-ish w consistent with the coin-flip labels:
        // y_i <x_i, w> = 1 for the d recorded points (generic => solvable)
        Eigen::MatrixXd A(history_.size(), dim_);
        Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(history_.size()));
        for (std::size_t i = 0; i < history_.size(); ++i)
            A.row(static_cast<Eigen::Index>(i)) =
                static_cast<double>(history_[i].second) * history_[i].first.transpose();
        Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(b);
        w_ = w;
    }
};

// ---------------------------------------------------------------------------

// Ground-truth labellers. Parameters are drawn once at construction (or
// supplied); labels are deterministic given the parameters.
class LabelOracle {
public:
    virtual ~LabelOracle() = default;
    virtual Label label(const Eigen::VectorXd& x) const = 0;
    virtual std::string kind() const = 0;
    virtual std::optional<BoundaryHint> boundary() const { return std::nullopt; }
    virtual nlohmann::json params() const { return nlohmann::json::object(); }
};

class LinearOracle final : public LabelOracle {
public:
    explicit LinearOracle(Eigen::VectorXd w) : w_(std::move(w)) {}
    static LinearOracle random(int dim, Rng& rng) { return LinearOracle(sample_unit_sphere(dim, rng)); }

    Label label(const Eigen::VectorXd& x) const override { return sign_pm(w_.dot(x)); }
    std::string kind() const override { return "linear"; }
    const Eigen::VectorXd& w() const { return w_; }
    std::optional<BoundaryHint> boundary() const override { return BoundaryHint{w_, 0.0}; }
    nlohmann::json params() const override {
        return {{"w", std::vector<double>(w_.data(), w_.data() + w_.size())}};
    }

private:
    Eigen::VectorXd w_;
};

// Affine oracle normalized so ||w||^2 + b^2 = 1 with ||w|| >= 1/2; this loses
// no generality for sign patterns over the ball.
class AffineOracle final : public LabelOracle {
public:
    AffineOracle(Eigen::VectorXd w, double b) : w_(std::move(w)), b_(b) {
        double s = std::sqrt(w_.squaredNorm() + b_ * b_);
        w_ /= s;
        b_ /= s;
        if (w_.norm() < 0.5) throw std::invalid_argument("affine oracle: ||w|| must be >= 1/2");
    }
    // keeps the boundary inside the ball: ||w|| in [0.75, 0.95]
    static AffineOracle random(int dim, Rng& rng) {
        double wn = rng.uniform(0.75, 0.95);
        Eigen::VectorXd w = wn * sample_unit_sphere(dim, rng);
        double b = std::sqrt(1.0 - wn * wn) * rng.rademacher();
        return AffineOracle(std::move(w), b);
    }

    Label label(const Eigen::VectorXd& x) const override { return sign_pm(w_.dot(x) + b_); }
    std::string kind() const override { return "affine"; }
    const Eigen::VectorXd& w() const { return w_; }
    double b() const { return b_; }
    std::optional<BoundaryHint> boundary() const override { return BoundaryHint{w_, b_}; }
    nlohmann::json params() const override {
        return {{"w", std::vector<double>(w_.data(), w_.data() + w_.size())}, {"b", b_}};
    }

private:
    Eigen::VectorXd w_;
    double b_;
};

// sign(<w, phi(x)>) for a feature map phi supplied by the caller.
class FeatureLinearOracle final : public LabelOracle {
public:
    FeatureLinearOracle(Eigen::VectorXd w, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> phi)
        : w_(std::move(w)), phi_(std::move(phi)) {}

    Label label(const Eigen::VectorXd& x) const override { return sign_pm(w_.dot(phi_(x))); }
    std::string kind() const override { return "feature_linear"; }
    nlohmann::json params() const override {
        return {{"w", std::vector<double>(w_.data(), w_.data() + w_.size())}};
    }

private:
    Eigen::VectorXd w_;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> phi_;
};

// argmax_i <w^i, x> with lexicographic tie-breaking.
class KClassOracle final : public LabelOracle {
public:
    explicit KClassOracle(std::vector<Eigen::VectorXd> ws) : ws_(std::move(ws)) {}
    static KClassOracle random(int K, int dim, Rng& rng) {
        std::vector<Eigen::VectorXd> ws;
        for (int i = 0; i < K; ++i) ws.push_back(sample_unit_sphere(dim, rng));
        return KClassOracle(std::move(ws));
    }

    int classify(const Eigen::VectorXd& x) const {
        int best = 0;
        double bv = ws_[0].dot(x);
        for (std::size_t i = 1; i < ws_.size(); ++i) {
            double v = ws_[i].dot(x);
            if (v > bv) {  // strict: ties stay with the smaller index
                bv = v;
                best = static_cast<int>(i);
            }
        }
        return best + 1;
    }

    Label label(const Eigen::VectorXd& x) const override { return classify(x); }
    std::string kind() const override { return "k_class"; }
    const std::vector<Eigen::VectorXd>& ws() const { return ws_; }
    nlohmann::json params() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& w : ws_) arr.push_back(std::vector<double>(w.data(), w.data() + w.size()));
        return {{"ws", arr}};
    }

private:
    std::vector<Eigen::VectorXd> ws_;
};

// y = <a_{f*(x)}, x> with f* a K-class linear partition.
class PiecewiseOracle final : public LabelOracle {
public:
    PiecewiseOracle(KClassOracle partition, std::vector<Eigen::VectorXd> coeffs)
        : partition_(std::move(partition)), coeffs_(std::move(coeffs)) {}
    static PiecewiseOracle random(int K, int dim, Rng& rng, double coeff_scale = 1.0) {
        std::vector<Eigen::VectorXd> as;
        for (int i = 0; i < K; ++i) as.push_back(coeff_scale * sample_unit_sphere(dim, rng));
        return PiecewiseOracle(KClassOracle::random(K, dim, rng), std::move(as));
    }

    Label label(const Eigen::VectorXd& x) const override {
        return coeffs_[static_cast<std::size_t>(partition_.classify(x) - 1)].dot(x);
    }
    int piece(const Eigen::VectorXd& x) const { return partition_.classify(x); }
    std::string kind() const override { return "piecewise"; }
    const std::vector<Eigen::VectorXd>& coeffs() const { return coeffs_; }
    const KClassOracle& partition() const { return partition_; }
    nlohmann::json params() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& a : coeffs_) arr.push_back(std::vector<double>(a.data(), a.data() + a.size()));
        return {{"partition", partition_.params()}, {"coeffs", arr}};
    }

private:
    KClassOracle partition_;
    std::vector<Eigen::VectorXd> coeffs_;
};

// ---------------------------------------------------------------------------

// Rounds whose binary labels get negated. N_err = 1 + |flip_times|.
struct CorruptionSchedule {
    std::set<std::int64_t> flip_times;

    Label corrupt(std::int64_t t, const Label& y) const {
        if (flip_times.count(t) && std::holds_alternative<int>(y)) return -std::get<int>(y);
        return y;
    }
    int n_err() const { return 1 + static_cast<int>(flip_times.size()); }
};

// ---------------------------------------------------------------------------

struct SmoothnessAudit {
    double max_ratio = 0.0;      // histogram estimate of sup dp/dmu
    double std_error = 0.0;      // rough binomial standard error at the max cell
    std::optional<double> declared_bound;  // 1/sigma
};

// Histogram estimate of the density ratio against the uniform ball measure on
// a frozen adversary state. Statistical report, not a proof.
inline SmoothnessAudit smoothness_audit(const ContextSampler& adv,
                                        const std::optional<BoundaryHint>& hint, int dim,
                                        int n_draws, int cells_per_axis, Rng& rng) {
    std::vector<double> p_count, mu_count;
    const int total_cells = static_cast<int>(std::pow(cells_per_axis, dim));
    p_count.assign(total_cells, 0.0);
    mu_count.assign(total_cells, 0.0);
    auto cell_of = [&](const Eigen::VectorXd& x) {
        int idx = 0;
        for (int j = 0; j < dim; ++j) {
            int c = static_cast<int>((x(j) + 1.0) / 2.0 * cells_per_axis);
            c = std::min(std::max(c, 0), cells_per_axis - 1);
            idx = idx * cells_per_axis + c;
        }
        return idx;
    };
    for (int i = 0; i < n_draws; ++i) {
        p_count[cell_of(adv.next(hint, rng))] += 1.0;
        mu_count[cell_of(sample_uniform_ball(dim, rng))] += 1.0;
    }
    SmoothnessAudit out;
    if (auto s = adv.sigma()) out.declared_bound = 1.0 / *s;
    for (int c = 0; c < total_cells; ++c) {
        if (mu_count[c] < 25.0) continue;  // cells the base measure barely sees are noise
        double ratio = p_count[c] / mu_count[c];
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.std_error = ratio * std::sqrt(1.0 / std::max(p_count[c], 1.0) + 1.0 / mu_count[c]);
        }
    }
    return out;
}

}  // namespace smoothcut
