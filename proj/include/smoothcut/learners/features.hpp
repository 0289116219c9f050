#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "smoothcut/errors.hpp"
#include "smoothcut/learners/cutplane_core.hpp"
#include "smoothcut/learners/learner.hpp"

namespace smoothcut {

// Coordinatewise feature map: phi(x) = (phi_1(x_1), ..., phi_d(x_d)) with
// every phi_i mapping [-1,1] -> [-1,1] and a declared derivative lower bound
// alpha > 0.
struct CoordinateFeatureSpec {
    std::string name;
    std::function<double(int coord, double u)> map;
    double alpha = 1.0;

    static CoordinateFeatureSpec identity() {
        return {"identity", [](int, double u) { return u; }, 1.0};
    }
    // (1-beta) u + beta u^3: monotone, range-preserving, derivative >= 1-beta
    static CoordinateFeatureSpec cubic_blend(double beta) {
        return {"cubic_blend", [beta](int, double u) { return (1.0 - beta) * u + beta * u * u * u; },
                1.0 - beta};
    }
    // tanh(k u)/tanh(k): a scaled sigmoid; derivative bound k sech^2(k)/tanh(k)
    static CoordinateFeatureSpec tanh_scaled(double k) {
        double sech = 1.0 / std::cosh(k);
        return {"tanh_scaled", [k](int, double u) { return std::tanh(k * u) / std::tanh(k); },
                k * sech * sech / std::tanh(k)};
    }
};

// Probes the declared contract on a grid: finite-difference derivative >= alpha
// and range inside [-1,1]. Throws SpecViolation on failure.
inline void validate_coordinate_feature(const CoordinateFeatureSpec& spec, int dim,
                                        int grid = 1000) {
    const double h = 2.0 / grid;
    for (int c = 0; c < dim; ++c) {
        for (int g = 0; g < grid; ++g) {
            double u0 = -1.0 + g * h, u1 = u0 + h;
            double v0 = spec.map(c, u0), v1 = spec.map(c, u1);
            if (v0 < -1.0 - 1e-9 || v0 > 1.0 + 1e-9)
                throw SpecViolation("coordinate feature leaves [-1,1] at u=" + std::to_string(u0));
            double slope = (v1 - v0) / h;
            if (slope < spec.alpha - 1e-6)
                throw SpecViolation("coordinate feature derivative " + std::to_string(slope) +
                                    " below declared alpha=" + std::to_string(spec.alpha));
        }
    }
}

inline Eigen::VectorXd coordinate_feature_wrap(const CoordinateFeatureSpec& spec,
                                               const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (int i = 0; i < x.size(); ++i) out(i) = spec.map(i, x(i));
    return out;
}

// Linear classification after a coordinatewise feature map: the base learner
// runs on phi(x). The map is validated once at construction.
class JohnFeatureLearner : public Learner {
public:
    JohnFeatureLearner(int dim, CoordinateFeatureSpec spec, JohnOptions opts = {})
        : spec_(std::move(spec)), core_(dim, opts) {
        validate_coordinate_feature(spec_, dim);
    }

    Label predict(const Eigen::VectorXd& x, Rng&) override {
        return core_.predict_sign(coordinate_feature_wrap(spec_, x));
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng&) override {
        return core_.observe(coordinate_feature_wrap(spec_, x), label_int(y), round_++);
    }

    std::optional<double> log_volume_surrogate() const override { return core_.log_volume(); }
    const CutPlaneCore& core() const { return core_; }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "john_feature"},
                {"feature", spec_.name},
                {"alpha", spec_.alpha},
                {"state", core_.snapshot()}};
    }

private:
    CoordinateFeatureSpec spec_;
    CutPlaneCore core_;
    std::int64_t round_ = 0;
};

// Polynomial feature map B_1^d -> B_1^m with declared degree, Lipschitz
// constant and determinant lower bound. Degree and L are validated by
// probing; alpha is trusted as declared.
struct PolynomialFeatureSpec {
    std::string name;
    int input_dim = 1;
    int feature_dim = 1;
    int degree = 1;       // ell
    double lipschitz = 1.0;
    double alpha = 1.0;   // det(E[Dphi Dphi^T]) >= alpha^2, as declared
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;

    // all monomials of total degree 1..ell, scaled so the image stays in the ball
    static PolynomialFeatureSpec monomials(int d, int ell, double alpha_declared = 1e-3);
};

// All monomials of total degree 1..ell, exponent tuples enumerated in a fixed
// order per degree.
inline Eigen::VectorXd monomial_expand(const Eigen::VectorXd& x, int ell) {
    std::vector<double> feats;
    for (int total = 1; total <= ell; ++total) {
        std::function<void(int, int, double)> rec = [&](int pos, int remaining, double prod) {
            if (pos == static_cast<int>(x.size()) - 1) {
                double p = prod;
                for (int e = 0; e < remaining; ++e) p *= x(pos);
                feats.push_back(p);
                return;
            }
            double p = prod;
            for (int e = 0; e <= remaining; ++e) {
                rec(pos + 1, remaining - e, p);
                p *= x(pos);
            }
        };
        rec(0, total, 1.0);
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(feats.size()));
    for (std::size_t i = 0; i < feats.size(); ++i) out(static_cast<Eigen::Index>(i)) = feats[i];
    return out;
}

inline PolynomialFeatureSpec PolynomialFeatureSpec::monomials(int d, int ell, double alpha_declared) {
    PolynomialFeatureSpec s;
    s.name = "monomials_deg" + std::to_string(ell);
    s.input_dim = d;
    s.degree = ell;
    Eigen::VectorXd probe = Eigen::VectorXd::Constant(d, 0.1);
    const int m = static_cast<int>(monomial_expand(probe, ell).size());
    s.feature_dim = m;
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));  // |each monomial| <= 1 on the ball
    s.map = [ell, scale](const Eigen::VectorXd& x) {
        return (scale * monomial_expand(x, ell)).eval();
    };
    s.lipschitz = scale * std::sqrt(static_cast<double>(m)) * ell;  // |grad of a monomial| <= ell on the ball
    s.alpha = alpha_declared;
    return s;
}

// Probes: image in the ball, Lipschitz constant on random pairs, and the
// (ell+1)-th finite difference along random lines vanishing (degree check).
inline void validate_polynomial_feature(const PolynomialFeatureSpec& spec, Rng& rng,
                                        int n_probes = 200) {
    for (int i = 0; i < n_probes; ++i) {
        Eigen::VectorXd a(spec.input_dim), b(spec.input_dim);
        for (int j = 0; j < spec.input_dim; ++j) {
            a(j) = rng.uniform(-1.0, 1.0) / std::sqrt(static_cast<double>(spec.input_dim));
            b(j) = rng.uniform(-1.0, 1.0) / std::sqrt(static_cast<double>(spec.input_dim));
        }
        Eigen::VectorXd fa = spec.map(a), fb = spec.map(b);
        if (fa.norm() > 1.0 + 1e-9)
            throw SpecViolation("polynomial feature image leaves the unit ball");
        if ((fa - fb).norm() > spec.lipschitz * (a - b).norm() + 1e-9)
            throw SpecViolation("polynomial feature violates the declared Lipschitz constant");
        // finite differences of order degree+1 along the segment [a, b]
        const int k = spec.degree + 1;
        Eigen::VectorXd diff = Eigen::VectorXd::Zero(spec.feature_dim);
        double binom = 1.0, scale_max = 0.0;
        for (int j = 0; j <= k; ++j) {
            Eigen::VectorXd pt = a + (static_cast<double>(j) / k) * (b - a);
            Eigen::VectorXd v = spec.map(pt);
            diff += ((k - j) % 2 == 0 ? binom : -binom) * v;
            scale_max = std::max(scale_max, binom * v.norm());
            binom = binom * (k - j) / (j + 1);
        }
        if (diff.norm() > 1e-7 * (1.0 + scale_max))
            throw SpecViolation("feature map is not polynomial of the declared degree");
    }
}

struct MetaPointBuffers {
    std::vector<Eigen::VectorXd> bucket_pos;
    std::vector<Eigen::VectorXd> bucket_neg;
    int capacity = 1;  // p

    std::vector<Eigen::VectorXd>& bucket(int y) { return y > 0 ? bucket_pos : bucket_neg; }
};

// default p = ceil(C m ell log(L ell T / delta))
inline int default_meta_capacity(double C, int m, int ell, double L, double T, double delta) {
    return static_cast<int>(std::ceil(C * m * ell * std::log(L * ell * T / delta)));
}

// Binary classification with polynomial features. Cuts are applied every
// round in feature space; the John center is refreshed only when one mistake
// bucket fills, at which point the bucket average (the meta-point) is formed
// and both buckets reset.
class MetaPointLearner : public Learner {
public:
    MetaPointLearner(PolynomialFeatureSpec spec, int p, Rng& validation_rng, JohnOptions opts = {})
        : spec_(std::move(spec)), core_(spec_.feature_dim, opts) {
        buffers_.capacity = p;
        validate_polynomial_feature(spec_, validation_rng);
    }

    Label predict(const Eigen::VectorXd& x, Rng&) override {
        return core_.predict_sign(spec_.map(x));
    }

    UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng&) override {
        const int yi = label_int(y);
        Eigen::VectorXd feat = spec_.map(x);
        const bool mistake = core_.predict_sign(feat) != yi;
        core_.add_cut(feat, yi, round_++);
        bool recomputed = false;
        if (mistake) {
            auto& bucket = buffers_.bucket(yi);
            bucket.push_back(feat);
            if (static_cast<int>(bucket.size()) == buffers_.capacity) {
                Eigen::VectorXd meta = Eigen::VectorXd::Zero(spec_.feature_dim);
                for (const auto& v : bucket) meta += v;
                last_meta_point_ = meta / static_cast<double>(bucket.size());
                core_.recompute_center();
                buffers_.bucket_pos.clear();
                buffers_.bucket_neg.clear();
                recomputed = true;
            }
        }
        return {mistake, recomputed, core_.log_volume()};
    }

    std::optional<double> log_volume_surrogate() const override { return core_.log_volume(); }
    const CutPlaneCore& core() const { return core_; }
    const MetaPointBuffers& buffers() const { return buffers_; }
    const std::optional<Eigen::VectorXd>& last_meta_point() const { return last_meta_point_; }

    nlohmann::json snapshot() const override {
        return {{"format", "smoothcut-learner-v1"},
                {"kind", "john_poly"},
                {"feature", spec_.name},
                {"p", buffers_.capacity},
                {"bucket_sizes", {buffers_.bucket_pos.size(), buffers_.bucket_neg.size()}},
                {"state", core_.snapshot()}};
    }

private:
    PolynomialFeatureSpec spec_;
    CutPlaneCore core_;
    MetaPointBuffers buffers_;
    std::optional<Eigen::VectorXd> last_meta_point_;
    std::int64_t round_ = 0;
};

}  // namespace smoothcut
