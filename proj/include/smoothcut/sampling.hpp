#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "smoothcut/ellipsoid.hpp"
#include "smoothcut/polytope.hpp"
#include "smoothcut/rng.hpp"

namespace smoothcut {

inline Eigen::VectorXd sample_unit_sphere(int d, Rng& rng) {
    Eigen::VectorXd v(d);
    double n = 0.0;
    do {
        for (int i = 0; i < d; ++i) v(i) = rng.gaussian();
        n = v.norm();
    } while (n == 0.0);
    return v / n;
}

// Uniform on the unit ball: Gaussian direction times radius U^{1/d}.
inline Eigen::VectorXd sample_uniform_ball(int d, Rng& rng) {
    Eigen::VectorXd dir = sample_unit_sphere(d, rng);
    double r = std::pow(rng.uniform01(), 1.0 / d);
    return r * dir;
}

// Hit-and-run walk inside a halfspace polytope. The start point must be
// strictly interior; each call advances the chain one step.
class HitAndRun {
public:
    HitAndRun(const HalfspacePolytope& poly, Eigen::VectorXd start)
        : poly_(&poly), x_(std::move(start)) {}

    const Eigen::VectorXd& state() const { return x_; }

    const Eigen::VectorXd& step(Rng& rng) {
        const int d = static_cast<int>(x_.size());
        Eigen::VectorXd u = sample_unit_sphere(d, rng);
        // chord { x + t u } within all halfspaces
        double t_lo = -1e300, t_hi = 1e300;
        for (const auto& h : poly_->constraints()) {
            double au = h.normal.dot(u);
            double slack = h.offset - h.normal.dot(x_);
            if (au > 1e-14) t_hi = std::min(t_hi, slack / au);
            else if (au < -1e-14) t_lo = std::max(t_lo, slack / au);
            else if (slack < 0) { t_lo = 0; t_hi = 0; }
        }
        if (t_hi > t_lo) x_ += rng.uniform(t_lo, t_hi) * u;
        return x_;
    }

private:
    const HalfspacePolytope* poly_;
    Eigen::VectorXd x_;
};

struct SandwichReport {
    int inner_violations = 0;    // constraints violated by E beyond the margin
    int outer_violations = 0;    // sampled polytope points outside d*E
    int samples = 0;
    double worst_margin = -1e300;
};

// Checks the two-sided containment E ⊂ P ⊂ d·E for E the inscribed ellipsoid
// of P: (a) per-constraint margin test for E ⊂ P, (b) hit-and-run samples of P
// tested against the d-fold dilation.
inline SandwichReport sandwich_check(const HalfspacePolytope& poly, const Ellipsoid& e,
                                     int n_samples, Rng& rng, double tol = 1e-7) {
    SandwichReport rep;
    for (const auto& h : poly.constraints()) {
        double n = h.normal.norm();
        double margin = (h.normal.dot(e.center) + (e.shape * h.normal).norm() - h.offset) / n;
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > tol) ++rep.inner_violations;
    }
    const int d = poly.dim();
    Ellipsoid outer = dilate(e, static_cast<double>(d));
    HitAndRun walk(poly, e.center);
    const int burn = 20 * d;
    for (int i = 0; i < burn; ++i) walk.step(rng);
    for (int i = 0; i < n_samples; ++i) {
        const Eigen::VectorXd& x = walk.step(rng);
        if (!outer.contains(x, 1e-9)) ++rep.outer_violations;
        ++rep.samples;
    }
    return rep;
}

}  // namespace smoothcut
