#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace smoothcut {

// log volume of the unit ball in R^d: log(pi^{d/2} / Gamma(d/2 + 1))
inline double log_unit_ball_volume(int d) {
    return 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
}

inline double unit_ball_volume(int d) { return std::exp(log_unit_ball_volume(d)); }

// E = { c + B u : ||u|| <= 1 } with B symmetric positive semidefinite.
struct Ellipsoid {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;      // symmetric PSD
    double log_volume = 0.0;    // log(omega_d) + log det(shape)

    int dim() const { return static_cast<int>(center.size()); }

    static Ellipsoid make(Eigen::VectorXd c, Eigen::MatrixXd B) {
        Ellipsoid e;
        e.center = std::move(c);
        e.shape = std::move(B);
        e.shape = 0.5 * (e.shape + e.shape.transpose());  // enforce exact symmetry
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.shape);
        double logdet = 0.0;
        for (int i = 0; i < e.dim(); ++i) logdet += std::log(std::max(es.eigenvalues()(i), 0.0));
        e.log_volume = log_unit_ball_volume(e.dim()) + logdet;
        return e;
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape);
        return es.eigenvalues().minCoeff();
    }

    // squared Mahalanobis radius ||B^{-1}(x - c)||^2; x is inside iff <= 1
    double unit_radius_sq(const Eigen::VectorXd& x) const {
        Eigen::VectorXd u = shape.ldlt().solve(x - center);
        return u.squaredNorm();
    }

    bool contains(const Eigen::VectorXd& x, double slack = 0.0) const {
        return std::sqrt(unit_radius_sq(x)) <= 1.0 + slack;
    }
};

inline double ellipsoid_volume(const Ellipsoid& e) { return std::exp(e.log_volume); }

// Scales the ellipsoid about its center.
inline Ellipsoid dilate(const Ellipsoid& e, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
    Ellipsoid out = e;
    out.shape *= factor;
    out.log_volume += e.dim() * std::log(factor);
    return out;
}

}  // namespace smoothcut
