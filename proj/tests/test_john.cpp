#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "smoothcut/john.hpp"
#include "smoothcut/sampling.hpp"
#include "smoothcut/verify.hpp"

using namespace smoothcut;
using Catch::Approx;

namespace {

// Independent oracle for the triangle case: coarse penalty search over
// (center, symmetric 2x2 shape) maximizing det subject to a sampled
// containment test. Slow and crude on purpose; it shares nothing with the
// barrier solver.
struct BruteEllipse {
    Eigen::Vector2d c;
    Eigen::Matrix2d B;
    double det = 0.0;
};

bool ellipse_inside_triangle(const Eigen::Vector2d& c, const Eigen::Matrix2d& B) {
    for (int k = 0; k < 64; ++k) {
        double th = 2.0 * M_PI * k / 64;
        Eigen::Vector2d p = c + B * Eigen::Vector2d(std::cos(th), std::sin(th));
        if (p(0) < -1e-9 || p(1) < -1e-9 || p(0) + p(1) > 1.0 + 1e-9) return false;
    }
    return true;
}

BruteEllipse brute_force_triangle_ellipse() {
    BruteEllipse best;
    // stage 1: coarse grid
    double step = 0.02;
    for (double cx = step; cx < 0.7; cx += step)
        for (double cy = step; cy < 0.7; cy += step)
            for (double a = step; a < 0.6; a += step)
                for (double d = step; d < 0.6; d += step)
                    for (double b = -0.3; b < 0.3; b += step) {
                        Eigen::Matrix2d B;
                        B << a, b, b, d;
                        double det = a * d - b * b;
                        if (det <= best.det) continue;
                        Eigen::Vector2d c(cx, cy);
                        if (ellipse_inside_triangle(c, B)) best = {c, B, det};
                    }
    // stage 2: local refinement around the winner
    for (int pass = 0; pass < 3; ++pass) {
        step /= 4.0;
        BruteEllipse cur = best;
        for (double cx = cur.c(0) - 3 * step; cx <= cur.c(0) + 3 * step; cx += step)
            for (double cy = cur.c(1) - 3 * step; cy <= cur.c(1) + 3 * step; cy += step)
                for (double a = cur.B(0, 0) - 3 * step; a <= cur.B(0, 0) + 3 * step; a += step)
                    for (double d = cur.B(1, 1) - 3 * step; d <= cur.B(1, 1) + 3 * step; d += step)
                        for (double b = cur.B(0, 1) - 3 * step; b <= cur.B(0, 1) + 3 * step;
                             b += step) {
                            Eigen::Matrix2d B;
                            B << a, b, b, d;
                            double det = a * d - b * b;
                            if (det <= best.det) continue;
                            Eigen::Vector2d c(cx, cy);
                            if (ellipse_inside_triangle(c, B)) best = {c, B, det};
                        }
    }
    return best;
}

HalfspacePolytope triangle() {
    HalfspacePolytope p(2);
    p = p.cut(Eigen::Vector2d(-1, 0), 0.0);
    p = p.cut(Eigen::Vector2d(0, -1), 0.0);
    p = p.cut(Eigen::Vector2d(1, 1), 1.0);
    return p;
}

}  // namespace

TEST_CASE("axis-aligned boxes") {
    // symmetric box -> unit ball
    for (int d = 2; d <= 6; ++d) {
        Ellipsoid e = max_inscribed_ellipsoid(HalfspacePolytope(d));
        CHECK(e.center.norm() <= 1e-6);
        CHECK((e.shape - Eigen::MatrixXd::Identity(d, d)).norm() <= 1e-5);
        CHECK(e.log_volume == Approx(log_unit_ball_volume(d)).margin(1e-5));
    }
    // anisotropic box -> diagonal shape with the side lengths
    HalfspacePolytope p(2);
    Eigen::Vector2d e2(0, 1);
    p = p.cut(e2, 0.5).cut(-e2, 0.5);
    Ellipsoid e = max_inscribed_ellipsoid(p);
    CHECK(e.shape(0, 0) == Approx(1.0).margin(1e-5));
    CHECK(e.shape(1, 1) == Approx(0.5).margin(1e-5));
    CHECK(std::abs(e.shape(0, 1)) <= 1e-6);
}

TEST_CASE("triangle matches the brute-force search and the Steiner inellipse") {
    Ellipsoid e = max_inscribed_ellipsoid(triangle());

    // values frozen from the independent penalty-search oracle (and the
    // closed form: centroid center, area pi/(6 sqrt 3) ~ 0.30230
    CHECK(e.center(0) == Approx(1.0 / 3.0).margin(1e-5));
    CHECK(e.center(1) == Approx(1.0 / 3.0).margin(1e-5));
    CHECK(std::exp(e.log_volume) == Approx(M_PI / (6.0 * std::sqrt(3.0))).margin(1e-5));

    BruteEllipse brute = brute_force_triangle_ellipse();
    CHECK((brute.c - e.center).norm() <= 0.02);
    CHECK(std::exp(e.log_volume) >= M_PI * brute.det - 1e-9);  // solver at least as good
    CHECK(M_PI * brute.det == Approx(std::exp(e.log_volume)).margin(0.01));
}

TEST_CASE("feasibility margin contract") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_index(4));
        HalfspacePolytope p = random_polytope(d, 1 + static_cast<int>(rng.uniform_index(6)), rng);
        Ellipsoid e;
        try {
            e = max_inscribed_ellipsoid(p, 1e-8);
        } catch (const InfeasibleOrDegenerate&) {
            continue;
        }
        for (const auto& h : p.constraints()) {
            double margin = h.normal.dot(e.center) + (e.shape * h.normal).norm() - h.offset;
            CHECK(margin <= 1e-8 * (1.0 + std::abs(h.offset)) + 1e-12);
        }
    }
}

TEST_CASE("deterministic output") {
    HalfspacePolytope p(3);
    p = p.cut(Eigen::Vector3d(0.5, -0.2, 0.8), 0.1);
    auto a = max_inscribed_ellipsoid_full(p);
    auto b = max_inscribed_ellipsoid_full(p);
    CHECK(a.ellipsoid.center == b.ellipsoid.center);
    CHECK(a.ellipsoid.shape == b.ellipsoid.shape);
    CHECK(a.ellipsoid.log_volume == b.ellipsoid.log_volume);
}

TEST_CASE("degenerate bodies are reported") {
    HalfspacePolytope p(2);
    Eigen::Vector2d x(0.5, 0.2);
    p = p.cut(x, 0.0).cut(-x, 0.0);  // width-zero slab
    CHECK_THROWS_AS(max_inscribed_ellipsoid(p), InfeasibleOrDegenerate);
}

TEST_CASE("cutting never increases the inscribed volume") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_index(3));
        HalfspacePolytope p = random_polytope(d, static_cast<int>(rng.uniform_index(5)), rng);
        Ellipsoid before;
        try {
            before = max_inscribed_ellipsoid(p);
        } catch (const InfeasibleOrDegenerate&) {
            continue;
        }
        Eigen::VectorXd g = sample_unit_sphere(d, rng);
        // cut somewhere through the interior (through a random interior point)
        Eigen::VectorXd pt = before.center + 0.5 * (before.shape * sample_uniform_ball(d, rng));
        auto cutp = p.cut(g, g.dot(pt));
        try {
            Ellipsoid after = max_inscribed_ellipsoid(cutp);
            CHECK(after.log_volume <= before.log_volume + 1e-6 * (1.0 + std::abs(before.log_volume)));
        } catch (const InfeasibleOrDegenerate&) {
            // collapsed: trivially smaller
        }
    }
}

TEST_CASE("center cuts decay by 8/9") {
    Rng rng(13);
    auto ratios = tarasov_ratios(60, 5, rng);
    auto res = check_tarasov_ratios(ratios);
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("fault injection: loosened ratios are caught") {
    std::vector<double> ratios = {0.5, 0.83, 8.0 / 9.0 + 0.01};
    CHECK_FALSE(check_tarasov_ratios(ratios).pass);
    CHECK(check_tarasov_ratios({0.5, 0.83, 8.0 / 9.0}).pass);
}

TEST_CASE("sandwich containment") {
    Rng rng(17);
    // the worked example: box, unit disk, corners inside the 2-dilation
    HalfspacePolytope box(2);
    Ellipsoid e = max_inscribed_ellipsoid(box);
    SandwichReport rep = sandwich_check(box, e, 4000, rng);
    CHECK(rep.inner_violations == 0);
    CHECK(rep.outer_violations == 0);

    // a needle-shaped polytope still sandwiches
    HalfspacePolytope needle(3);
    Eigen::Vector3d e3(0, 0, 1);
    needle = needle.cut(e3, 1e-3).cut(-e3, 1e-3);
    Ellipsoid en = max_inscribed_ellipsoid(needle);
    rep = sandwich_check(needle, en, 4000, rng);
    CHECK(rep.inner_violations == 0);
    CHECK(rep.outer_violations == 0);

    // random cut sequences
    for (int trial = 0; trial < 10; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_index(4));
        HalfspacePolytope p = random_polytope(d, 3, rng);
        Ellipsoid ep;
        try {
            ep = max_inscribed_ellipsoid(p);
        } catch (const InfeasibleOrDegenerate&) {
            continue;
        }
        rep = sandwich_check(p, ep, 2000, rng);
        CHECK(rep.inner_violations == 0);
        CHECK(rep.outer_violations == 0);
    }
}

TEST_CASE("volume and dilation") {
    Ellipsoid disk = Ellipsoid::make(Eigen::Vector2d(0, 0), Eigen::Matrix2d::Identity());
    CHECK(ellipsoid_volume(disk) == Approx(M_PI));
    CHECK(ellipsoid_volume(dilate(disk, 2.0)) == Approx(4.0 * M_PI));
    Eigen::Matrix2d half;
    half << 1.0, 0.0, 0.0, 0.5;
    CHECK(ellipsoid_volume(Ellipsoid::make(Eigen::Vector2d(0, 0), half)) == Approx(M_PI / 2.0));
    CHECK_THROWS(dilate(disk, 0.0));
}
