#include <catch2/catch_amalgamated.hpp>

#include "smoothcut/polytope.hpp"

using namespace smoothcut;

namespace {
Eigen::Vector2d vec2(double a, double b) { return Eigen::Vector2d(a, b); }
}  // namespace

TEST_CASE("fresh polytope carries the box facets") {
    HalfspacePolytope p(3);
    CHECK(p.size() == 6);
    for (const auto& h : p.constraints()) CHECK(h.tag.box_facet);
    CHECK(p.contains(Eigen::Vector3d(0, 0, 0)));
    CHECK(p.contains(Eigen::Vector3d(1, 1, 1)));
    CHECK_FALSE(p.contains(Eigen::Vector3d(1.1, 0, 0)));
}

TEST_CASE("cut semantics") {
    HalfspacePolytope box(2);
    auto p = box.cut(vec2(1, 0), 0.0, 7);  // w1 <= 0
    CHECK(p.size() == box.size() + 1);     // list grows by one
    CHECK(box.size() == 4);                // original unmodified
    CHECK(p.contains(vec2(-0.5, 0.0)));
    CHECK_FALSE(p.contains(vec2(0.5, 0.0)));
    CHECK(p.constraints().back().tag.round == 7);

    // the paper's cut <w, y x> >= 0 encoded as normal = -y x, offset 0
    Eigen::Vector2d x(0.3, -0.8);
    int y = -1;
    auto q = box.cut(-static_cast<double>(y) * x, 0.0);
    CHECK(q.contains(vec2(-0.3, 0.8)));       // w with <w, yx> > 0
    CHECK_FALSE(q.contains(vec2(0.3, -0.8))); // w with <w, yx> < 0

    // repeated identical cut: same member set
    auto twice = p.cut(vec2(1, 0), 0.0);
    for (double wx : {-0.9, -0.2, 0.2, 0.9})
        for (double wy : {-0.9, 0.0, 0.9})
            CHECK(p.contains(vec2(wx, wy)) == twice.contains(vec2(wx, wy)));
}

TEST_CASE("contains with slack") {
    HalfspacePolytope box(2);
    CHECK(box.contains(vec2(0, 0)));
    CHECK(box.contains(vec2(1.0 + 1e-6, 0.0), 1e-5));
    CHECK_FALSE(box.contains(vec2(2.0, 0.0), 1e-5));
}

TEST_CASE("prune removes duplicates and slack facets") {
    HalfspacePolytope box(2);

    SECTION("duplicate facet") {
        auto p = box.cut(vec2(1, 0), 1.0);  // duplicate of the box facet
        auto pruned = p.prune_redundant();
        CHECK(pruned.size() == 4);
    }
    SECTION("slack facet removed") {
        auto p = box.cut(vec2(1, 0), 2.0);
        auto pruned = p.prune_redundant();
        CHECK(pruned.size() == 4);
    }
    SECTION("binding facet kept") {
        auto p = box.cut(vec2(1, 0), 0.5);
        auto pruned = p.prune_redundant();
        CHECK(pruned.size() == 5);
        CHECK(pruned.contains(vec2(0.5, 0.0)));
        CHECK_FALSE(pruned.contains(vec2(0.6, 0.0)));
    }
    SECTION("member set preserved on a random pile of cuts") {
        auto p = box.cut(vec2(0.6, 0.8), 0.3).cut(vec2(-0.8, 0.6), 0.5).cut(vec2(0.6, 0.8), 0.9)
                     .cut(vec2(1, 0), 1.5).cut(vec2(-0.8, 0.6), 0.5);
        auto pruned = p.prune_redundant();
        CHECK(pruned.size() < p.size());
        for (double wx = -1.0; wx <= 1.0; wx += 0.25)
            for (double wy = -1.0; wy <= 1.0; wy += 0.25)
                CHECK(p.contains(vec2(wx, wy)) == pruned.contains(vec2(wx, wy)));
    }
    SECTION("box facets survive even when redundant") {
        auto p = box.cut(vec2(1, 0), 0.5);
        auto pruned = p.prune_redundant();
        int boxes = 0;
        for (const auto& h : pruned.constraints()) boxes += h.tag.box_facet ? 1 : 0;
        CHECK(boxes == 4);
    }
}
