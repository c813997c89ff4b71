#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mls/drawing.hpp"
#include "mls/geometry.hpp"

using namespace mls;

namespace {

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
    for (const auto& x : v) {
        if (x.kind == k) return true;
    }
    return false;
}

}  // namespace

TEST(Distance, Examples) {
    EXPECT_DOUBLE_EQ(distance(Point::grid(0, 0), Point::grid(3, 4)), 5.0);
    EXPECT_DOUBLE_EQ(distance(Point::grid(0, 0), Point::grid(0, 0)), 0.0);
    EXPECT_NEAR(distance(Point::grid(0, 0), Point::grid(1, 1)), 1.41421356, 1e-8);
    EXPECT_EQ(dist2_tenths(Point(0, 0), Point(11, 0)), 121);
}

TEST(Distance, TriangleInequalityAndSymmetry) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> c(-500, 500);
    for (int i = 0; i < 2000; ++i) {
        const Point a(c(rng), c(rng)), b(c(rng), c(rng)), d(c(rng), c(rng));
        EXPECT_EQ(distance(a, b), distance(b, a));
        EXPECT_LE(distance(a, d), distance(a, b) + distance(b, d) + 1e-12);
    }
}

TEST(Point, FromDecimal) {
    EXPECT_EQ(Point::from_decimal(1.1, -2.5), Point(11, -25));
    EXPECT_EQ(Point::from_decimal(3, 0), Point::grid(3, 0));
    EXPECT_THROW(Point::from_decimal(0.05, 0), InputError);
    EXPECT_THROW(Point::from_decimal(NAN, 0), InputError);
}

TEST(ModelParams, Validation) {
    ModelParams m;
    EXPECT_NO_THROW(m.validate());
    m.beta = 0.5;
    EXPECT_THROW(m.validate(), InputError);
    m = {};
    m.noise = -1;
    EXPECT_THROW(m.validate(), InputError);
    m = {};
    m.node_beta[3] = 2.0;
    m.node_noise[3] = 0.5;
    EXPECT_DOUBLE_EQ(m.beta_at(3), 2.0);
    EXPECT_DOUBLE_EQ(m.beta_at(4), 1.0);
    EXPECT_FALSE(m.zero_noise());
}

TEST(Instance, RejectsBadMessages) {
    const std::vector<Node> nodes{{0, Point::grid(0, 0)}, {1, Point::grid(1, 0)}};
    EXPECT_NO_THROW(Instance({}, nodes, {{0, 1, 2}}));
    EXPECT_THROW(Instance({}, nodes, {{0, 7, 1}}), InputError);
    EXPECT_THROW(Instance({}, nodes, {{0, 0, 1}}), InputError);
    EXPECT_THROW(Instance({}, nodes, {{0, 1, 0}}), InputError);
    EXPECT_THROW(Instance({}, {{0, {}}, {0, Point::grid(1, 1)}}, {}), InputError);
    const Instance inst({}, nodes, {{0, 1, 2}, {1, 0, 1}});
    EXPECT_EQ(inst.total_copies(), 3u);
    EXPECT_EQ(inst.position(1), Point::grid(1, 0));
    EXPECT_THROW(inst.position(9), InputError);
}

TEST(GridDrawing, UnitSquareIsValid) {
    const auto d = builtin_drawing("c4");
    EXPECT_EQ(d.nodes.size(), 4u);
    EXPECT_EQ(d.edges.size(), 4u);
    EXPECT_TRUE(validate_grid_drawing(d).empty());
}

TEST(GridDrawing, EmptyIsValid) { EXPECT_TRUE(validate_grid_drawing({}).empty()); }

TEST(GridDrawing, DiagonalSegment) {
    GridDrawing d;
    d.nodes = {{0, {0, 0}}, {1, {1, 1}}};
    d.edges = {{0, 1, {{0, 0}, {1, 1}}}};
    EXPECT_TRUE(has_kind(validate_grid_drawing(d), ViolationKind::NonAxisParallel));
}

TEST(GridDrawing, DegreeFive) {
    GridDrawing d;
    d.nodes = {{0, {0, 0}}, {1, {2, 0}}, {2, {-2, 0}}, {3, {0, 2}}, {4, {0, -2}}, {5, {3, 3}}};
    d.edges = {{0, 1, {{0, 0}, {2, 0}}},
               {0, 2, {{0, 0}, {-2, 0}}},
               {0, 3, {{0, 0}, {0, 2}}},
               {0, 4, {{0, 0}, {0, -2}}},
               {0, 5, {{0, 0}, {1, 0}, {1, 3}, {3, 3}}}};
    EXPECT_TRUE(has_kind(validate_grid_drawing(d), ViolationKind::Degree));
}

TEST(GridDrawing, CrossingAndDangling) {
    GridDrawing d;
    d.nodes = {{0, {0, 1}}, {1, {2, 1}}, {2, {1, 0}}, {3, {1, 2}}};
    d.edges = {{0, 1, {{0, 1}, {2, 1}}}, {2, 3, {{1, 0}, {1, 2}}}};
    EXPECT_TRUE(has_kind(validate_grid_drawing(d), ViolationKind::Crossing));

    GridDrawing e;
    e.nodes = {{0, {0, 0}}, {1, {3, 0}}};
    e.edges = {{0, 1, {{0, 0}, {2, 0}}}};
    EXPECT_TRUE(has_kind(validate_grid_drawing(e), ViolationKind::DanglingEndpoint));
}

TEST(GridDrawing, BuiltinsValidate) {
    for (const auto& name : builtin_drawing_names()) {
        EXPECT_TRUE(validate_grid_drawing(builtin_drawing(name)).empty()) << name;
    }
    EXPECT_THROW(builtin_drawing("petersen"), InputError);
}

TEST(GridDrawing, Adjacency) {
    const auto adj = adjacency(builtin_drawing("k4"));
    for (const auto& a : adj) EXPECT_EQ(a.size(), 3u);
}
