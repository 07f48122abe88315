#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <doctest.h>

#include "facref/errors.hpp"
#include "facref/features.hpp"

using namespace facref;

namespace {

PointCloud cloud_of(const std::vector<Point3>& pts) {
    PointCloud c;
    for (const auto& p : pts) {
        PointRecord r;
        r.position = p;
        r.prob = one_hot(Label::Wall);
        c.points.push_back(r);
    }
    return c;
}

std::vector<Point3> grid_points(int n, double step) {
    std::vector<Point3> out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) out.emplace_back(i * step, j * step, k * step);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("radius neighbors") {
    const auto c = cloud_of(grid_points(3, 1.0));
    CHECK(radius_neighbors(c, Point3(1, 1, 1), 1.01).size() == 7);
    CHECK(radius_neighbors(c, Point3(1, 1, 1), 0.5).size() == 1);
    CHECK(radius_neighbors(c, Point3(1, 1, 1), 1.5).size() == 19);
    CHECK(radius_neighbors(c, Point3(10, 10, 10), 1.0).empty());
}

TEST_CASE("spatial index agrees with a linear scan") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0), r(0.05, 2.0);
    std::vector<Point3> pts;
    for (int i = 0; i < 3000; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
    for (const double cell : {0.1, 0.8, 5.0}) {
        const SpatialIndex index(pts, cell);
        for (int q = 0; q < 200; ++q) {
            const Point3 p(u(rng), u(rng), u(rng));
            const double rad = r(rng);
            std::vector<std::size_t> expect;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if ((pts[i] - p).squaredNorm() <= rad * rad) expect.push_back(i);
            }
            CHECK(index.radius(p, rad) == expect);
        }
    }
}

TEST_CASE("eigen features of degenerate neighborhoods") {
    std::vector<Point3> plane;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) plane.emplace_back(i * 0.1, j * 0.1, 2.0);
    }
    const auto f = eigen_features(plane);
    CHECK(f.surface_variation == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.omnivariance == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(std::abs(f.normal.z()) == doctest::Approx(1.0));
    CHECK(f.planarity == doctest::Approx(1.0));

    std::vector<Point3> line;
    for (int i = 0; i < 20; ++i) line.emplace_back(i * 0.1, i * 0.2, -i * 0.05);
    const auto g = eigen_features(line);
    CHECK(g.planarity == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.lambda[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(eigen_features(std::vector<Point3>{Point3(0, 0, 0), Point3(1, 0, 0)}), InsufficientNeighborhood);
    CHECK_THROWS_AS(eigen_features(std::vector<Point3>(5, Point3(1, 2, 3))), InsufficientNeighborhood);
}

TEST_CASE("eigen features of a uniform ball") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point3> ball;
    while (ball.size() < 10000) {
        const Point3 p(u(rng), u(rng), u(rng));
        if (p.squaredNorm() <= 1.0) ball.push_back(p);
    }
    const auto f = eigen_features(ball);
    for (const double l : f.lambda) CHECK(l == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK(f.planarity <= 0.05);
}

TEST_CASE("eigen feature ranges and invariance") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.01, 3.0);
    for (int t = 0; t < 500; ++t) {
        const Vec3 scale(s(rng), s(rng), s(rng));
        std::vector<Point3> pts;
        for (int i = 0; i < 30; ++i) pts.push_back(Point3(u(rng), u(rng), u(rng)).cwiseProduct(scale));
        const auto f = eigen_features(pts);
        const auto& l = f.lambda;
        CHECK(l[0] >= l[1]);
        CHECK(l[1] >= l[2]);
        CHECK(l[0] + l[1] + l[2] == doctest::Approx(1.0));
        CHECK(f.planarity >= 0.0);
        CHECK(f.planarity <= 1.0);
        CHECK(f.surface_variation >= 0.0);
        CHECK(f.surface_variation <= 1.0 / 3.0 + 1e-12);
        CHECK(f.omnivariance >= 0.0);
        CHECK(f.planarity + (l[0] - l[1]) / l[0] + l[2] / l[0] == doctest::Approx(1.0));

        const Eigen::Matrix3d R = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
        const Vec3 shift(u(rng) * 100, u(rng) * 100, u(rng) * 100);
        std::vector<Point3> moved;
        for (const auto& p : pts) moved.push_back(R * p + shift);
        const auto g = eigen_features(moved);
        CHECK(g.omnivariance == doctest::Approx(f.omnivariance).epsilon(1e-6));
        CHECK(g.planarity == doctest::Approx(f.planarity).epsilon(1e-6));
        CHECK(g.surface_variation == doctest::Approx(f.surface_variation).epsilon(1e-6));
    }
}

TEST_CASE("scalar features") {
    const NeighborhoodSpec spec;
    std::vector<Point3> ground;
    for (int i = -20; i <= 20; ++i) {
        for (int j = -20; j <= 20; ++j) ground.emplace_back(i * 0.05, j * 0.05, 0.0);
    }
    const auto g = scalar_features(cloud_of(ground), Point3(0, 0, 0), spec);
    CHECK(g.roughness == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.verticality == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.height == doctest::Approx(0.0));

    std::vector<Point3> wall;
    for (int i = -20; i <= 20; ++i) {
        for (int k = 0; k <= 40; ++k) wall.emplace_back(i * 0.05, 0.0, k * 0.05);
    }
    const auto w = scalar_features(cloud_of(wall), Point3(0, 0, 1.0), spec);
    CHECK(w.verticality == doctest::Approx(1.0));
    CHECK(w.height == doctest::Approx(1.0));

    // 100 points inside the r_eigen sphere, off-center so the set is not degenerate.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    std::vector<Point3> blob;
    while (blob.size() < 100) blob.emplace_back(u(rng), u(rng), u(rng));
    blob[0] = Point3::Zero();
    const auto b = scalar_features(cloud_of(blob), Point3::Zero(), spec);
    CHECK(4.0 / 3.0 * std::numbers::pi * 0.8 * 0.8 * 0.8 == doctest::Approx(2.1447).epsilon(1e-4));
    CHECK(b.volume_density == doctest::Approx(100.0 / 2.1447).epsilon(1e-4));

    const auto bumped = [&] {
        auto pts = ground;
        pts.emplace_back(0.01, 0.01, 0.1);
        return scalar_features(cloud_of(pts), pts.back(), spec);
    }();
    CHECK(bumped.roughness == doctest::Approx(0.1).epsilon(0.01));
}

TEST_CASE("compute features marks sparse points") {
    std::vector<Point3> pts = grid_points(4, 0.1);
    pts.emplace_back(50, 50, 50);
    const auto rows = compute_features(cloud_of(pts), NeighborhoodSpec{});
    REQUIRE(rows.size() == pts.size());
    CHECK(std::isnan(rows.back().planarity));
    CHECK(rows.back().volume_density > 0.0);
    CHECK(rows.back().height == doctest::Approx(50.0));
    CHECK_FALSE(std::isnan(rows.front().planarity));
}
