#include "facref/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

SpatialIndex::SpatialIndex(std::span<const Point3> points, double cell_size)
    : points_(points.begin(), points.end()), cell_(cell_size) {
    if (!(cell_size > 0.0)) throw InsufficientNeighborhood("spatial index cell size must be positive");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        cells_[hash_key(cell_coord(p.x()), cell_coord(p.y()), cell_coord(p.z()))].push_back(i);
    }
}

std::int64_t SpatialIndex::cell_coord(double x) const { return static_cast<std::int64_t>(std::floor(x / cell_)); }

std::uint64_t SpatialIndex::hash_key(std::int64_t i, std::int64_t j, std::int64_t k) {
    constexpr std::uint64_t mask = (1ULL << 21) - 1;
    return (static_cast<std::uint64_t>(i) & mask) | ((static_cast<std::uint64_t>(j) & mask) << 21) |
           ((static_cast<std::uint64_t>(k) & mask) << 42);
}

std::vector<std::size_t> SpatialIndex::radius(const Point3& p, double r) const {
    std::vector<std::size_t> out;
    const double r2 = r * r;
    const auto i0 = cell_coord(p.x() - r), i1 = cell_coord(p.x() + r);
    const auto j0 = cell_coord(p.y() - r), j1 = cell_coord(p.y() + r);
    const auto k0 = cell_coord(p.z() - r), k1 = cell_coord(p.z() + r);
    for (auto i = i0; i <= i1; ++i) {
        for (auto j = j0; j <= j1; ++j) {
            for (auto k = k0; k <= k1; ++k) {
                const auto it = cells_.find(hash_key(i, j, k));
                if (it == cells_.end()) continue;
                for (auto idx : it->second) {
                    // The 21-bit key wraps, so colliding far cells are filtered here.
                    if ((points_[idx] - p).squaredNorm() <= r2) out.push_back(idx);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Point3> positions_of(const PointCloud& cloud) {
    std::vector<Point3> out;
    out.reserve(cloud.size());
    for (const auto& r : cloud.points) out.push_back(r.position);
    return out;
}

std::vector<std::size_t> radius_neighbors(const PointCloud& cloud, const Point3& p, double r) {
    const auto pts = positions_of(cloud);
    return SpatialIndex(pts, r).radius(p, r);
}

EigenFeatures eigen_features(std::span<const Point3> pts) {
    if (pts.size() < 3) throw InsufficientNeighborhood(fmt::format("{} points, need at least 3", pts.size()));
    Point3 c = Point3::Zero();
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : pts) {
        const Vec3 d = p - c;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(pts.size());

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Eigen::Vector3d ev = solver.eigenvalues().cwiseMax(0.0);  // ascending
    const double sum = ev.sum();
    if (!(sum > 0.0) || !(ev(2) > 0.0)) throw InsufficientNeighborhood("neighborhood has zero spread");

    EigenFeatures f;
    f.lambda = {ev(2) / sum, ev(1) / sum, ev(0) / sum};
    f.normal = solver.eigenvectors().col(0).normalized();
    f.centroid = c;
    const auto& l = f.lambda;
    f.omnivariance = std::cbrt(l[0] * l[1] * l[2]);
    f.planarity = (l[1] - l[2]) / l[0];
    f.surface_variation = l[2] / (l[0] + l[1] + l[2]);
    return f;
}

namespace {

std::vector<Point3> gather(const SpatialIndex& index, const std::vector<std::size_t>& ids) {
    std::vector<Point3> out;
    out.reserve(ids.size());
    for (auto i : ids) out.push_back(index.points()[i]);
    return out;
}

double sphere_volume(double r) { return 4.0 / 3.0 * std::numbers::pi * r * r * r; }

}  // namespace

ScalarFeatures scalar_features(const SpatialIndex& index, double min_z, const Point3& p, const NeighborhoodSpec& spec) {
    ScalarFeatures s;
    s.height = p.z() - min_z;

    const auto eig_ids = index.radius(p, spec.r_eigen);
    s.volume_density = static_cast<double>(eig_ids.size()) / sphere_volume(spec.r_eigen);
    const auto eig = eigen_features(gather(index, eig_ids));
    s.roughness = std::abs((p - eig.centroid).dot(eig.normal));

    const auto vert = eigen_features(gather(index, index.radius(p, spec.r_vert)));
    s.verticality = 1.0 - std::abs(vert.normal.z());
    return s;
}

ScalarFeatures scalar_features(const PointCloud& cloud, const Point3& p, const NeighborhoodSpec& spec) {
    const auto pts = positions_of(cloud);
    double min_z = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) min_z = std::min(min_z, q.z());
    const SpatialIndex index(pts, spec.r_eigen);
    return scalar_features(index, min_z, p, spec);
}

std::vector<FeatureVector> compute_features(const PointCloud& cloud, const NeighborhoodSpec& spec) {
    const auto pts = positions_of(cloud);
    double min_z = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) min_z = std::min(min_z, q.z());
    const SpatialIndex index(pts, spec.r_eigen);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<FeatureVector> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto& f = out[i];
        f = {pts[i].z() - min_z, nan, nan, nan, nan, nan, nan};
        try {
            const auto s = scalar_features(index, min_z, pts[i], spec);
            f.roughness = s.roughness;
            f.volume_density = s.volume_density;
            f.verticality = s.verticality;
            const auto e = eigen_features(gather(index, index.radius(pts[i], spec.r_eigen)));
            f.omnivariance = e.omnivariance;
            f.planarity = e.planarity;
            f.surface_variation = e.surface_variation;
        } catch (const InsufficientNeighborhood&) {
            f.volume_density = static_cast<double>(index.radius(pts[i], spec.r_eigen).size()) / sphere_volume(spec.r_eigen);
        }
    }
    return out;
}

void write_features_csv(const PointCloud& cloud, const std::vector<FeatureVector>& features,
                        const std::filesystem::path& path) {
    if (features.size() != cloud.size()) throw SchemaError("feature rows do not match the point count");
    std::stringstream base;
    write_point_cloud(cloud, base);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write '{}'", path.string()));
    std::string line;
    std::getline(base, line);
    out << line << ",height,roughness,volume_density,verticality,omnivariance,planarity,surface_variation\n";
    for (const auto& f : features) {
        std::getline(base, line);
        out << line
            << fmt::format(",{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", f.height, f.roughness,
                           f.volume_density, f.verticality, f.omnivariance, f.planarity, f.surface_variation);
    }
}

}  // namespace facref
