#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "facref/geometry.hpp"
#include "facref/params.hpp"
#include "facref/point_cloud.hpp"

namespace facref {

/// Uniform hash grid over a fixed point set for radius queries.
class SpatialIndex {
public:
    SpatialIndex(std::span<const Point3> points, double cell_size);

    /// Indices with |q - p| <= r, ascending.
    std::vector<std::size_t> radius(const Point3& p, double r) const;

    std::span<const Point3> points() const { return points_; }

private:
    std::int64_t cell_coord(double x) const;
    static std::uint64_t hash_key(std::int64_t i, std::int64_t j, std::int64_t k);

    std::vector<Point3> points_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

struct EigenFeatures {
    std::array<double, 3> lambda{};  // normalized, descending
    Vec3 normal = Vec3::UnitZ();     // eigenvector of the smallest eigenvalue
    Point3 centroid = Point3::Zero();
    double omnivariance = 0.0;
    double planarity = 0.0;
    double surface_variation = 0.0;
};

struct ScalarFeatures {
    double height = 0.0;
    double roughness = 0.0;
    double volume_density = 0.0;
    double verticality = 0.0;
};

struct FeatureVector {
    double height = 0.0;
    double roughness = 0.0;
    double volume_density = 0.0;
    double verticality = 0.0;
    double omnivariance = 0.0;
    double planarity = 0.0;
    double surface_variation = 0.0;
};

std::vector<Point3> positions_of(const PointCloud& cloud);

/// Exact radius query through a SpatialIndex built for this call.
std::vector<std::size_t> radius_neighbors(const PointCloud& cloud, const Point3& p, double r);

/// Covariance eigen-features. Throws InsufficientNeighborhood for fewer than
/// three points or a zero-spread neighborhood.
EigenFeatures eigen_features(std::span<const Point3> neighbors);

ScalarFeatures scalar_features(const SpatialIndex& index, double min_z, const Point3& p,
                               const NeighborhoodSpec& spec);
ScalarFeatures scalar_features(const PointCloud& cloud, const Point3& p, const NeighborhoodSpec& spec);

/// Per-point feature rows; rows with too few neighbors are NaN.
std::vector<FeatureVector> compute_features(const PointCloud& cloud, const NeighborhoodSpec& spec);

/// Point-cloud CSV with the seven feature columns appended.
void write_features_csv(const PointCloud& cloud, const std::vector<FeatureVector>& features,
                        const std::filesystem::path& path);

}  // namespace facref
