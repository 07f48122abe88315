#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "facref/building.hpp"
#include "facref/geometry.hpp"
#include "facref/labels.hpp"
#include "facref/params.hpp"
#include "facref/point_cloud.hpp"
#include "facref/uncertainty.hpp"

namespace facref {

/// Natural-log odds.
double logodds(double p);
double prob(double l);

/// Integer leaf coordinates inside the octree cube, each in [0, 2^depth).
struct VoxelKey {
    std::int32_t i = 0;
    std::int32_t j = 0;
    std::int32_t k = 0;

    bool operator==(const VoxelKey&) const = default;
    auto operator<=>(const VoxelKey&) const = default;
};

/// Interleaved bits of (i, j, k): the leaf's path from the octree root.
std::uint64_t morton_code(const VoxelKey& key);
VoxelKey from_morton(std::uint64_t code);

enum class VoxelState { Occupied, Empty, Unknown };

std::string_view voxel_state_name(VoxelState s);

struct Voxel {
    double log_odds = 0.0;
    std::uint32_t hits = 0;
    std::uint32_t traversals = 0;
    std::vector<std::uint16_t> model_faces;  // indices into OccupancyGrid::face_ids()

    // Filled by point fusion.
    std::uint32_t point_count = 0;
    std::optional<Label> fused_label;
    double p_exist = 0.0;
    bool is_static = false;

    bool touched() const { return hits > 0 || traversals > 0; }
    bool has_face(std::uint16_t face) const;
};

/// Ordered leaves crossed by a ray before reaching the one holding its end point.
struct Traversal {
    std::vector<VoxelKey> passed;
    std::optional<VoxelKey> hit;  // absent when the end point lies outside the grid
};

/// Sparse octree occupancy grid. Leaves have edge `voxel_size`; the root cube
/// is the input bounds snapped to the voxel lattice and padded to 2^depth leaves.
/// Single writer: insertions must not run concurrently.
class OccupancyGrid {
public:
    OccupancyGrid(const Aabb& bounds, const GridParams& params);

    const GridParams& params() const { return params_; }
    double voxel_size() const { return params_.voxel_size; }
    int depth() const { return depth_; }
    std::int32_t leaves_per_axis() const { return std::int32_t{1} << depth_; }
    const Point3& origin() const { return origin_; }
    Aabb cube() const;

    std::optional<VoxelKey> key_of(const Point3& p) const;
    Point3 center_of(const VoxelKey& key) const;
    Aabb box_of(const VoxelKey& key) const;

    /// Throws EmptyTraversal for a zero-length ray. The segment is clipped to the cube.
    Traversal traverse(const Ray& r) const;

    /// Clamped log-odds update: hit leaf +l_occ, every passed leaf +l_emp.
    void insert_ray(const Ray& r);
    /// Inserts sensor->point rays in record order; returns the number inserted.
    std::size_t insert_cloud(const PointCloud& cloud);

    /// Clamped single update of one leaf.
    void update(const VoxelKey& key, double delta_log_odds);

    const Voxel* find(const VoxelKey& key) const;
    Voxel& touch(const VoxelKey& key);

    /// Occupancy probability; untouched leaves report the prior.
    double occupancy(const Voxel& v) const;
    VoxelState state(const Voxel& v) const;
    VoxelState state(const VoxelKey& key) const;

    std::size_t size() const { return voxels_.size(); }

    /// Leaves in Morton (octree) order.
    std::vector<std::pair<VoxelKey, const Voxel*>> sorted_voxels() const;

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [code, v] : voxels_) f(from_morton(code), v);
    }
    template <class F>
    void for_each_mut(F&& f) {
        for (auto& [code, v] : voxels_) f(from_morton(code), v);
    }

    std::uint16_t register_face(const std::string& id);
    const std::vector<std::string>& face_ids() const { return face_ids_; }
    std::optional<std::uint16_t> face_index(const std::string& id) const;

    void dump_csv(const std::filesystem::path& path) const;

private:
    GridParams params_;
    Point3 origin_;
    int depth_ = 0;
    std::unordered_map<std::uint64_t, Voxel> voxels_;
    std::vector<std::string> face_ids_;
};

/// Marks every leaf whose center lies within `conf.upper_ci` of a wall plane and
/// projects inside the wall polygon with that wall's face index.
void populate_model(OccupancyGrid& grid, const BuildingModel& model, const FacadeConfidence& conf);

/// Bounds that cover the model (padded by the CI band), every point and every sensor.
Aabb grid_bounds(const BuildingModel& model, const PointCloud& cloud, double pad);

}  // namespace facref
