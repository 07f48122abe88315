#pragma once

#include <optional>
#include <vector>

#include "facref/building.hpp"
#include "facref/occupancy_grid.hpp"
#include "facref/params.hpp"
#include "facref/point_cloud.hpp"
#include "facref/texture.hpp"

namespace facref {

/// Projects voxels carrying the façade's id onto its texture: Confirmed if any is
/// occupied, else Conflicted if any is empty, else Unknown.
TextureLayer model_compare(const OccupancyGrid& grid, const Surface& facade);

struct FusionResult {
    std::vector<char> dynamic;  // per point: inside a dynamic voxel
    std::size_t static_voxels = 0;
    std::size_t dynamic_voxels = 0;
};

/// Fuses per-point class probabilities into every voxel that holds points and
/// splits voxels into static and dynamic by P_ex = P(A) * P(B). Points inside
/// dynamic voxels are relabeled `other`; coordinates are never touched.
FusionResult fuse_points(OccupancyGrid& grid, PointCloud& cloud, const FusionParams& params);

/// Median of `values` (mean of the two middle elements for even sizes).
double median(std::vector<double> values);

/// Nearest static voxel's fused label per cell; cells without one are NoData.
TextureLayer points_compare(const OccupancyGrid& grid, const Surface& facade);

/// Cell a voxel of this façade projects to, or nullopt if the voxel does not carry the façade id.
std::optional<std::pair<int, int>> voxel_cell(const OccupancyGrid& grid, const TextureLayer& layer,
                                              const VoxelKey& key);

}  // namespace facref
