#include "facref/conflict_textures.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

namespace {

std::uint16_t face_of(const OccupancyGrid& grid, const Surface& facade) {
    const auto face = grid.face_index(facade.id);
    if (!face) throw LinkError(fmt::format("façade '{}' was not populated into the grid", facade.id));
    return *face;
}

}  // namespace

TextureLayer model_compare(const OccupancyGrid& grid, const Surface& facade) {
    auto layer = TextureLayer::for_polygon(LayerKind::Model, facade.id, facade.polygon, grid.voxel_size(),
                                           static_cast<int>(ModelCellLabel::Unknown));
    const std::uint16_t face = face_of(grid, facade);
    const std::size_t n = layer.labels.size();
    std::vector<double> occ(n, -1.0), emp(n, -1.0);
    grid.for_each([&](const VoxelKey& key, const Voxel& v) {
        if (!v.has_face(face)) return;
        const auto cell = layer.cell_of_point(grid.center_of(key));
        if (!cell) return;
        const auto i = layer.index(cell->first, cell->second);
        const double p = grid.occupancy(v);
        switch (grid.state(v)) {
            case VoxelState::Occupied: occ[i] = std::max(occ[i], p); break;
            case VoxelState::Empty: emp[i] = std::max(emp[i], 1.0 - p); break;
            case VoxelState::Unknown: break;
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (occ[i] >= 0.0) {
            layer.labels[i] = static_cast<int>(ModelCellLabel::Confirmed);
            layer.probs[i] = occ[i];
        } else if (emp[i] >= 0.0) {
            layer.labels[i] = static_cast<int>(ModelCellLabel::Conflicted);
            layer.probs[i] = emp[i];
        }
    }
    return layer;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

FusionResult fuse_points(OccupancyGrid& grid, PointCloud& cloud, const FusionParams& params) {
    FusionResult result;
    result.dynamic.assign(cloud.size(), 0);
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (const auto key = grid.key_of(cloud.points[i].position)) members[morton_code(*key)].push_back(i);
    }
    std::vector<std::uint64_t> codes;
    codes.reserve(members.size());
    for (const auto& [code, _] : members) codes.push_back(code);
    std::sort(codes.begin(), codes.end());

    std::vector<double> scores;
    for (const auto code : codes) {
        const auto& idx = members[code];
        LabelProbs sum{};
        for (const auto i : idx) {
            for (std::size_t l = 0; l < kLabelCount; ++l) sum[l] += cloud.points[i].prob[l];
        }
        const Label candidate = argmax_label(sum);
        scores.clear();
        for (const auto i : idx) scores.push_back(cloud.points[i].prob[index_of(candidate)]);
        Voxel& v = grid.touch(from_morton(code));
        v.point_count = static_cast<std::uint32_t>(idx.size());
        v.fused_label = candidate;
        v.p_exist = grid.occupancy(v) * median(scores);
        v.is_static = v.p_exist >= params.p_static;
        if (v.is_static) {
            ++result.static_voxels;
            continue;
        }
        ++result.dynamic_voxels;
        for (const auto i : idx) {
            cloud.points[i].prob = one_hot(Label::Other);
            result.dynamic[i] = 1;
        }
    }
    return result;
}

TextureLayer points_compare(const OccupancyGrid& grid, const Surface& facade) {
    auto layer = TextureLayer::for_polygon(LayerKind::Points, facade.id, facade.polygon, grid.voxel_size(), kNoData);
    const std::uint16_t face = face_of(grid, facade);
    struct Best {
        double dist = std::numeric_limits<double>::infinity();
        double p_exist = -1.0;
        std::uint64_t code = 0;
        Label label = Label::Other;
    };
    std::vector<Best> best(layer.labels.size());
    grid.for_each([&](const VoxelKey& key, const Voxel& v) {
        if (!v.is_static || !v.fused_label || !v.has_face(face)) return;
        const PlaneCoords c = project_to_plane(grid.center_of(key), layer.frame);
        const auto cell = layer.cell_of(c.u, c.v);
        if (!cell) return;
        Best& b = best[layer.index(cell->first, cell->second)];
        const double d = std::abs(c.d);
        const std::uint64_t code = morton_code(key);
        const bool better = d < b.dist - 1e-12 ||
                            (d <= b.dist + 1e-12 && (v.p_exist > b.p_exist || (v.p_exist == b.p_exist && code < b.code)));
        if (better) b = {d, v.p_exist, code, *v.fused_label};
    });
    for (std::size_t i = 0; i < best.size(); ++i) {
        if (best[i].p_exist < 0.0) continue;
        layer.labels[i] = static_cast<int>(index_of(best[i].label));
        layer.probs[i] = best[i].p_exist;
    }
    return layer;
}

std::optional<std::pair<int, int>> voxel_cell(const OccupancyGrid& grid, const TextureLayer& layer,
                                              const VoxelKey& key) {
    const auto face = grid.face_index(layer.facade_id);
    if (!face) return std::nullopt;
    const Voxel* v = grid.find(key);
    if (!v || !v->has_face(*face)) return std::nullopt;
    return layer.cell_of_point(grid.center_of(key));
}

}  // namespace facref
