#include "facref/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "facref/errors.hpp"

namespace facref {

double logodds(double p) { return std::log(p / (1.0 - p)); }

double prob(double l) { return 1.0 / (1.0 + std::exp(-l)); }

namespace {

std::uint64_t spread_bits(std::uint64_t x) {
    x &= 0x1fffff;
    x = (x | x << 32) & 0x1f00000000ffffULL;
    x = (x | x << 16) & 0x1f0000ff0000ffULL;
    x = (x | x << 8) & 0x100f00f00f00f00fULL;
    x = (x | x << 4) & 0x10c30c30c30c30c3ULL;
    x = (x | x << 2) & 0x1249249249249249ULL;
    return x;
}

std::uint32_t compact_bits(std::uint64_t x) {
    x &= 0x1249249249249249ULL;
    x = (x ^ (x >> 2)) & 0x10c30c30c30c30c3ULL;
    x = (x ^ (x >> 4)) & 0x100f00f00f00f00fULL;
    x = (x ^ (x >> 8)) & 0x1f0000ff0000ffULL;
    x = (x ^ (x >> 16)) & 0x1f00000000ffffULL;
    x = (x ^ (x >> 32)) & 0x1fffff;
    return static_cast<std::uint32_t>(x);
}

constexpr int kMaxDepth = 21;

}  // namespace

std::uint64_t morton_code(const VoxelKey& key) {
    return spread_bits(static_cast<std::uint64_t>(key.i)) | spread_bits(static_cast<std::uint64_t>(key.j)) << 1 |
           spread_bits(static_cast<std::uint64_t>(key.k)) << 2;
}

VoxelKey from_morton(std::uint64_t code) {
    return {static_cast<std::int32_t>(compact_bits(code)), static_cast<std::int32_t>(compact_bits(code >> 1)),
            static_cast<std::int32_t>(compact_bits(code >> 2))};
}

std::string_view voxel_state_name(VoxelState s) {
    switch (s) {
        case VoxelState::Occupied: return "occupied";
        case VoxelState::Empty: return "empty";
        case VoxelState::Unknown: return "unknown";
    }
    return "unknown";
}

bool Voxel::has_face(std::uint16_t face) const {
    return std::find(model_faces.begin(), model_faces.end(), face) != model_faces.end();
}

OccupancyGrid::OccupancyGrid(const Aabb& bounds, const GridParams& params) : params_(params) {
    if (!(params.voxel_size > 0.0)) throw ConfigError("voxel size must be positive");
    if (bounds.empty()) throw DegenerateGeometry("occupancy grid bounds are empty");
    const double vs = params.voxel_size;
    origin_ = (bounds.min / vs).array().floor().matrix() * vs;
    const Vec3 span = bounds.max - origin_;
    const double cells = std::max(1.0, std::ceil(span.maxCoeff() / vs - 1e-9) + 1.0);
    depth_ = 0;
    while (static_cast<double>(std::int64_t{1} << depth_) < cells) ++depth_;
    if (depth_ > kMaxDepth) throw ConfigError(fmt::format("grid needs octree depth {} (> {})", depth_, kMaxDepth));
}

Aabb OccupancyGrid::cube() const {
    Aabb b;
    b.min = origin_;
    b.max = origin_ + Vec3::Constant(voxel_size() * leaves_per_axis());
    return b;
}

std::optional<VoxelKey> OccupancyGrid::key_of(const Point3& p) const {
    const Vec3 g = (p - origin_) / voxel_size();
    const std::int32_t n = leaves_per_axis();
    VoxelKey key;
    std::int32_t* out[3] = {&key.i, &key.j, &key.k};
    for (int a = 0; a < 3; ++a) {
        const double f = std::floor(g[a]);
        if (!(f >= 0.0) || f >= n) return std::nullopt;
        *out[a] = static_cast<std::int32_t>(f);
    }
    return key;
}

Point3 OccupancyGrid::center_of(const VoxelKey& key) const {
    return origin_ + voxel_size() * Vec3(key.i + 0.5, key.j + 0.5, key.k + 0.5);
}

Aabb OccupancyGrid::box_of(const VoxelKey& key) const {
    Aabb b;
    b.min = origin_ + voxel_size() * Vec3(key.i, key.j, key.k);
    b.max = b.min + Vec3::Constant(voxel_size());
    return b;
}

Traversal OccupancyGrid::traverse(const Ray& r) const {
    if (!(r.length > 0.0)) throw EmptyTraversal("ray has zero length");
    Traversal out;
    const auto clip = clip_segment(r, cube());
    if (!clip) return out;
    const auto [t0, t1] = *clip;
    const bool end_inside = t1 >= r.length;
    if (end_inside) out.hit = key_of(r.end());

    const double vs = voxel_size();
    const std::int32_t n = leaves_per_axis();
    const Vec3 start = (r.at(t0) - origin_) / vs;
    std::array<std::int32_t, 3> cur{};
    std::array<std::int32_t, 3> step{};
    std::array<double, 3> t_max{};
    std::array<double, 3> t_delta{};
    for (int a = 0; a < 3; ++a) {
        cur[a] = std::clamp(static_cast<std::int32_t>(std::floor(start[a])), 0, n - 1);
        const double d = r.direction[a];
        if (d > 0.0) {
            step[a] = 1;
            t_delta[a] = vs / d;
            t_max[a] = (origin_[a] + (cur[a] + 1) * vs - r.origin[a]) / d;
        } else if (d < 0.0) {
            step[a] = -1;
            t_delta[a] = -vs / d;
            t_max[a] = (origin_[a] + cur[a] * vs - r.origin[a]) / d;
        } else {
            step[a] = 0;
            t_delta[a] = std::numeric_limits<double>::infinity();
            t_max[a] = std::numeric_limits<double>::infinity();
        }
    }

    const std::size_t guard = 3 * static_cast<std::size_t>(n) + 3;
    for (std::size_t it = 0; it < guard; ++it) {
        const VoxelKey key{cur[0], cur[1], cur[2]};
        if (out.hit && key == *out.hit) break;
        out.passed.push_back(key);
        int axis = 0;
        if (t_max[1] < t_max[axis]) axis = 1;
        if (t_max[2] < t_max[axis]) axis = 2;
        if (t_max[axis] >= t1) break;
        cur[axis] += step[axis];
        if (cur[axis] < 0 || cur[axis] >= n) break;
        t_max[axis] += t_delta[axis];
    }
    return out;
}

void OccupancyGrid::update(const VoxelKey& key, double delta) {
    Voxel& v = touch(key);
    v.log_odds = std::clamp(v.log_odds + delta, params_.l_min, params_.l_max);
}

void OccupancyGrid::insert_ray(const Ray& r) {
    const Traversal tr = traverse(r);
    for (const auto& key : tr.passed) {
        Voxel& v = touch(key);
        ++v.traversals;
        if (!params_.fixed_empty) v.log_odds = std::clamp(v.log_odds + params_.l_emp, params_.l_min, params_.l_max);
    }
    if (tr.hit) {
        Voxel& v = touch(*tr.hit);
        ++v.hits;
        v.log_odds = std::clamp(v.log_odds + params_.l_occ, params_.l_min, params_.l_max);
    }
}

std::size_t OccupancyGrid::insert_cloud(const PointCloud& cloud) {
    std::size_t inserted = 0;
    for (const auto& rec : cloud.points) {
        const Vec3 d = rec.position - rec.sensor;
        if (d.norm() <= 0.0) continue;
        insert_ray(Ray::between(rec.sensor, rec.position));
        ++inserted;
    }
    return inserted;
}

const Voxel* OccupancyGrid::find(const VoxelKey& key) const {
    const auto it = voxels_.find(morton_code(key));
    return it == voxels_.end() ? nullptr : &it->second;
}

Voxel& OccupancyGrid::touch(const VoxelKey& key) {
    auto [it, inserted] = voxels_.try_emplace(morton_code(key));
    if (inserted) it->second.log_odds = logodds(params_.prior);
    return it->second;
}

double OccupancyGrid::occupancy(const Voxel& v) const {
    if (params_.fixed_empty && v.hits == 0 && v.traversals > 0) return params_.fixed_empty_p;
    return prob(v.log_odds);
}

VoxelState OccupancyGrid::state(const Voxel& v) const {
    if (!v.touched()) return VoxelState::Unknown;
    const double p = occupancy(v);
    if (p > 0.5 + params_.state_epsilon) return VoxelState::Occupied;
    if (p < 0.5 - params_.state_epsilon) return VoxelState::Empty;
    return VoxelState::Unknown;
}

VoxelState OccupancyGrid::state(const VoxelKey& key) const {
    const Voxel* v = find(key);
    return v ? state(*v) : VoxelState::Unknown;
}

std::vector<std::pair<VoxelKey, const Voxel*>> OccupancyGrid::sorted_voxels() const {
    std::vector<std::pair<std::uint64_t, const Voxel*>> codes;
    codes.reserve(voxels_.size());
    for (const auto& [code, v] : voxels_) codes.emplace_back(code, &v);
    std::sort(codes.begin(), codes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<VoxelKey, const Voxel*>> out;
    out.reserve(codes.size());
    for (const auto& [code, v] : codes) out.emplace_back(from_morton(code), v);
    return out;
}

std::uint16_t OccupancyGrid::register_face(const std::string& id) {
    if (const auto idx = face_index(id)) return *idx;
    face_ids_.push_back(id);
    return static_cast<std::uint16_t>(face_ids_.size() - 1);
}

std::optional<std::uint16_t> OccupancyGrid::face_index(const std::string& id) const {
    const auto it = std::find(face_ids_.begin(), face_ids_.end(), id);
    if (it == face_ids_.end()) return std::nullopt;
    return static_cast<std::uint16_t>(it - face_ids_.begin());
}

void OccupancyGrid::dump_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write grid dump '{}'", path.string()));
    out << "i,j,k,cx,cy,cz,log_odds,hits,traversals,state,faces,fused_label,p_exist,static\n";
    for (const auto& [key, v] : sorted_voxels()) {
        const Point3 c = center_of(key);
        std::string faces;
        for (std::size_t f = 0; f < v->model_faces.size(); ++f) {
            if (f) faces += ';';
            faces += face_ids_[v->model_faces[f]];
        }
        fmt::print(out, "{},{},{},{:.4f},{:.4f},{:.4f},{:.6f},{},{},{},{},{},{:.6f},{}\n", key.i, key.j, key.k, c.x(),
                   c.y(), c.z(), v->log_odds, v->hits, v->traversals, voxel_state_name(state(*v)), faces,
                   v->fused_label ? label_name(*v->fused_label) : "", v->p_exist, v->is_static ? 1 : 0);
    }
}

void populate_model(OccupancyGrid& grid, const BuildingModel& model, const FacadeConfidence& conf) {
    const double band = conf.upper_ci + 1e-9;
    const std::int32_t n = grid.leaves_per_axis();
    for (const Surface* wall : model.walls()) {
        const std::uint16_t face = grid.register_face(wall->id);
        const PreparedPolygon prep(wall->polygon);
        Aabb box = bounds_of(wall->polygon.exterior);
        box.min.array() -= band;
        box.max.array() += band;
        const Vec3 lo = (box.min - grid.origin()) / grid.voxel_size();
        const Vec3 hi = (box.max - grid.origin()) / grid.voxel_size();
        std::array<std::int32_t, 3> a{}, b{};
        for (int ax = 0; ax < 3; ++ax) {
            a[ax] = std::clamp(static_cast<std::int32_t>(std::floor(lo[ax])), 0, n - 1);
            b[ax] = std::clamp(static_cast<std::int32_t>(std::floor(hi[ax])), 0, n - 1);
        }
        for (std::int32_t i = a[0]; i <= b[0]; ++i) {
            for (std::int32_t j = a[1]; j <= b[1]; ++j) {
                for (std::int32_t k = a[2]; k <= b[2]; ++k) {
                    const VoxelKey key{i, j, k};
                    const PlaneCoords c = project_to_plane(grid.center_of(key), prep.frame);
                    if (std::abs(c.d) > band) continue;
                    if (!prep.contains({c.u, c.v})) continue;
                    Voxel& v = grid.touch(key);
                    if (!v.has_face(face)) v.model_faces.push_back(face);
                }
            }
        }
    }
}

Aabb grid_bounds(const BuildingModel& model, const PointCloud& cloud, double pad) {
    Aabb b;
    for (const auto& s : model.surfaces) b.extend(bounds_of(s.polygon.exterior));
    for (const auto& p : cloud.points) {
        b.extend(p.position);
        b.extend(p.sensor);
    }
    if (b.empty()) return b;
    b.min.array() -= pad;
    b.max.array() += pad;
    return b;
}

}  // namespace facref
