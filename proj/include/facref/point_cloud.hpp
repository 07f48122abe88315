#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "facref/geometry.hpp"
#include "facref/labels.hpp"

namespace facref {

/// One laser return: hit point, sensor position and per-class probabilities.
struct PointRecord {
    Point3 position = Point3::Zero();
    Point3 sensor = Point3::Zero();
    std::optional<Label> true_label;
    LabelProbs prob{};

    Label predicted() const { return argmax_label(prob); }
};

struct PointCloud {
    std::vector<PointRecord> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

inline constexpr const char* kPointCloudHeader =
    "x,y,z,sx,sy,sz,label,p_arch,p_column,p_molding,p_floor,p_door,p_window,p_wall,p_other";

/// Throws SchemaError when the probabilities are out of range or do not sum to one.
void validate_probs(const LabelProbs& p, double tolerance = 1e-6);

/// Rounds to 1e-6 steps so that the rounded values still sum to exactly one.
std::array<long long, kLabelCount> quantize_probs(const LabelProbs& p);

PointCloud read_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud(std::istream& in);
void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);
void write_point_cloud(const PointCloud& cloud, std::ostream& out);

}  // namespace facref
