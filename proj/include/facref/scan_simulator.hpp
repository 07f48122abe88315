#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "facref/building.hpp"
#include "facref/geometry.hpp"
#include "facref/labels.hpp"
#include "facref/point_cloud.hpp"

namespace facref {

/// Box present during the first round(active_fraction * passes) passes.
struct TransientObject {
    Aabb box;
    double active_fraction = 0.1;
    Label label = Label::Other;  // class the point labels claim for it
};

struct ScanSpec {
    std::vector<Point3> trajectory;
    double angular_resolution = 0.01;  // rad
    double max_range = 30.0;           // m
    double sigma_noise = 0.0;          // m
    double tau = 0.9;                  // opening transmission probability
    double epsilon = 0.1;              // label confusion
    int passes = 1;
    std::vector<TransientObject> transients;
    bool ground_plane = false;         // unbounded horizontal plane
    std::optional<double> ground_z;    // plane height; the model's lowest z when unset
    double interior_offset = 4.0;      // m behind the façade, seen only through openings
    std::uint64_t seed = 20230601;

    /// Throws SpecError.
    void validate() const;
};

struct SimResult {
    PointCloud cloud;
    std::vector<std::size_t> opening_rays;  // per model opening: rays that reached it
    std::vector<char> transient;            // per point: hit a transient object
};

/// Casts rays from every pose over the angular window of the model, once per pass.
/// Points are ordered by (pass, pose, ray).
SimResult simulate(const BuildingModel& model, const ScanSpec& spec);

/// INI text: [scan] scalars, [trajectory] poses = "x y z; x y z; ...", optional
/// [transient.N] sections with min, max, active_fraction and label.
ScanSpec parse_scan_spec(const std::string& text);
ScanSpec read_scan_spec(const std::filesystem::path& path);

struct GroundTruthOpening {
    std::string id;
    std::string facade_id;
    OpeningKind kind = OpeningKind::Window;
    Rect2 box;  // parent façade frame
};

std::vector<GroundTruthOpening> ground_truth_boxes(const BuildingModel& model);

using ConfusionMatrix = std::array<std::array<double, kLabelCount>, kLabelCount>;

/// 1 - eps on the diagonal, eps spread evenly elsewhere.
ConfusionMatrix uniform_confusion(double eps);

/// Redraws each labeled point's class from its row of `confusion`; the new
/// probability vector puts `confidence` on the drawn class and spreads the rest.
PointCloud corrupt_labels(const PointCloud& cloud, const ConfusionMatrix& confusion, std::uint64_t seed,
                          double confidence = 0.95);

}  // namespace facref
