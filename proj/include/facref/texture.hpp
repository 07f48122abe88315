#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facref/geometry.hpp"
#include "facref/labels.hpp"

namespace facref {

enum class LayerKind { Model, Points, Posterior };

enum class ModelCellLabel { Confirmed = 0, Conflicted = 1, Unknown = 2 };

/// Points-layer codes 0..7 are semantic labels; this code marks cells without static voxels.
inline constexpr int kNoData = static_cast<int>(kLabelCount);

/// Posterior-layer codes.
enum class PosteriorCell { Low = 0, High = 1 };

std::string_view model_cell_name(ModelCellLabel l);

/// 2D raster on a façade plane. Cell (0, 0) sits at the minimum (u, v) corner;
/// rows grow with v (upwards for a vertical façade).
struct TextureLayer {
    LayerKind kind = LayerKind::Model;
    std::string facade_id;
    PlaneFrame frame;
    double cell = 0.1;
    double u0 = 0.0;
    double v0 = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<int> labels;
    std::vector<double> probs;

    /// Sized to cover the polygon's planar extent, filled with `fill_label` and probability 0.
    static TextureLayer for_polygon(LayerKind kind, std::string facade_id, const PlanarPolygon& poly,
                                    double cell, int fill_label);

    std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * cols + col; }
    int label(int row, int col) const { return labels[index(row, col)]; }
    double prob(int row, int col) const { return probs[index(row, col)]; }
    void set(int row, int col, int label, double p);

    bool in_range(int row, int col) const { return row >= 0 && row < rows && col >= 0 && col < cols; }
    /// Cell holding in-plane coordinates (u, v); nullopt outside the raster.
    std::optional<std::pair<int, int>> cell_of(double u, double v) const;
    std::optional<std::pair<int, int>> cell_of_point(const Point3& p) const;
    std::size_t count(int label) const;

    std::string label_text(int code) const;
};

/// Writes `<stem>.pgm` (probability x 255, P5) and `<stem>.csv` (label names); row 0 is the top row.
void export_texture(const TextureLayer& layer, const std::filesystem::path& stem);

}  // namespace facref
