#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "facref/bayes_net.hpp"
#include "facref/geometry.hpp"
#include "facref/params.hpp"
#include "facref/texture.hpp"

namespace facref {

struct BinaryMask {
    int rows = 0;
    int cols = 0;
    double cell = 0.1;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int rows, int cols, double cell);
    static BinaryMask from_cells(const std::vector<std::pair<int, int>>& cells, int rows, int cols, double cell);

    bool get(int r, int c) const;
    void set(int r, int c, bool v = true);
    std::size_t count() const;
    std::vector<std::pair<int, int>> cells() const;

    bool operator==(const BinaryMask&) const = default;
};

/// Background cells that cannot reach the mask border through 4-connected background.
BinaryMask holes_of(const BinaryMask& mask);

/// Set cells / hole cells; +inf without holes.
double completeness_index(const BinaryMask& mask);

BinaryMask erode(const BinaryMask& mask, int se_size);
BinaryMask dilate(const BinaryMask& mask, int se_size);
/// Erosion then dilation with a centered se_size x se_size square; outside the mask counts as unset.
BinaryMask morph_open(const BinaryMask& mask, int se_size);

/// Tight box over the cells' outer edges in façade-plane meters.
Rect2 min_bbox(const std::vector<std::pair<int, int>>& cells, double cell, double u0 = 0.0, double v0 = 0.0);

struct OpeningCandidate {
    std::string facade_id;
    std::size_t cluster = 0;
    ClusterKind kind = ClusterKind::Window;
    Rect2 bbox;
    double area = 0.0;  // m^2 of the cluster before opening
    double completeness = 0.0;
    double rectangularity = 0.0;  // a / b
};

/// Keep iff area >= b_s and r_cp >= r_cp_t.
std::vector<std::size_t> filter_candidates(const std::vector<CellCluster>& clusters, const TextureLayer& layer,
                                           const ShapeParams& params);

/// Nearest-rank percentile of an unsorted sample (0 < pct <= 100).
double nearest_rank_percentile(std::vector<double> values, double pct);

/// Drops candidates whose a/b falls outside [P_lo, P_up] when at least n_min candidates exist.
std::vector<OpeningCandidate> rectangularity_filter(const std::vector<OpeningCandidate>& candidates,
                                                    const ShapeParams& params);

struct ShapeResult {
    std::vector<OpeningCandidate> accepted;
    std::size_t rejected_filter = 0;
    std::size_t rejected_opening = 0;
    std::size_t rejected_rectangularity = 0;
};

/// Area/completeness filter, morphological opening, min box, rectangularity rejection.
ShapeResult extract_shapes(const std::vector<CellCluster>& clusters, const TextureLayer& layer,
                           const ShapeParams& params);

}  // namespace facref
