#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace facref {

/// Global-position uncertainty of the point cloud (1) and the model walls (2).
struct UncertaintySpec {
    double e1 = 0.3;   // m
    double e2 = 0.03;  // m
    double cl1 = 0.9;
    double cl2 = 0.9;
    double z1 = 1.64;
    double z2 = 1.64;

    bool operator==(const UncertaintySpec&) const = default;
};

struct GridParams {
    double voxel_size = 0.1;  // m
    double prior = 0.5;
    double l_occ = 0.85;
    double l_emp = -0.4;
    double l_min = -2.0;
    double l_max = 3.5;
    double state_epsilon = 1e-6;
    // Assign a fixed probability to traversed-only voxels instead of accumulating.
    bool fixed_empty = false;
    double fixed_empty_p = 0.4;

    bool operator==(const GridParams&) const = default;
};

struct NeighborhoodSpec {
    double r_eigen = 0.8;  // m
    double r_vert = 0.4;   // m

    bool operator==(const NeighborhoodSpec&) const = default;
};

struct FusionParams {
    double p_static = 0.7;

    bool operator==(const FusionParams&) const = default;
};

/// Rows of the opening CPT: model-comparison states.
inline constexpr std::size_t kModelStates = 3;
/// Columns of the opening CPT: point-comparison states.
inline constexpr std::size_t kEvidenceStates = 6;

inline constexpr std::array<std::string_view, kModelStates> kModelStateNames = {"confirmed", "conflicted", "unknown"};
inline constexpr std::array<std::string_view, kEvidenceStates> kEvidenceStateNames = {
    "molding", "floor", "door", "window", "wall", "other"};

/// P(opening | model state, points state).
using CptTable = std::array<std::array<double, kEvidenceStates>, kModelStates>;

// clang-format off
inline constexpr CptTable kDefaultCpt = {{
    //  molding floor  door  window wall  other
    {{  0.05,   0.05,  0.30, 0.30,  0.05, 0.10 }},  // confirmed
    {{  0.80,   0.80,  0.95, 0.95,  0.80, 0.70 }},  // conflicted
    {{  0.20,   0.20,  0.60, 0.60,  0.20, 0.20 }},  // unknown
}};
// clang-format on

struct BnParams {
    double cl_model = 0.9;
    double cl_points = 0.7;
    double p_t = 0.7;
    int d_mold = 2;            // cells
    int door_bottom_rows = 2;  // a door cluster must reach this close to the façade base
    CptTable cpt = kDefaultCpt;

    bool operator==(const BnParams&) const = default;
};

struct ShapeParams {
    double b_s = 0.3;     // m^2
    double r_cp_t = 0.1;
    double pe_up = 95.0;  // percentile
    double pe_lo = 5.0;
    int n_min = 5;
    int se_size = 3;      // square structuring element edge, cells

    bool operator==(const ShapeParams&) const = default;
};

struct ReconParams {
    double recess_m = 0.0;

    bool operator==(const ReconParams&) const = default;
};

struct EvalParams {
    double iou_match = 0.5;
    int k_min = 20;

    bool operator==(const EvalParams&) const = default;
};

struct SimParams {
    std::uint64_t seed = 20230601;

    bool operator==(const SimParams&) const = default;
};

}  // namespace facref
