#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "facref/building.hpp"
#include "facref/config.hpp"
#include "facref/occupancy_grid.hpp"
#include "facref/params.hpp"
#include "facref/point_cloud.hpp"
#include "facref/texture.hpp"

namespace facref {

using ModelEvidence = std::array<double, kModelStates>;
using PointsEvidence = std::array<double, kEvidenceStates>;

/// Target node O conditioned on model (M) and points (S) comparison nodes.
struct NetworkSpec {
    CptTable cpt = kDefaultCpt;
    double cl_model = 0.9;
    double cl_points = 0.7;
    double p_t = 0.7;
};

/// Throws ConfigError for CPT entries or confidences outside [0, 1].
NetworkSpec load_cpt(const Config& config);
void validate_network(const NetworkSpec& spec);

/// CL * obs + (1 - CL) / |states|.
std::vector<double> soft_evidence(const std::vector<double>& observed, double cl);

/// S-node state of a semantic label; arch and column count as wall.
std::size_t evidence_state(Label l);

ModelEvidence model_evidence(ModelCellLabel label, double cl);
/// NoData carries no information about S and maps to uniform evidence.
PointsEvidence points_evidence(int points_code, double cl);

/// Exact marginalization over the 3 x 6 parent states.
double infer_cell(const ModelEvidence& m, const PointsEvidence& s, const CptTable& cpt);

/// Posterior layer: probability = P(opening), label = High iff probability > P_t.
TextureLayer infer_layer(const TextureLayer& model_layer, const TextureLayer& points_layer, const NetworkSpec& spec);

enum class ClusterKind { Window, Door, Other };

std::string_view cluster_kind_name(ClusterKind k);

struct CellCluster {
    std::vector<std::pair<int, int>> cells;  // (row, col)
    ClusterKind kind = ClusterKind::Window;
    double mean_posterior = 0.0;
    int row_min = 0, row_max = 0, col_min = 0, col_max = 0;
};

/// 8-connected components of high cells with their opening kind.
std::vector<CellCluster> decide_and_cluster(const TextureLayer& posterior, const TextureLayer& points_layer,
                                            const BnParams& params);

struct BackProjectStats {
    std::size_t to_window = 0;
    std::size_t to_door = 0;
    std::size_t to_molding = 0;
    std::size_t to_wall = 0;
};

/// Writes cell decisions back onto the points inside the voxels of this façade.
BackProjectStats back_project(const std::vector<CellCluster>& clusters, const TextureLayer& posterior,
                              const TextureLayer& points_layer, const OccupancyGrid& grid, PointCloud& cloud,
                              const BnParams& params);

}  // namespace facref
