#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "facref/bayes_net.hpp"
#include "facref/building.hpp"
#include "facref/config.hpp"
#include "facref/conflict_textures.hpp"
#include "facref/opening_library.hpp"
#include "facref/point_cloud.hpp"
#include "facref/reconstruction.hpp"
#include "facref/shape_pipeline.hpp"
#include "facref/texture.hpp"
#include "facref/uncertainty.hpp"

namespace facref {

struct PipelineOptions {
    std::optional<std::filesystem::path> grid_dump;
    std::optional<std::filesystem::path> dump_shapes;
    std::optional<std::filesystem::path> texture_dir;  // exports model, points and posterior layers
};

struct FacadeResult {
    std::string facade_id;
    TextureLayer model_layer;
    TextureLayer points_layer;
    TextureLayer posterior;
    std::vector<CellCluster> clusters;
    BackProjectStats back_projection;
    ShapeResult shapes;
    std::vector<DispatchDiagnostic> diagnostics;
};

struct PipelineResult {
    FacadeConfidence confidence;
    BuildingModel lod3;
    PointCloud refined;
    std::size_t rays = 0;
    std::size_t voxels = 0;
    FusionResult fusion;
    std::vector<FacadeResult> facades;
    std::vector<OpeningCandidate> accepted;
    std::vector<std::string> warnings;
};

/// Runs every stage in order; a failing stage raises StageError naming it.
PipelineResult run_pipeline(const BuildingModel& model, const PointCloud& cloud, const Config& config,
                            const std::vector<OpeningLibraryEntry>& library, const PipelineOptions& options = {});

void write_shapes_csv(const std::vector<OpeningCandidate>& candidates, const std::filesystem::path& path);

nlohmann::json pipeline_report(const PipelineResult& result, const Config& config);
std::string pipeline_summary(const PipelineResult& result);

}  // namespace facref
