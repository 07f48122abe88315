#include "facref/pipeline.hpp"

#include <cctype>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "facref/errors.hpp"
#include "facref/occupancy_grid.hpp"

namespace facref {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    spdlog::debug("stage {}", name);
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

PipelineResult run_pipeline(const BuildingModel& model, const PointCloud& cloud, const Config& config,
                            const std::vector<OpeningLibraryEntry>& library, const PipelineOptions& options) {
    stage("config", [&] {
        validate_config(config);
        model.validate();
        return 0;
    });
    PipelineResult res;
    res.refined = cloud;
    if (cloud.empty()) res.warnings.push_back("point cloud is empty; no openings can be detected");

    res.confidence = stage("uncertainty", [&] {
        validate_uncertainty(config.uncertainty);
        return combine(config.uncertainty);
    });

    auto grid = stage("grid_insert", [&] {
        const Aabb bounds = grid_bounds(model, cloud, res.confidence.upper_ci + 2.0 * config.grid.voxel_size);
        if (bounds.empty()) throw DegenerateGeometry("nothing to build a grid around");
        OccupancyGrid g(bounds, config.grid);
        res.rays = g.insert_cloud(cloud);
        return g;
    });

    stage("model_populate", [&] {
        populate_model(grid, model, res.confidence);
        return 0;
    });

    res.fusion = stage("fuse_points", [&] { return fuse_points(grid, res.refined, config.fusion); });
    res.voxels = grid.size();
    if (options.grid_dump) grid.dump_csv(*options.grid_dump);

    const NetworkSpec net = stage("bn_inference", [&] { return load_cpt(config); });
    std::vector<OpeningSolid> solids;

    for (const Surface* wall : model.walls()) {
        try {
            yaw_of_normal(fit_plane_frame(wall->polygon).n);
        } catch (const NotAFacade&) {
            res.warnings.push_back(fmt::format("surface '{}' is horizontal; skipped", wall->id));
            continue;
        }
        FacadeResult fr;
        fr.facade_id = wall->id;
        stage("textures", [&] {
            fr.model_layer = model_compare(grid, *wall);
            fr.points_layer = points_compare(grid, *wall);
            return 0;
        });
        fr.posterior = stage("bn_inference", [&] { return infer_layer(fr.model_layer, fr.points_layer, net); });
        fr.clusters = stage("cluster", [&] { return decide_and_cluster(fr.posterior, fr.points_layer, config.bn); });
        fr.back_projection = stage("back_project", [&] {
            return back_project(fr.clusters, fr.posterior, fr.points_layer, grid, res.refined, config.bn);
        });
        const auto routed = dispatch(fr.clusters, wall->id);
        fr.diagnostics = routed.diagnostics;
        fr.shapes = stage("shape_pipeline", [&] { return extract_shapes(fr.clusters, fr.posterior, config.shape); });
        stage("reconstruction", [&] {
            std::size_t n = 0;
            for (const auto& c : fr.shapes.accepted) {
                const OpeningKind kind = c.kind == ClusterKind::Door ? OpeningKind::Door : OpeningKind::Window;
                const auto& entry = select_entry(library, kind);
                const auto fit = compute_fit(c.bbox, fr.posterior.frame, entry, config.recon.recess_m);
                solids.push_back(
                    apply_fit(entry, fit, fmt::format("{}_{}_{}", wall->id, lower(opening_kind_name(kind)), n++),
                              wall->id));
                res.accepted.push_back(c);
            }
            return 0;
        });
        if (options.texture_dir) {
            export_texture(fr.model_layer, *options.texture_dir / (wall->id + "_model"));
            export_texture(fr.points_layer, *options.texture_dir / (wall->id + "_points"));
            export_texture(fr.posterior, *options.texture_dir / (wall->id + "_posterior"));
        }
        res.facades.push_back(std::move(fr));
    }

    res.lod3 = stage("assemble", [&] { return assemble_lod3(model, solids); });
    if (options.dump_shapes) write_shapes_csv(res.accepted, *options.dump_shapes);
    for (const auto& w : res.warnings) spdlog::warn("{}", w);
    return res;
}

void write_shapes_csv(const std::vector<OpeningCandidate>& candidates, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write '{}'", path.string()));
    out << "facade_id,kind,u_min,v_min,a,b,area,completeness,rectangularity\n";
    for (const auto& c : candidates) {
        fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{:.6f}\n", c.facade_id, cluster_kind_name(c.kind),
                   c.bbox.u_min, c.bbox.v_min, c.bbox.width, c.bbox.height, c.area,
                   std::isinf(c.completeness) ? std::string("inf") : fmt::format("{:.6f}", c.completeness),
                   c.rectangularity);
    }
}

nlohmann::json pipeline_report(const PipelineResult& result, const Config& config) {
    using nlohmann::json;
    json j;
    j["confidence"] = {{"sigma", result.confidence.sigma},
                       {"upper_ci", result.confidence.upper_ci},
                       {"cl", result.confidence.cl}};
    j["rays"] = result.rays;
    j["voxels"] = result.voxels;
    j["static_voxels"] = result.fusion.static_voxels;
    j["dynamic_voxels"] = result.fusion.dynamic_voxels;
    j["lod"] = result.lod3.lod;
    j["openings"] = result.lod3.openings.size();
    j["facades"] = json::array();
    for (const auto& f : result.facades) {
        json jf;
        jf["id"] = f.facade_id;
        jf["rows"] = f.model_layer.rows;
        jf["cols"] = f.model_layer.cols;
        jf["confirmed"] = f.model_layer.count(static_cast<int>(ModelCellLabel::Confirmed));
        jf["conflicted"] = f.model_layer.count(static_cast<int>(ModelCellLabel::Conflicted));
        jf["unknown"] = f.model_layer.count(static_cast<int>(ModelCellLabel::Unknown));
        jf["nodata"] = f.points_layer.count(kNoData);
        jf["high"] = f.posterior.count(static_cast<int>(PosteriorCell::High));
        jf["clusters"] = f.clusters.size();
        jf["accepted"] = f.shapes.accepted.size();
        jf["rejected_filter"] = f.shapes.rejected_filter;
        jf["rejected_opening"] = f.shapes.rejected_opening;
        jf["rejected_rectangularity"] = f.shapes.rejected_rectangularity;
        jf["back_projected"] = {{"window", f.back_projection.to_window},
                                {"door", f.back_projection.to_door},
                                {"molding", f.back_projection.to_molding},
                                {"wall", f.back_projection.to_wall}};
        jf["diagnostics"] = json::array();
        for (const auto& d : f.diagnostics) jf["diagnostics"].push_back(d.message);
        j["facades"].push_back(std::move(jf));
    }
    j["candidates"] = json::array();
    for (const auto& c : result.accepted) {
        j["candidates"].push_back({{"facade_id", c.facade_id},
                                   {"kind", cluster_kind_name(c.kind)},
                                   {"u_min", c.bbox.u_min},
                                   {"v_min", c.bbox.v_min},
                                   {"a", c.bbox.width},
                                   {"b", c.bbox.height}});
    }
    j["warnings"] = result.warnings;
    j["config"] = config_to_text(config);
    return j;
}

std::string pipeline_summary(const PipelineResult& result) {
    std::string out = fmt::format("upper CI {:.2f} m, {} rays, {} voxels ({} static, {} dynamic)\n",
                                  result.confidence.upper_ci, result.rays, result.voxels, result.fusion.static_voxels,
                                  result.fusion.dynamic_voxels);
    for (const auto& f : result.facades) {
        out += fmt::format("  {}: {} conflicted cells, {} clusters, {} openings\n", f.facade_id,
                           f.model_layer.count(static_cast<int>(ModelCellLabel::Conflicted)), f.clusters.size(),
                           f.shapes.accepted.size());
    }
    out += fmt::format("LoD{} model with {} openings\n", result.lod3.lod, result.lod3.openings.size());
    for (const auto& w : result.warnings) out += "warning: " + w + "\n";
    return out;
}

}  // namespace facref
