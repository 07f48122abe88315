#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "facref/building.hpp"
#include "facref/config.hpp"
#include "facref/errors.hpp"
#include "facref/evaluation.hpp"
#include "facref/features.hpp"
#include "facref/opening_library.hpp"
#include "facref/pipeline.hpp"
#include "facref/point_cloud.hpp"
#include "facref/scan_simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void setup_logging() {
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("FACREF_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

facref::Config load_config(const std::string& path) {
    return path.empty() ? facref::Config{} : facref::read_config(path);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw facref::ParseError(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw facref::ParseError(fmt::format("cannot open '{}'", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw facref::ParseError(e.what());
    }
}

json truth_json(const facref::BuildingModel& model, const facref::SimResult& sim, int k_min) {
    json j;
    j["openings"] = json::array();
    const auto boxes = facref::ground_truth_boxes(model);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        j["openings"].push_back({{"id", b.id},
                                 {"facade_id", b.facade_id},
                                 {"kind", facref::opening_kind_name(b.kind)},
                                 {"u_min", b.box.u_min},
                                 {"v_min", b.box.v_min},
                                 {"a", b.box.width},
                                 {"b", b.box.height},
                                 {"rays", sim.opening_rays[i]},
                                 {"measured", sim.opening_rays[i] >= static_cast<std::size_t>(k_min)}});
    }
    return j;
}

json seg_json(const facref::SegMetrics& m) {
    json per = json::object();
    for (const auto l : facref::kAllLabels) {
        const auto i = facref::index_of(l);
        if (!m.present[i]) continue;
        per[std::string(facref::label_name(l))] = {
            {"precision", m.precision[i]}, {"recall", m.recall[i]}, {"f1", m.f1[i]}, {"iou", m.iou[i]}};
    }
    return {{"points", m.total},        {"oa", m.oa},         {"mean_precision", m.mean_precision},
            {"mean_recall", m.mean_recall}, {"mean_f1", m.mean_f1}, {"mean_iou", m.mean_iou},
            {"per_label", per}};
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"LoD2 to LoD3 façade refinement from laser scans"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;

    // simulate
    auto* sim = app.add_subcommand("simulate", "Synthesize a laser scan of a ground-truth LoD3 model");
    std::string sim_model, sim_spec, sim_out, sim_truth;
    sim->add_option("--model", sim_model, "Ground-truth building model (.json or .gml)")->required();
    sim->add_option("--spec", sim_spec, "Scan specification (INI)")->required();
    sim->add_option("--out", sim_out, "Output point cloud CSV")->required();
    sim->add_option("--truth-out", sim_truth, "Ground-truth opening boxes (JSON)");
    sim->add_option("--config", config_path, "Pipeline configuration");
    sim->add_option("--seed", seed, "Override the random seed");

    // features
    auto* feat = app.add_subcommand("features", "Append geometric features to a point cloud");
    std::string feat_in, feat_out;
    feat->add_option("--in", feat_in, "Input point cloud CSV")->required();
    feat->add_option("--out", feat_out, "Output CSV with feature columns")->required();
    feat->add_option("--config", config_path, "Pipeline configuration");

    // refine
    auto* refine = app.add_subcommand("refine", "Run the full refinement pipeline");
    std::string ref_model, ref_cloud, ref_library, ref_out_model, ref_out_cloud, ref_report, grid_dump, dump_shapes,
        texture_dir;
    refine->add_option("--model", ref_model, "LoD2 building model (.json or .gml)")->required();
    refine->add_option("--cloud", ref_cloud, "Point cloud CSV")->required();
    refine->add_option("--library", ref_library, "Opening library JSON (default: built-in boxes)");
    refine->add_option("--out-model", ref_out_model, "LoD3 output model (.json or .gml)")->required();
    refine->add_option("--out-cloud", ref_out_cloud, "Refined point cloud CSV");
    refine->add_option("--report", ref_report, "JSON report");
    refine->add_option("--grid-dump", grid_dump, "Voxel dump CSV");
    refine->add_option("--dump-shapes", dump_shapes, "Accepted opening candidates CSV");
    refine->add_option("--textures", texture_dir, "Directory for texture layer exports");
    refine->add_option("--config", config_path, "Pipeline configuration");

    // textures
    auto* tex = app.add_subcommand("textures", "Export one texture layer per façade");
    std::string tex_model, tex_cloud, tex_dir, layer = "model";
    tex->add_option("--model", tex_model, "LoD2 building model")->required();
    tex->add_option("--cloud", tex_cloud, "Point cloud CSV")->required();
    tex->add_option("--out-dir", tex_dir, "Output directory")->required();
    tex->add_option("--layer", layer, "Layer to export")->check(CLI::IsMember({"model", "points", "posterior"}));
    tex->add_option("--config", config_path, "Pipeline configuration");

    // eval
    auto* eval = app.add_subcommand("eval", "Segmentation and detection metrics");
    std::string ev_pred, ev_truth, ev_model, ev_boxes, ev_out;
    eval->add_option("--pred", ev_pred, "Refined point cloud CSV");
    eval->add_option("--truth", ev_truth, "Point cloud CSV with true labels");
    eval->add_option("--model", ev_model, "Refined LoD3 model");
    eval->add_option("--truth-boxes", ev_boxes, "Ground-truth opening boxes from `simulate --truth-out`");
    eval->add_option("--out", ev_out, "JSON metrics output");
    eval->add_option("--config", config_path, "Pipeline configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            auto config = load_config(config_path);
            const auto model = facref::read_building(sim_model);
            auto spec = facref::read_scan_spec(sim_spec);
            if (seed) spec.seed = *seed;
            const auto result = facref::simulate(model, spec);
            facref::write_point_cloud(result.cloud, sim_out);
            if (!sim_truth.empty()) write_text(sim_truth, truth_json(model, result, config.eval.k_min).dump(1) + "\n");
            fmt::print("{} points\n", result.cloud.size());
        } else if (feat->parsed()) {
            const auto config = load_config(config_path);
            const auto cloud = facref::read_point_cloud(feat_in);
            facref::write_features_csv(cloud, facref::compute_features(cloud, config.features), feat_out);
        } else if (refine->parsed()) {
            const auto config = load_config(config_path);
            const auto model = facref::read_building(ref_model);
            const auto cloud = facref::read_point_cloud(ref_cloud);
            const auto library = ref_library.empty() ? facref::default_opening_library()
                                                     : facref::read_opening_library(ref_library);
            facref::PipelineOptions opts;
            if (!grid_dump.empty()) opts.grid_dump = grid_dump;
            if (!dump_shapes.empty()) opts.dump_shapes = dump_shapes;
            if (!texture_dir.empty()) {
                fs::create_directories(texture_dir);
                opts.texture_dir = texture_dir;
            }
            const auto result = facref::run_pipeline(model, cloud, config, library, opts);
            facref::write_building(result.lod3, ref_out_model);
            if (!ref_out_cloud.empty()) facref::write_point_cloud(result.refined, ref_out_cloud);
            if (!ref_report.empty()) write_text(ref_report, facref::pipeline_report(result, config).dump(1) + "\n");
            fmt::print("{}", facref::pipeline_summary(result));
        } else if (tex->parsed()) {
            const auto config = load_config(config_path);
            const auto model = facref::read_building(tex_model);
            const auto cloud = facref::read_point_cloud(tex_cloud);
            const auto result = facref::run_pipeline(model, cloud, config, facref::default_opening_library());
            fs::create_directories(tex_dir);
            for (const auto& f : result.facades) {
                const auto& l = layer == "model" ? f.model_layer : layer == "points" ? f.points_layer : f.posterior;
                facref::export_texture(l, fs::path(tex_dir) / (f.facade_id + "_" + layer));
            }
        } else if (eval->parsed()) {
            const auto config = load_config(config_path);
            json out;
            if (!ev_pred.empty() || !ev_truth.empty()) {
                if (ev_pred.empty() || ev_truth.empty()) throw facref::SchemaError("--pred and --truth go together");
                const auto m = facref::seg_metrics(facref::read_point_cloud(ev_pred), facref::read_point_cloud(ev_truth));
                out["segmentation"] = seg_json(m);
            }
            if (!ev_model.empty() || !ev_boxes.empty()) {
                if (ev_model.empty() || ev_boxes.empty()) throw facref::SchemaError("--model and --truth-boxes go together");
                std::vector<facref::DetBox> pred, truth;
                std::vector<char> measured;
                for (const auto& b : facref::ground_truth_boxes(facref::read_building(ev_model))) {
                    pred.push_back({b.facade_id, b.box});
                }
                const auto jt = read_json(ev_boxes);
                try {
                    for (const auto& o : jt.at("openings")) {
                        truth.push_back({o.at("facade_id").get<std::string>(),
                                         {o.at("u_min").get<double>(), o.at("v_min").get<double>(),
                                          o.at("a").get<double>(), o.at("b").get<double>()}});
                        measured.push_back(o.at("measured").get<bool>() ? 1 : 0);
                    }
                } catch (const json::exception& e) {
                    throw facref::SchemaError(e.what());
                }
                const auto d = facref::det_metrics(pred, truth, measured, config.eval.iou_match);
                out["detection"] = {{"AO", d.ao},       {"MO", d.mo},       {"D", d.d},         {"TP", d.tp},
                                    {"FP", d.fp},       {"FN", d.fn},       {"DR_AO", d.dr_ao}, {"FR_AO", d.fr_ao},
                                    {"DR_MO", d.dr_mo}, {"FR_MO", d.fr_mo}, {"mIoU", d.median_iou},
                                    {"muIoU", d.mean_iou}};
            }
            const auto text = out.dump(1) + "\n";
            if (!ev_out.empty()) write_text(ev_out, text);
            std::cout << text;
        }
    } catch (const facref::StageError& e) {
        spdlog::error("stage '{}' failed: {}", e.stage(), e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
