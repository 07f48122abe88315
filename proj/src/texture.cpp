#include "facref/texture.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

std::string_view model_cell_name(ModelCellLabel l) {
    switch (l) {
        case ModelCellLabel::Confirmed: return "confirmed";
        case ModelCellLabel::Conflicted: return "conflicted";
        case ModelCellLabel::Unknown: return "unknown";
    }
    return "unknown";
}

TextureLayer TextureLayer::for_polygon(LayerKind kind, std::string facade_id, const PlanarPolygon& poly, double cell,
                                       int fill_label) {
    if (!(cell > 0.0)) throw ConfigError("texture cell size must be positive");
    TextureLayer t;
    t.kind = kind;
    t.facade_id = std::move(facade_id);
    t.frame = fit_plane_frame(poly);
    const Rect2 ext = planar_extent(poly, t.frame);
    t.cell = cell;
    t.u0 = ext.u_min;
    t.v0 = ext.v_min;
    t.cols = std::max(1, static_cast<int>(std::ceil(ext.width / cell - 1e-9)));
    t.rows = std::max(1, static_cast<int>(std::ceil(ext.height / cell - 1e-9)));
    t.labels.assign(static_cast<std::size_t>(t.rows) * t.cols, fill_label);
    t.probs.assign(t.labels.size(), 0.0);
    return t;
}

void TextureLayer::set(int row, int col, int label, double p) {
    const auto i = index(row, col);
    labels[i] = label;
    probs[i] = p;
}

std::optional<std::pair<int, int>> TextureLayer::cell_of(double u, double v) const {
    const int col = static_cast<int>(std::floor((u - u0) / cell));
    const int row = static_cast<int>(std::floor((v - v0) / cell));
    if (!in_range(row, col)) return std::nullopt;
    return std::make_pair(row, col);
}

std::optional<std::pair<int, int>> TextureLayer::cell_of_point(const Point3& p) const {
    const PlaneCoords c = project_to_plane(p, frame);
    return cell_of(c.u, c.v);
}

std::size_t TextureLayer::count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::string TextureLayer::label_text(int code) const {
    switch (kind) {
        case LayerKind::Model: return std::string(model_cell_name(static_cast<ModelCellLabel>(code)));
        case LayerKind::Points: {
            if (code == kNoData) return "nodata";
            const auto l = label_from_id(code);
            return l ? std::string(label_name(*l)) : "invalid";
        }
        case LayerKind::Posterior: return code == static_cast<int>(PosteriorCell::High) ? "high" : "low";
    }
    return "invalid";
}

void export_texture(const TextureLayer& layer, const std::filesystem::path& stem) {
    auto pgm_path = stem;
    pgm_path += ".pgm";
    auto csv_path = stem;
    csv_path += ".csv";
    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw ParseError(fmt::format("cannot write '{}'", pgm_path.string()));
    pgm << fmt::format("P5\n{} {}\n255\n", layer.cols, layer.rows);
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw ParseError(fmt::format("cannot write '{}'", csv_path.string()));
    for (int r = layer.rows - 1; r >= 0; --r) {
        for (int c = 0; c < layer.cols; ++c) {
            const double p = std::clamp(layer.prob(r, c), 0.0, 1.0);
            pgm.put(static_cast<char>(static_cast<unsigned char>(std::lround(p * 255.0))));
            if (c) csv << ',';
            csv << layer.label_text(layer.label(r, c));
        }
        csv << '\n';
    }
}

}  // namespace facref
