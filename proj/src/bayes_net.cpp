#include "facref/bayes_net.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <fmt/format.h>

#include "facref/conflict_textures.hpp"
#include "facref/errors.hpp"

namespace facref {

void validate_network(const NetworkSpec& spec) {
    for (std::size_t m = 0; m < kModelStates; ++m) {
        for (std::size_t s = 0; s < kEvidenceStates; ++s) {
            const double v = spec.cpt[m][s];
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError(fmt::format("key 'bn.cpt.{}.{}': probability {} outside [0,1]", kModelStateNames[m],
                                              kEvidenceStateNames[s], v));
            }
        }
    }
    for (const double cl : {spec.cl_model, spec.cl_points, spec.p_t}) {
        if (!(cl >= 0.0 && cl <= 1.0)) throw ConfigError("network confidences must lie in [0,1]");
    }
}

NetworkSpec load_cpt(const Config& config) {
    NetworkSpec spec{config.bn.cpt, config.bn.cl_model, config.bn.cl_points, config.bn.p_t};
    validate_network(spec);
    return spec;
}

std::vector<double> soft_evidence(const std::vector<double>& observed, double cl) {
    if (observed.empty()) throw ConfigError("evidence needs at least one state");
    const double floor = (1.0 - cl) / static_cast<double>(observed.size());
    std::vector<double> out(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) out[i] = cl * observed[i] + floor;
    return out;
}

std::size_t evidence_state(Label l) {
    switch (l) {
        case Label::Molding: return 0;
        case Label::Floor: return 1;
        case Label::Door: return 2;
        case Label::Window: return 3;
        case Label::Arch:
        case Label::Column:
        case Label::Wall: return 4;
        case Label::Other: return 5;
    }
    return 5;
}

ModelEvidence model_evidence(ModelCellLabel label, double cl) {
    std::vector<double> obs(kModelStates, 0.0);
    obs[static_cast<std::size_t>(label)] = 1.0;
    const auto ev = soft_evidence(obs, cl);
    ModelEvidence out{};
    std::copy(ev.begin(), ev.end(), out.begin());
    return out;
}

PointsEvidence points_evidence(int points_code, double cl) {
    PointsEvidence out{};
    if (points_code == kNoData) {
        out.fill(1.0 / static_cast<double>(kEvidenceStates));
        return out;
    }
    const auto label = label_from_id(points_code);
    if (!label) throw SchemaError(fmt::format("invalid points-layer code {}", points_code));
    std::vector<double> obs(kEvidenceStates, 0.0);
    obs[evidence_state(*label)] = 1.0;
    const auto ev = soft_evidence(obs, cl);
    std::copy(ev.begin(), ev.end(), out.begin());
    return out;
}

double infer_cell(const ModelEvidence& m, const PointsEvidence& s, const CptTable& cpt) {
    double p = 0.0;
    for (std::size_t i = 0; i < kModelStates; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < kEvidenceStates; ++j) row += s[j] * cpt[i][j];
        p += m[i] * row;
    }
    return p;
}

TextureLayer infer_layer(const TextureLayer& model_layer, const TextureLayer& points_layer, const NetworkSpec& spec) {
    if (model_layer.rows != points_layer.rows || model_layer.cols != points_layer.cols) {
        throw SchemaError("texture layers differ in size");
    }
    TextureLayer out = model_layer;
    out.kind = LayerKind::Posterior;
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        const auto m = model_evidence(static_cast<ModelCellLabel>(model_layer.labels[i]), spec.cl_model);
        const auto s = points_evidence(points_layer.labels[i], spec.cl_points);
        const double p = infer_cell(m, s, spec.cpt);
        out.probs[i] = p;
        out.labels[i] = static_cast<int>(p > spec.p_t ? PosteriorCell::High : PosteriorCell::Low);
    }
    return out;
}

std::string_view cluster_kind_name(ClusterKind k) {
    switch (k) {
        case ClusterKind::Window: return "Window";
        case ClusterKind::Door: return "Door";
        case ClusterKind::Other: return "Other";
    }
    return "Other";
}

namespace {

ClusterKind classify(const CellCluster& c, const TextureLayer& points_layer, const BnParams& params) {
    std::size_t windows = 0, doors = 0, others = 0;
    for (const auto& [r, col] : c.cells) {
        const int code = points_layer.label(r, col);
        if (code == kNoData) continue;
        if (code == static_cast<int>(index_of(Label::Window))) {
            ++windows;
        } else if (code == static_cast<int>(index_of(Label::Door))) {
            ++doors;
        } else {
            ++others;
        }
    }
    const bool at_bottom = c.row_min < params.door_bottom_rows;
    if (others > windows + doors && 2 * others > c.cells.size()) return ClusterKind::Other;
    if (windows + doors == 0) {
        const int height = c.row_max - c.row_min + 1;
        const int width = c.col_max - c.col_min + 1;
        return at_bottom && height >= width ? ClusterKind::Door : ClusterKind::Window;
    }
    if (doors > windows && at_bottom) return ClusterKind::Door;
    return ClusterKind::Window;
}

}  // namespace

std::vector<CellCluster> decide_and_cluster(const TextureLayer& posterior, const TextureLayer& points_layer,
                                            const BnParams& params) {
    const int high = static_cast<int>(PosteriorCell::High);
    std::vector<char> seen(posterior.labels.size(), 0);
    std::vector<CellCluster> clusters;
    for (int r = 0; r < posterior.rows; ++r) {
        for (int c = 0; c < posterior.cols; ++c) {
            if (posterior.label(r, c) != high || seen[posterior.index(r, c)]) continue;
            CellCluster cl;
            cl.row_min = cl.row_max = r;
            cl.col_min = cl.col_max = c;
            std::deque<std::pair<int, int>> queue{{r, c}};
            seen[posterior.index(r, c)] = 1;
            double sum = 0.0;
            while (!queue.empty()) {
                const auto [qr, qc] = queue.front();
                queue.pop_front();
                cl.cells.emplace_back(qr, qc);
                sum += posterior.prob(qr, qc);
                cl.row_min = std::min(cl.row_min, qr);
                cl.row_max = std::max(cl.row_max, qr);
                cl.col_min = std::min(cl.col_min, qc);
                cl.col_max = std::max(cl.col_max, qc);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = qr + dr, nc = qc + dc;
                        if (!posterior.in_range(nr, nc)) continue;
                        const auto ni = posterior.index(nr, nc);
                        if (seen[ni] || posterior.labels[ni] != high) continue;
                        seen[ni] = 1;
                        queue.emplace_back(nr, nc);
                    }
                }
            }
            std::sort(cl.cells.begin(), cl.cells.end());
            cl.mean_posterior = sum / static_cast<double>(cl.cells.size());
            cl.kind = classify(cl, points_layer, params);
            clusters.push_back(std::move(cl));
        }
    }
    return clusters;
}

BackProjectStats back_project(const std::vector<CellCluster>& clusters, const TextureLayer& posterior,
                              const TextureLayer& points_layer, const OccupancyGrid& grid, PointCloud& cloud,
                              const BnParams& params) {
    const std::size_t n = posterior.labels.size();
    std::vector<int> owner(n, -1);
    std::vector<int> dist(n, std::numeric_limits<int>::max());
    std::deque<std::pair<int, int>> queue;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const bool opening = clusters[k].kind != ClusterKind::Other;
        for (const auto& [r, c] : clusters[k].cells) {
            owner[posterior.index(r, c)] = static_cast<int>(k);
            if (!opening) continue;
            dist[posterior.index(r, c)] = 0;
            queue.emplace_back(r, c);
        }
    }
    // Chebyshev distance to the nearest opening cluster cell.
    while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        const int d = dist[posterior.index(r, c)];
        if (d >= params.d_mold) continue;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int nr = r + dr, nc = c + dc;
                if (!posterior.in_range(nr, nc)) continue;
                const auto ni = posterior.index(nr, nc);
                if (dist[ni] <= d + 1) continue;
                dist[ni] = d + 1;
                queue.emplace_back(nr, nc);
            }
        }
    }

    const auto face = grid.face_index(posterior.facade_id);
    if (!face) throw LinkError(fmt::format("façade '{}' was not populated into the grid", posterior.facade_id));
    const int window_code = static_cast<int>(index_of(Label::Window));
    const int door_code = static_cast<int>(index_of(Label::Door));

    BackProjectStats stats;
    for (auto& rec : cloud.points) {
        const auto key = grid.key_of(rec.position);
        if (!key) continue;
        const Voxel* v = grid.find(*key);
        if (!v || !v->has_face(*face)) continue;
        const auto cell = posterior.cell_of_point(grid.center_of(*key));
        if (!cell) continue;
        const auto i = posterior.index(cell->first, cell->second);
        if (owner[i] >= 0) {
            switch (clusters[static_cast<std::size_t>(owner[i])].kind) {
                case ClusterKind::Window:
                    rec.prob = one_hot(Label::Window);
                    ++stats.to_window;
                    break;
                case ClusterKind::Door:
                    rec.prob = one_hot(Label::Door);
                    ++stats.to_door;
                    break;
                case ClusterKind::Other: break;
            }
            continue;
        }
        const int s = points_layer.labels[i];
        if (s != window_code && s != door_code) continue;
        if (dist[i] <= params.d_mold) {
            rec.prob = one_hot(Label::Molding);
            ++stats.to_molding;
        } else {
            rec.prob = one_hot(Label::Wall);
            ++stats.to_wall;
        }
    }
    return stats;
}

}  // namespace facref
