#include "facref/shape_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "facref/errors.hpp"

namespace facref {

BinaryMask::BinaryMask(int r, int c, double cell_size) : rows(r), cols(c), cell(cell_size) {
    if (r < 0 || c < 0) throw DegenerateGeometry("mask dimensions must be non-negative");
    bits.assign(static_cast<std::size_t>(r) * c, 0);
}

BinaryMask BinaryMask::from_cells(const std::vector<std::pair<int, int>>& cells, int rows, int cols, double cell) {
    BinaryMask m(rows, cols, cell);
    for (const auto& [r, c] : cells) m.set(r, c);
    return m;
}

bool BinaryMask::get(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols) return false;
    return bits[static_cast<std::size_t>(r) * cols + c] != 0;
}

void BinaryMask::set(int r, int c, bool v) { bits.at(static_cast<std::size_t>(r) * cols + c) = v ? 1 : 0; }

std::size_t BinaryMask::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

std::vector<std::pair<int, int>> BinaryMask::cells() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (get(r, c)) out.emplace_back(r, c);
        }
    }
    return out;
}

BinaryMask holes_of(const BinaryMask& mask) {
    BinaryMask outside(mask.rows, mask.cols, mask.cell);
    std::deque<std::pair<int, int>> queue;
    auto seed = [&](int r, int c) {
        if (mask.get(r, c) || outside.get(r, c)) return;
        outside.set(r, c);
        queue.emplace_back(r, c);
    };
    for (int r = 0; r < mask.rows; ++r) {
        seed(r, 0);
        seed(r, mask.cols - 1);
    }
    for (int c = 0; c < mask.cols; ++c) {
        seed(0, c);
        seed(mask.rows - 1, c);
    }
    constexpr int dr[4] = {1, -1, 0, 0};
    constexpr int dc[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            const int nr = r + dr[k], nc = c + dc[k];
            if (nr < 0 || nr >= mask.rows || nc < 0 || nc >= mask.cols) continue;
            seed(nr, nc);
        }
    }
    BinaryMask holes(mask.rows, mask.cols, mask.cell);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) holes.bits[i] = !mask.bits[i] && !outside.bits[i];
    return holes;
}

double completeness_index(const BinaryMask& mask) {
    const std::size_t holes = holes_of(mask).count();
    if (holes == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(mask.count()) / static_cast<double>(holes);
}

namespace {

BinaryMask apply_se(const BinaryMask& mask, int se_size, bool erode_mode) {
    if (se_size < 1) throw ConfigError("structuring element size must be at least 1");
    const int lo = -(se_size - 1) / 2;
    const int hi = lo + se_size - 1;
    BinaryMask out(mask.rows, mask.cols, mask.cell);
    for (int r = 0; r < mask.rows; ++r) {
        for (int c = 0; c < mask.cols; ++c) {
            bool v = erode_mode;
            for (int dr = lo; dr <= hi && v == erode_mode; ++dr) {
                for (int dc = lo; dc <= hi; ++dc) {
                    // Dilation reflects the element; for odd squares the reflection is the same set.
                    const bool b = erode_mode ? mask.get(r + dr, c + dc) : mask.get(r - dr, c - dc);
                    if (b != erode_mode) {
                        v = !erode_mode;
                        break;
                    }
                }
            }
            out.set(r, c, v);
        }
    }
    return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int se_size) { return apply_se(mask, se_size, true); }

BinaryMask dilate(const BinaryMask& mask, int se_size) { return apply_se(mask, se_size, false); }

BinaryMask morph_open(const BinaryMask& mask, int se_size) { return dilate(erode(mask, se_size), se_size); }

Rect2 min_bbox(const std::vector<std::pair<int, int>>& cells, double cell, double u0, double v0) {
    if (cells.empty()) throw DegenerateGeometry("bounding box of an empty cluster");
    int rmin = cells.front().first, rmax = rmin, cmin = cells.front().second, cmax = cmin;
    for (const auto& [r, c] : cells) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    return {u0 + cmin * cell, v0 + rmin * cell, (cmax - cmin + 1) * cell, (rmax - rmin + 1) * cell};
}

std::vector<std::size_t> filter_candidates(const std::vector<CellCluster>& clusters, const TextureLayer& layer,
                                           const ShapeParams& params) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const double area = static_cast<double>(clusters[k].cells.size()) * layer.cell * layer.cell;
        if (area < params.b_s) continue;
        const auto mask = BinaryMask::from_cells(clusters[k].cells, layer.rows, layer.cols, layer.cell);
        if (completeness_index(mask) < params.r_cp_t) continue;
        keep.push_back(k);
    }
    return keep;
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw DegenerateGeometry("percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(pct / 100.0 * n - 1e-9)));
    return values[std::min(rank, values.size()) - 1];
}

std::vector<OpeningCandidate> rectangularity_filter(const std::vector<OpeningCandidate>& candidates,
                                                    const ShapeParams& params) {
    if (candidates.size() < static_cast<std::size_t>(std::max(params.n_min, 0))) return candidates;
    std::vector<double> idx;
    for (const auto& c : candidates) idx.push_back(c.rectangularity);
    const double up = nearest_rank_percentile(idx, params.pe_up);
    const double lo = nearest_rank_percentile(idx, params.pe_lo);
    std::vector<OpeningCandidate> out;
    for (const auto& c : candidates) {
        if (c.rectangularity > up || c.rectangularity < lo) continue;
        out.push_back(c);
    }
    return out;
}

ShapeResult extract_shapes(const std::vector<CellCluster>& clusters, const TextureLayer& layer,
                           const ShapeParams& params) {
    ShapeResult res;
    std::vector<std::size_t> openings;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (clusters[k].kind != ClusterKind::Other) openings.push_back(k);
    }
    const auto kept = filter_candidates(clusters, layer, params);
    std::vector<OpeningCandidate> candidates;
    for (const std::size_t k : kept) {
        const auto& cl = clusters[k];
        if (cl.kind == ClusterKind::Other) continue;
        const auto mask = BinaryMask::from_cells(cl.cells, layer.rows, layer.cols, layer.cell);
        const auto opened = morph_open(mask, params.se_size);
        const auto cells = opened.cells();
        if (cells.empty()) {
            ++res.rejected_opening;
            continue;
        }
        OpeningCandidate c;
        c.facade_id = layer.facade_id;
        c.cluster = k;
        c.kind = cl.kind;
        c.bbox = min_bbox(cells, layer.cell, layer.u0, layer.v0);
        c.area = static_cast<double>(cl.cells.size()) * layer.cell * layer.cell;
        c.completeness = completeness_index(mask);
        c.rectangularity = c.bbox.width / c.bbox.height;
        candidates.push_back(c);
    }
    res.rejected_filter = openings.size() - candidates.size() - res.rejected_opening;
    res.accepted = rectangularity_filter(candidates, params);
    res.rejected_rectangularity = candidates.size() - res.accepted.size();
    return res;
}

}  // namespace facref
