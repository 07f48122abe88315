#include "facref/evaluation.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "facref/conflict_textures.hpp"
#include "facref/errors.hpp"

namespace facref {

SegMetrics seg_metrics_from_confusion(const ConfusionCounts& confusion) {
    SegMetrics m;
    m.confusion = confusion;
    std::size_t diag = 0;
    std::array<std::size_t, kLabelCount> row{}, col{};
    for (std::size_t t = 0; t < kLabelCount; ++t) {
        for (std::size_t p = 0; p < kLabelCount; ++p) {
            row[t] += confusion[t][p];
            col[p] += confusion[t][p];
            m.total += confusion[t][p];
        }
        diag += confusion[t][t];
    }
    m.oa = m.total ? static_cast<double>(diag) / static_cast<double>(m.total) : 0.0;
    std::size_t present = 0;
    for (std::size_t l = 0; l < kLabelCount; ++l) {
        const double tp = static_cast<double>(confusion[l][l]);
        const double fp = static_cast<double>(col[l]) - tp;
        const double fn = static_cast<double>(row[l]) - tp;
        m.precision[l] = col[l] ? tp / static_cast<double>(col[l]) : 0.0;
        m.recall[l] = row[l] ? tp / static_cast<double>(row[l]) : 0.0;
        const double pr = m.precision[l] + m.recall[l];
        m.f1[l] = pr > 0.0 ? 2.0 * m.precision[l] * m.recall[l] / pr : 0.0;
        m.iou[l] = tp + fp + fn > 0.0 ? tp / (tp + fp + fn) : 0.0;
        m.present[l] = row[l] > 0;
        if (!m.present[l]) continue;
        ++present;
        m.mean_precision += m.precision[l];
        m.mean_recall += m.recall[l];
        m.mean_f1 += m.f1[l];
        m.mean_iou += m.iou[l];
    }
    if (present) {
        const double n = static_cast<double>(present);
        m.mean_precision /= n;
        m.mean_recall /= n;
        m.mean_f1 /= n;
        m.mean_iou /= n;
    }
    return m;
}

SegMetrics seg_metrics(const PointCloud& pred, const PointCloud& truth) {
    if (pred.size() != truth.size()) {
        throw SchemaError(fmt::format("prediction has {} points, truth has {}", pred.size(), truth.size()));
    }
    ConfusionCounts c{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto& t = truth.points[i].true_label;
        if (!t) continue;
        ++c[index_of(*t)][index_of(pred.points[i].predicted())];
    }
    return seg_metrics_from_confusion(c);
}

double iou_rect(const Rect2& a, const Rect2& b) {
    const double w = std::max(0.0, std::min(a.u_max(), b.u_max()) - std::max(a.u_min, b.u_min));
    const double h = std::max(0.0, std::min(a.v_max(), b.v_max()) - std::max(a.v_min, b.v_min));
    const double inter = w * h;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

void fill_rates(DetMetrics& m) {
    auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
    m.dr_ao = ratio(m.tp, m.ao);
    m.dr_mo = ratio(m.tp_measured, m.mo);
    m.fr_ao = ratio(m.fp, m.d);
    m.fr_mo = ratio(m.fp, m.d);
}

DetMetrics det_metrics(const std::vector<DetBox>& predicted, const std::vector<DetBox>& truth,
                       const std::vector<char>& measured, double threshold) {
    if (measured.size() != truth.size()) throw SchemaError("one measured flag per truth box is required");
    DetMetrics m;
    m.ao = truth.size();
    m.mo = static_cast<std::size_t>(std::count(measured.begin(), measured.end(), 1));
    m.d = predicted.size();

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (predicted[p].facade_id != truth[t].facade_id) continue;
            const double iou = iou_rect(predicted[p].box, truth[t].box);
            if (iou >= threshold) pairs.emplace_back(iou, p, t);
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    std::vector<char> p_used(predicted.size(), 0), t_used(truth.size(), 0);
    for (const auto& [iou, p, t] : pairs) {
        if (p_used[p] || t_used[t]) continue;
        p_used[p] = t_used[t] = 1;
        m.matches.emplace_back(p, t);
        m.ious.push_back(iou);
        ++m.tp;
        if (measured[t]) ++m.tp_measured;
    }
    m.fp = m.d - m.tp;
    m.fn = m.ao - m.tp;
    fill_rates(m);
    if (!m.ious.empty()) {
        m.median_iou = median(m.ious);
        double sum = 0.0;
        for (const double v : m.ious) sum += v;
        m.mean_iou = sum / static_cast<double>(m.ious.size());
    }
    return m;
}

}  // namespace facref
