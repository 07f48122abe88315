#pragma once

#include <array>
#include <string>
#include <vector>

#include "facref/geometry.hpp"
#include "facref/labels.hpp"
#include "facref/point_cloud.hpp"

namespace facref {

using ConfusionCounts = std::array<std::array<std::size_t, kLabelCount>, kLabelCount>;  // [truth][predicted]

struct SegMetrics {
    ConfusionCounts confusion{};
    std::size_t total = 0;
    double oa = 0.0;
    std::array<bool, kLabelCount> present{};  // label occurs in the truth
    LabelProbs precision{};
    LabelProbs recall{};
    LabelProbs f1{};
    LabelProbs iou{};
    // Unweighted means over labels present in the truth.
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_f1 = 0.0;
    double mean_iou = 0.0;
};

SegMetrics seg_metrics_from_confusion(const ConfusionCounts& confusion);

/// Scores `pred`'s argmax labels against `truth`'s true labels, point by point.
/// Points without a true label are skipped. Throws SchemaError on size mismatch.
SegMetrics seg_metrics(const PointCloud& pred, const PointCloud& truth);

double iou_rect(const Rect2& a, const Rect2& b);

struct DetBox {
    std::string facade_id;
    Rect2 box;
};

struct DetMetrics {
    std::size_t ao = 0, mo = 0, d = 0, tp = 0, fp = 0, fn = 0, tp_measured = 0;
    double dr_ao = 0.0, fr_ao = 0.0, dr_mo = 0.0, fr_mo = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (prediction, truth)
    std::vector<double> ious;                                  // per match
    double median_iou = 0.0;
    double mean_iou = 0.0;
};

/// Greedy one-to-one matching, highest IoU first, pairs on the same façade with IoU >= threshold.
DetMetrics det_metrics(const std::vector<DetBox>& predicted, const std::vector<DetBox>& truth,
                       const std::vector<char>& measured, double threshold = 0.5);

/// Rates from counts: DR-AO = TP/AO, DR-MO = TP_measured/MO, FR = FP/D (0 when a denominator is 0).
void fill_rates(DetMetrics& m);

}  // namespace facref
