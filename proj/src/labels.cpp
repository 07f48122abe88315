#include "facref/labels.hpp"

namespace facref {

namespace {
constexpr std::array<std::string_view, kLabelCount> kNames = {
    "arch", "column", "molding", "floor", "door", "window", "wall", "other"};
}

std::string_view label_name(Label l) { return kNames[index_of(l)]; }

std::optional<Label> label_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        if (kNames[i] == name) return kAllLabels[i];
    }
    return std::nullopt;
}

std::optional<Label> label_from_id(int id) {
    if (id < 0 || id >= static_cast<int>(kLabelCount)) return std::nullopt;
    return kAllLabels[static_cast<std::size_t>(id)];
}

Label argmax_label(const LabelProbs& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kLabelCount; ++i) {
        if (p[i] > p[best]) best = i;
    }
    return kAllLabels[best];
}

LabelProbs one_hot(Label l) {
    LabelProbs p{};
    p[index_of(l)] = 1.0;
    return p;
}

}  // namespace facref
