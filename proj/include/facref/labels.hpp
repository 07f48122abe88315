#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace facref {

/// Façade point classes in their fixed column order.
enum class Label : std::uint8_t { Arch = 0, Column, Molding, Floor, Door, Window, Wall, Other };

inline constexpr std::size_t kLabelCount = 8;

using LabelProbs = std::array<double, kLabelCount>;

inline constexpr std::array<Label, kLabelCount> kAllLabels = {
    Label::Arch, Label::Column, Label::Molding, Label::Floor,
    Label::Door, Label::Window, Label::Wall,    Label::Other};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

std::string_view label_name(Label l);
std::optional<Label> label_from_name(std::string_view name);
std::optional<Label> label_from_id(int id);

/// Index of the largest probability; ties resolve to the lower id.
Label argmax_label(const LabelProbs& p);

LabelProbs one_hot(Label l);

}  // namespace facref
