#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "facref/building.hpp"

namespace facref {

/// Unit opening model: front face spans [0,1] x [0,1] in (width, height),
/// depth runs from 0 to `depth` into the wall. Origin at the minimum corner.
struct OpeningLibraryEntry {
    std::string name;
    OpeningKind kind = OpeningKind::Window;
    double depth = 0.2;
    std::vector<Triangle> triangles;  // local (width, height, depth) coordinates

    void validate() const;
    bool operator==(const OpeningLibraryEntry&) const = default;
};

/// Axis-aligned box of the given depth as 12 triangles.
std::vector<Triangle> unit_box_triangles(double depth);

/// Parametric library: one box window and one box door.
std::vector<OpeningLibraryEntry> default_opening_library(double depth = 0.2);

std::vector<OpeningLibraryEntry> read_opening_library(const std::filesystem::path& path);
std::vector<OpeningLibraryEntry> opening_library_from_text(const std::string& text);
std::string opening_library_to_text(const std::vector<OpeningLibraryEntry>& entries);

}  // namespace facref
