#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facref/geometry.hpp"

namespace facref {

enum class SurfaceType { Wall, Roof, Ground };
enum class OpeningKind { Window, Door };

std::string_view surface_type_name(SurfaceType t);  // "WallSurface", ...
std::optional<SurfaceType> surface_type_from_name(std::string_view name);
std::string_view opening_kind_name(OpeningKind k);  // "Window" / "Door"
std::optional<OpeningKind> opening_kind_from_name(std::string_view name);

using Triangle = std::array<Point3, 3>;

struct Surface {
    std::string id;
    SurfaceType type = SurfaceType::Wall;
    PlanarPolygon polygon;

    bool operator==(const Surface&) const = default;
};

/// Window or door solid placed on a façade.
struct OpeningSolid {
    std::string id;
    OpeningKind kind = OpeningKind::Window;
    std::string library_entry;
    std::vector<Triangle> triangles;  // world frame
    Point3 anchor = Point3::Zero();   // bottom-left corner of the front face
    double width = 0.0;
    double height = 0.0;
    double depth = 0.0;
    std::string parent;  // surface id

    bool operator==(const OpeningSolid&) const = default;
};

struct BuildingModel {
    std::string id;
    int lod = 2;
    std::vector<Surface> surfaces;
    std::vector<OpeningSolid> openings;

    /// Checks lod, id uniqueness, polygon planarity and opening parent links.
    void validate() const;

    const Surface* find_surface(std::string_view id) const;
    std::vector<const Surface*> walls() const;

    bool operator==(const BuildingModel&) const = default;
};

BuildingModel read_building_json(const std::filesystem::path& path);
BuildingModel building_from_json_text(const std::string& text);
void write_building_json(const BuildingModel& model, const std::filesystem::path& path);
std::string building_to_json_text(const BuildingModel& model);

BuildingModel read_citygml_subset(const std::filesystem::path& path);
BuildingModel citygml_from_text(const std::string& text);
void write_citygml_subset(const BuildingModel& model, const std::filesystem::path& path);
std::string citygml_to_text(const BuildingModel& model);

/// Dispatches on the file extension: .gml/.xml -> CityGML subset, otherwise JSON.
BuildingModel read_building(const std::filesystem::path& path);
void write_building(const BuildingModel& model, const std::filesystem::path& path);

}  // namespace facref
