#include "facref/building.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "facref/errors.hpp"

namespace facref {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kSurfaceNames = {"WallSurface", "RoofSurface", "GroundSurface"};

json point_to_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

Point3 point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw SchemaError("coordinate must be an array of 3 numbers");
    for (const auto& v : j) {
        if (!v.is_number()) throw SchemaError("coordinate must be an array of 3 numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json ring_to_json(const Ring& ring) {
    json a = json::array();
    for (const auto& p : ring) a.push_back(point_to_json(p));
    return a;
}

Ring ring_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("ring must be an array of coordinates");
    Ring r;
    for (const auto& p : j) r.push_back(point_from_json(p));
    return r;
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(fmt::format("missing key '{}'", key));
    return j.at(key);
}

}  // namespace

std::string_view surface_type_name(SurfaceType t) { return kSurfaceNames[static_cast<std::size_t>(t)]; }

std::optional<SurfaceType> surface_type_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kSurfaceNames.size(); ++i) {
        if (kSurfaceNames[i] == name) return static_cast<SurfaceType>(i);
    }
    return std::nullopt;
}

std::string_view opening_kind_name(OpeningKind k) { return k == OpeningKind::Window ? "Window" : "Door"; }

std::optional<OpeningKind> opening_kind_from_name(std::string_view name) {
    if (name == "Window") return OpeningKind::Window;
    if (name == "Door") return OpeningKind::Door;
    return std::nullopt;
}

void BuildingModel::validate() const {
    if (lod != 2 && lod != 3) throw SchemaError(fmt::format("unsupported lod {}", lod));
    if (lod == 2 && !openings.empty()) throw SchemaError("LoD2 model must not carry openings");
    std::set<std::string> ids;
    for (const auto& s : surfaces) {
        if (!ids.insert(s.id).second) throw SchemaError(fmt::format("duplicate surface id '{}'", s.id));
        s.polygon.validate();
    }
    std::set<std::string> opening_ids;
    for (const auto& o : openings) {
        if (!opening_ids.insert(o.id).second) throw SchemaError(fmt::format("duplicate opening id '{}'", o.id));
        if (!find_surface(o.parent)) throw LinkError(fmt::format("opening '{}' references unknown surface '{}'", o.id, o.parent));
    }
}

const Surface* BuildingModel::find_surface(std::string_view sid) const {
    for (const auto& s : surfaces) {
        if (s.id == sid) return &s;
    }
    return nullptr;
}

std::vector<const Surface*> BuildingModel::walls() const {
    std::vector<const Surface*> out;
    for (const auto& s : surfaces) {
        if (s.type == SurfaceType::Wall) out.push_back(&s);
    }
    return out;
}

std::string building_to_json_text(const BuildingModel& model) {
    json j;
    j["id"] = model.id;
    j["lod"] = model.lod;
    j["surfaces"] = json::array();
    for (const auto& s : model.surfaces) {
        json js;
        js["id"] = s.id;
        js["type"] = surface_type_name(s.type);
        js["exterior"] = ring_to_json(s.polygon.exterior);
        js["holes"] = json::array();
        for (const auto& h : s.polygon.holes) js["holes"].push_back(ring_to_json(h));
        j["surfaces"].push_back(std::move(js));
    }
    j["openings"] = json::array();
    for (const auto& o : model.openings) {
        json jo;
        jo["id"] = o.id;
        jo["kind"] = opening_kind_name(o.kind);
        jo["library_entry"] = o.library_entry;
        jo["parent"] = o.parent;
        jo["anchor"] = point_to_json(o.anchor);
        jo["width"] = o.width;
        jo["height"] = o.height;
        jo["depth"] = o.depth;
        jo["triangles"] = json::array();
        for (const auto& t : o.triangles) {
            jo["triangles"].push_back(json::array({point_to_json(t[0]), point_to_json(t[1]), point_to_json(t[2])}));
        }
        j["openings"].push_back(std::move(jo));
    }
    return j.dump(1) + "\n";
}

BuildingModel building_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    BuildingModel m;
    try {
        m.id = require(j, "id").get<std::string>();
        m.lod = require(j, "lod").get<int>();
        for (const auto& js : require(j, "surfaces")) {
            Surface s;
            s.id = require(js, "id").get<std::string>();
            const auto type_name = require(js, "type").get<std::string>();
            const auto type = surface_type_from_name(type_name);
            if (!type) throw SchemaError(fmt::format("unknown surface type '{}'", type_name));
            s.type = *type;
            s.polygon.exterior = ring_from_json(require(js, "exterior"));
            if (js.contains("holes")) {
                for (const auto& h : js.at("holes")) s.polygon.holes.push_back(ring_from_json(h));
            }
            m.surfaces.push_back(std::move(s));
        }
        if (j.contains("openings")) {
            for (const auto& jo : j.at("openings")) {
                OpeningSolid o;
                o.id = require(jo, "id").get<std::string>();
                const auto kind_name = require(jo, "kind").get<std::string>();
                const auto kind = opening_kind_from_name(kind_name);
                if (!kind) throw SchemaError(fmt::format("unknown opening kind '{}'", kind_name));
                o.kind = *kind;
                o.library_entry = require(jo, "library_entry").get<std::string>();
                o.parent = require(jo, "parent").get<std::string>();
                o.anchor = point_from_json(require(jo, "anchor"));
                o.width = require(jo, "width").get<double>();
                o.height = require(jo, "height").get<double>();
                o.depth = require(jo, "depth").get<double>();
                for (const auto& jt : require(jo, "triangles")) {
                    if (!jt.is_array() || jt.size() != 3) throw SchemaError("triangle must have 3 vertices");
                    o.triangles.push_back({point_from_json(jt[0]), point_from_json(jt[1]), point_from_json(jt[2])});
                }
                m.openings.push_back(std::move(o));
            }
        }
    } catch (const json::exception& e) {
        throw SchemaError(e.what());
    }
    m.validate();
    return m;
}

BuildingModel read_building_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open building model '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return building_from_json_text(ss.str());
}

void write_building_json(const BuildingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write building model '{}'", path.string()));
    out << building_to_json_text(model);
}

namespace {
bool is_gml(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    return ext == ".gml" || ext == ".xml";
}
}  // namespace

BuildingModel read_building(const std::filesystem::path& path) {
    return is_gml(path) ? read_citygml_subset(path) : read_building_json(path);
}

void write_building(const BuildingModel& model, const std::filesystem::path& path) {
    if (is_gml(path)) {
        write_citygml_subset(model, path);
    } else {
        write_building_json(model, path);
    }
}

}  // namespace facref
