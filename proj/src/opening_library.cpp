#include "facref/opening_library.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "facref/errors.hpp"

namespace facref {

using nlohmann::json;

void OpeningLibraryEntry::validate() const {
    if (name.empty()) throw SchemaError("library entry without a name");
    if (!(depth > 0.0)) throw SchemaError(fmt::format("library entry '{}': depth must be positive", name));
    if (triangles.empty()) throw SchemaError(fmt::format("library entry '{}': no geometry", name));
    Aabb box;
    for (const auto& t : triangles) {
        for (const auto& p : t) box.extend(p);
    }
    const Point3 want_max(1.0, 1.0, depth);
    if ((box.min - Point3::Zero()).cwiseAbs().maxCoeff() > 1e-9 || (box.max - want_max).cwiseAbs().maxCoeff() > 1e-9) {
        throw SchemaError(fmt::format("library entry '{}': bounding box must be [0,1]x[0,1]x[0,{}]", name, depth));
    }
}

std::vector<Triangle> unit_box_triangles(double depth) {
    const std::array<Point3, 8> c = {
        Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 1, 0),
        Point3(0, 0, depth), Point3(1, 0, depth), Point3(1, 1, depth), Point3(0, 1, depth)};
    const int faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {2, 3, 7, 6}, {1, 2, 6, 5}, {0, 4, 7, 3}};
    std::vector<Triangle> out;
    for (const auto& f : faces) {
        out.push_back({c[f[0]], c[f[1]], c[f[2]]});
        out.push_back({c[f[0]], c[f[2]], c[f[3]]});
    }
    return out;
}

std::vector<OpeningLibraryEntry> default_opening_library(double depth) {
    return {
        {"window_box", OpeningKind::Window, depth, unit_box_triangles(depth)},
        {"door_box", OpeningKind::Door, depth, unit_box_triangles(depth)},
    };
}

std::vector<OpeningLibraryEntry> opening_library_from_text(const std::string& text) {
    std::vector<OpeningLibraryEntry> out;
    try {
        const auto j = json::parse(text);
        for (const auto& je : j.at("entries")) {
            OpeningLibraryEntry e;
            e.name = je.at("name").get<std::string>();
            const auto kind = opening_kind_from_name(je.at("kind").get<std::string>());
            if (!kind) throw SchemaError(fmt::format("library entry '{}': unknown kind", e.name));
            e.kind = *kind;
            e.depth = je.at("depth").get<double>();
            for (const auto& jt : je.at("triangles")) {
                Triangle t;
                for (std::size_t k = 0; k < 3; ++k) {
                    const auto& p = jt.at(k);
                    t[k] = Point3(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
                }
                e.triangles.push_back(t);
            }
            e.validate();
            out.push_back(std::move(e));
        }
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    } catch (const json::exception& e) {
        throw SchemaError(e.what());
    }
    return out;
}

std::vector<OpeningLibraryEntry> read_opening_library(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open opening library '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return opening_library_from_text(ss.str());
}

std::string opening_library_to_text(const std::vector<OpeningLibraryEntry>& entries) {
    json j;
    j["entries"] = json::array();
    for (const auto& e : entries) {
        json je;
        je["name"] = e.name;
        je["kind"] = opening_kind_name(e.kind);
        je["depth"] = e.depth;
        je["triangles"] = json::array();
        for (const auto& t : e.triangles) {
            json jt = json::array();
            for (const auto& p : t) jt.push_back(json::array({p.x(), p.y(), p.z()}));
            je["triangles"].push_back(jt);
        }
        j["entries"].push_back(je);
    }
    return j.dump(1) + "\n";
}

}  // namespace facref
