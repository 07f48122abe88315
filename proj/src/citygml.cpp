// Reader and writer for the small CityGML 2.0 subset used here: one Building,
// its Wall/Roof/Ground surfaces as polygons, and Window/Door solids hung under
// the wall that owns them. Namespace prefixes are matched by local name only.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "facref/building.hpp"
#include "facref/errors.hpp"

namespace facref {

namespace pt = boost::property_tree;

namespace {

std::string_view local_name(std::string_view qname) {
    const auto pos = qname.find(':');
    return pos == std::string_view::npos ? qname : qname.substr(pos + 1);
}

std::string attribute(const pt::ptree& node, std::string_view local) {
    if (const auto attrs = node.get_child_optional("<xmlattr>")) {
        for (const auto& [key, value] : *attrs) {
            if (local_name(key) == local) return value.data();
        }
    }
    return {};
}

const pt::ptree* child(const pt::ptree& node, std::string_view local) {
    for (const auto& [key, value] : node) {
        if (local_name(key) == local) return &value;
    }
    return nullptr;
}

std::vector<const pt::ptree*> children(const pt::ptree& node, std::string_view local) {
    std::vector<const pt::ptree*> out;
    for (const auto& [key, value] : node) {
        if (local_name(key) == local) out.push_back(&value);
    }
    return out;
}

// Depth-first search for elements named `local`, not descending into `skip`.
void collect(const pt::ptree& node, std::string_view local, std::string_view skip,
             std::vector<const pt::ptree*>& out) {
    for (const auto& [key, value] : node) {
        const auto name = local_name(key);
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        if (name == local) {
            out.push_back(&value);
            continue;
        }
        if (!skip.empty() && name == skip) continue;
        collect(value, local, skip, out);
    }
}

Ring parse_coordinates(std::string_view text) {
    std::vector<double> values;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, v);
        if (ec != std::errc{} || ptr != text.data() + j) {
            throw ParseError(fmt::format("bad coordinate '{}'", text.substr(i, j - i)));
        }
        values.push_back(v);
        i = j;
    }
    if (values.size() % 3 != 0) {
        throw ParseError(fmt::format("coordinate count {} is not a multiple of 3", values.size()));
    }
    Ring ring;
    for (std::size_t k = 0; k < values.size(); k += 3) ring.emplace_back(values[k], values[k + 1], values[k + 2]);
    if (ring.size() < 4) throw ParseError("linear ring needs at least 4 positions");
    if ((ring.front() - ring.back()).norm() > 1e-9) throw ParseError("linear ring is not closed");
    ring.pop_back();
    return ring;
}

Ring parse_linear_ring(const pt::ptree& ring_node) {
    if (const auto* pos_list = child(ring_node, "posList")) return parse_coordinates(pos_list->data());
    std::string joined;
    for (const auto* pos : children(ring_node, "pos")) {
        joined += pos->data();
        joined += ' ';
    }
    if (joined.empty()) throw ParseError("linear ring without posList or pos elements");
    return parse_coordinates(joined);
}

Ring parse_boundary(const pt::ptree& boundary) {
    const auto* ring = child(boundary, "LinearRing");
    if (!ring) throw ParseError("polygon boundary without LinearRing");
    return parse_linear_ring(*ring);
}

PlanarPolygon parse_polygon(const pt::ptree& poly) {
    PlanarPolygon out;
    const auto* ext = child(poly, "exterior");
    if (!ext) throw ParseError("polygon without exterior");
    out.exterior = parse_boundary(*ext);
    for (const auto* in : children(poly, "interior")) out.holes.push_back(parse_boundary(*in));
    return out;
}

int lod_of_surface(const pt::ptree& surface) {
    for (const auto& [key, value] : surface) {
        const auto name = local_name(key);
        if (name.starts_with("lod") && name.ends_with("MultiSurface") && name.size() > 3) {
            return name[3] - '0';
        }
    }
    return 0;
}

double generic_double(const pt::ptree& node, std::string_view name) {
    for (const auto* attr : children(node, "doubleAttribute")) {
        if (attribute(*attr, "name") == name) {
            const auto* value = child(*attr, "value");
            if (!value) break;
            double v = 0.0;
            const auto& s = value->data();
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(fmt::format("bad value for '{}'", name));
            return v;
        }
    }
    throw ParseError(fmt::format("opening lacks generic attribute '{}'", name));
}

std::string generic_string(const pt::ptree& node, std::string_view name) {
    for (const auto* attr : children(node, "stringAttribute")) {
        if (attribute(*attr, "name") == name) {
            if (const auto* value = child(*attr, "value")) return value->data();
        }
    }
    return {};
}

OpeningSolid parse_opening(const pt::ptree& node, OpeningKind kind, const std::string& parent) {
    OpeningSolid o;
    o.id = attribute(node, "id");
    o.kind = kind;
    o.parent = parent;
    o.library_entry = generic_string(node, "libraryEntry");
    o.anchor = {generic_double(node, "anchorX"), generic_double(node, "anchorY"), generic_double(node, "anchorZ")};
    o.width = generic_double(node, "width");
    o.height = generic_double(node, "height");
    o.depth = generic_double(node, "depth");
    std::vector<const pt::ptree*> polys;
    collect(node, "Polygon", "", polys);
    for (const auto* p : polys) {
        const auto poly = parse_polygon(*p);
        if (poly.exterior.size() != 3) throw ParseError(fmt::format("opening '{}' face is not a triangle", o.id));
        o.triangles.push_back({poly.exterior[0], poly.exterior[1], poly.exterior[2]});
    }
    return o;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_pos_list(fmt::memory_buffer& buf, const Ring& ring, int indent) {
    fmt::format_to(std::back_inserter(buf), "{:{}}<gml:posList srsDimension=\"3\">", "", indent);
    for (std::size_t i = 0; i <= ring.size(); ++i) {
        const auto& p = ring[i % ring.size()];
        fmt::format_to(std::back_inserter(buf), "{}{} {} {}", i == 0 ? "" : " ", p.x(), p.y(), p.z());
    }
    fmt::format_to(std::back_inserter(buf), "</gml:posList>\n");
}

void write_polygon(fmt::memory_buffer& buf, const PlanarPolygon& poly, int indent) {
    auto out = std::back_inserter(buf);
    fmt::format_to(out, "{:{}}<gml:Polygon>\n", "", indent);
    fmt::format_to(out, "{:{}}<gml:exterior><gml:LinearRing>\n", "", indent + 1);
    write_pos_list(buf, poly.exterior, indent + 2);
    fmt::format_to(out, "{:{}}</gml:LinearRing></gml:exterior>\n", "", indent + 1);
    for (const auto& h : poly.holes) {
        fmt::format_to(out, "{:{}}<gml:interior><gml:LinearRing>\n", "", indent + 1);
        write_pos_list(buf, h, indent + 2);
        fmt::format_to(out, "{:{}}</gml:LinearRing></gml:interior>\n", "", indent + 1);
    }
    fmt::format_to(out, "{:{}}</gml:Polygon>\n", "", indent);
}

}  // namespace

BuildingModel citygml_from_text(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(e.what());
    }
    std::vector<const pt::ptree*> buildings;
    collect(tree, "Building", "", buildings);
    if (buildings.empty()) throw ParseError("no Building element found");
    const auto& building = *buildings.front();

    BuildingModel m;
    m.id = attribute(building, "id");
    int lod = 0;
    for (const auto type : {SurfaceType::Wall, SurfaceType::Roof, SurfaceType::Ground}) {
        std::vector<const pt::ptree*> surfaces;
        collect(building, surface_type_name(type), "", surfaces);
        for (const auto* s : surfaces) {
            const std::string sid = attribute(*s, "id");
            lod = std::max(lod, lod_of_surface(*s));
            std::vector<const pt::ptree*> polys;
            collect(*s, "Polygon", "opening", polys);
            for (std::size_t k = 0; k < polys.size(); ++k) {
                Surface surface;
                surface.id = polys.size() == 1 ? sid : fmt::format("{}_{}", sid, k);
                surface.type = type;
                surface.polygon = parse_polygon(*polys[k]);
                m.surfaces.push_back(std::move(surface));
            }
            for (const auto* op : children(*s, "opening")) {
                for (const auto& [key, value] : *op) {
                    const auto kind = opening_kind_from_name(local_name(key));
                    if (kind) m.openings.push_back(parse_opening(value, *kind, sid));
                }
            }
        }
    }
    m.lod = m.openings.empty() ? (lod == 0 ? 2 : lod) : 3;
    m.validate();
    return m;
}

BuildingModel read_citygml_subset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open CityGML file '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return citygml_from_text(ss.str());
}

std::string citygml_to_text(const BuildingModel& model) {
    fmt::memory_buffer buf;
    auto out = std::back_inserter(buf);
    fmt::format_to(out,
                   "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                   "<core:CityModel xmlns:core=\"http://www.opengis.net/citygml/2.0\""
                   " xmlns:bldg=\"http://www.opengis.net/citygml/building/2.0\""
                   " xmlns:gen=\"http://www.opengis.net/citygml/generics/2.0\""
                   " xmlns:gml=\"http://www.opengis.net/gml\">\n"
                   " <core:cityObjectMember>\n"
                   "  <bldg:Building gml:id=\"{}\">\n",
                   xml_escape(model.id));
    for (const auto& s : model.surfaces) {
        const auto tag = surface_type_name(s.type);
        fmt::format_to(out, "   <bldg:boundedBy>\n    <bldg:{} gml:id=\"{}\">\n", tag, xml_escape(s.id));
        fmt::format_to(out, "     <bldg:lod{}MultiSurface><gml:MultiSurface><gml:surfaceMember>\n", model.lod);
        write_polygon(buf, s.polygon, 6);
        fmt::format_to(out, "     </gml:surfaceMember></gml:MultiSurface></bldg:lod{}MultiSurface>\n", model.lod);
        for (const auto& o : model.openings) {
            if (o.parent != s.id) continue;
            const auto kind = opening_kind_name(o.kind);
            fmt::format_to(out, "     <bldg:opening>\n      <bldg:{} gml:id=\"{}\">\n", kind, xml_escape(o.id));
            fmt::format_to(out, "       <gen:stringAttribute name=\"libraryEntry\"><gen:value>{}</gen:value></gen:stringAttribute>\n",
                           xml_escape(o.library_entry));
            const std::pair<const char*, double> doubles[] = {
                {"anchorX", o.anchor.x()}, {"anchorY", o.anchor.y()}, {"anchorZ", o.anchor.z()},
                {"width", o.width},        {"height", o.height},      {"depth", o.depth}};
            for (const auto& [name, value] : doubles) {
                fmt::format_to(out, "       <gen:doubleAttribute name=\"{}\"><gen:value>{}</gen:value></gen:doubleAttribute>\n",
                               name, value);
            }
            fmt::format_to(out, "       <bldg:lod3Solid><gml:Solid><gml:exterior><gml:CompositeSurface>\n");
            for (const auto& t : o.triangles) {
                fmt::format_to(out, "        <gml:surfaceMember>\n");
                write_polygon(buf, PlanarPolygon(Ring{t[0], t[1], t[2]}), 9);
                fmt::format_to(out, "        </gml:surfaceMember>\n");
            }
            fmt::format_to(out, "       </gml:CompositeSurface></gml:exterior></gml:Solid></bldg:lod3Solid>\n");
            fmt::format_to(out, "      </bldg:{}>\n     </bldg:opening>\n", kind);
        }
        fmt::format_to(out, "    </bldg:{}>\n   </bldg:boundedBy>\n", tag);
    }
    fmt::format_to(out, "  </bldg:Building>\n </core:cityObjectMember>\n</core:CityModel>\n");
    return fmt::to_string(buf);
}

void write_citygml_subset(const BuildingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write CityGML file '{}'", path.string()));
    out << citygml_to_text(model);
}

}  // namespace facref
