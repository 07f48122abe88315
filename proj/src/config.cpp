#include "facref/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

namespace {

using FieldRef = std::variant<double*, int*, bool*, std::uint64_t*>;

struct Field {
    std::string section;
    std::string key;
    FieldRef ref;

    std::string full_name() const { return section + "." + key; }
};

std::vector<Field> fields_of(Config& c) {
    std::vector<Field> f = {
        {"uncertainty", "e1", &c.uncertainty.e1},
        {"uncertainty", "e2", &c.uncertainty.e2},
        {"uncertainty", "cl1", &c.uncertainty.cl1},
        {"uncertainty", "cl2", &c.uncertainty.cl2},
        {"uncertainty", "z1", &c.uncertainty.z1},
        {"uncertainty", "z2", &c.uncertainty.z2},
        {"grid", "voxel_size", &c.grid.voxel_size},
        {"grid", "prior", &c.grid.prior},
        {"grid", "l_occ", &c.grid.l_occ},
        {"grid", "l_emp", &c.grid.l_emp},
        {"grid", "l_min", &c.grid.l_min},
        {"grid", "l_max", &c.grid.l_max},
        {"grid", "state_epsilon", &c.grid.state_epsilon},
        {"grid", "fixed_empty", &c.grid.fixed_empty},
        {"grid", "fixed_empty_p", &c.grid.fixed_empty_p},
        {"features", "r_eigen", &c.features.r_eigen},
        {"features", "r_vert", &c.features.r_vert},
        {"fusion", "p_static", &c.fusion.p_static},
        {"bn", "cl_model", &c.bn.cl_model},
        {"bn", "cl_points", &c.bn.cl_points},
        {"bn", "p_t", &c.bn.p_t},
        {"bn", "d_mold", &c.bn.d_mold},
        {"bn", "door_bottom_rows", &c.bn.door_bottom_rows},
        {"shape", "b_s", &c.shape.b_s},
        {"shape", "r_cp_t", &c.shape.r_cp_t},
        {"shape", "pe_up", &c.shape.pe_up},
        {"shape", "pe_lo", &c.shape.pe_lo},
        {"shape", "n_min", &c.shape.n_min},
        {"shape", "se_size", &c.shape.se_size},
        {"recon", "recess_m", &c.recon.recess_m},
        {"eval", "iou_match", &c.eval.iou_match},
        {"eval", "k_min", &c.eval.k_min},
        {"sim", "seed", &c.sim.seed},
    };
    for (std::size_t m = 0; m < kModelStates; ++m) {
        for (std::size_t s = 0; s < kEvidenceStates; ++s) {
            f.push_back({"bn.cpt", fmt::format("{}.{}", kModelStateNames[m], kEvidenceStateNames[s]), &c.bn.cpt[m][s]});
        }
    }
    return f;
}

template <class T>
T parse_number(const std::string& s, const std::string& name) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(fmt::format("key '{}': cannot parse '{}'", name, s));
    }
    return v;
}

void assign(const Field& f, const std::string& value) {
    const auto name = f.full_name();
    std::visit(
        [&](auto* target) {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, bool>) {
                if (value == "true" || value == "1") {
                    *target = true;
                } else if (value == "false" || value == "0") {
                    *target = false;
                } else {
                    throw ConfigError(fmt::format("key '{}': expected true/false, got '{}'", name, value));
                }
            } else {
                *target = parse_number<T>(value, name);
            }
        },
        f.ref);
}

std::string render(const FieldRef& ref) {
    return std::visit(
        [](auto* target) -> std::string {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, bool>) {
                return *target ? "true" : "false";
            } else {
                return fmt::format("{}", *target);
            }
        },
        ref);
}

void require_probability(double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(fmt::format("key '{}': probability {} outside [0,1]", key, v));
}

void require_positive(double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("key '{}': must be positive, got {}", key, v));
}

}  // namespace

void validate_config(const Config& c) {
    require_positive(c.uncertainty.e1, "uncertainty.e1");
    require_positive(c.uncertainty.e2, "uncertainty.e2");
    if (!(c.uncertainty.cl1 > 0.0 && c.uncertainty.cl1 < 1.0)) throw ConfigError("key 'uncertainty.cl1': must lie in (0,1)");
    if (!(c.uncertainty.cl2 > 0.0 && c.uncertainty.cl2 < 1.0)) throw ConfigError("key 'uncertainty.cl2': must lie in (0,1)");
    require_positive(c.uncertainty.z1, "uncertainty.z1");
    require_positive(c.uncertainty.z2, "uncertainty.z2");

    require_positive(c.grid.voxel_size, "grid.voxel_size");
    require_probability(c.grid.prior, "grid.prior");
    if (!(c.grid.l_occ > 0.0)) throw ConfigError("key 'grid.l_occ': must be positive");
    if (!(c.grid.l_emp < 0.0)) throw ConfigError("key 'grid.l_emp': must be negative");
    if (!(c.grid.l_max > 0.0)) throw ConfigError("key 'grid.l_max': must be positive");
    if (!(c.grid.l_min < 0.0)) throw ConfigError("key 'grid.l_min': must be negative");
    require_positive(c.grid.state_epsilon, "grid.state_epsilon");
    require_probability(c.grid.fixed_empty_p, "grid.fixed_empty_p");

    require_positive(c.features.r_eigen, "features.r_eigen");
    require_positive(c.features.r_vert, "features.r_vert");

    require_probability(c.fusion.p_static, "fusion.p_static");

    require_probability(c.bn.cl_model, "bn.cl_model");
    require_probability(c.bn.cl_points, "bn.cl_points");
    require_probability(c.bn.p_t, "bn.p_t");
    if (c.bn.d_mold < 0) throw ConfigError("key 'bn.d_mold': must be non-negative");
    if (c.bn.door_bottom_rows < 1) throw ConfigError("key 'bn.door_bottom_rows': must be at least 1");
    for (std::size_t m = 0; m < kModelStates; ++m) {
        for (std::size_t s = 0; s < kEvidenceStates; ++s) {
            const double v = c.bn.cpt[m][s];
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError(fmt::format("key 'bn.cpt.{}.{}': probability {} outside [0,1]",
                                              kModelStateNames[m], kEvidenceStateNames[s], v));
            }
        }
    }

    if (!(c.shape.b_s >= 0.0)) throw ConfigError("key 'shape.b_s': must be non-negative");
    if (!(c.shape.r_cp_t >= 0.0)) throw ConfigError("key 'shape.r_cp_t': must be non-negative");
    if (!(c.shape.pe_lo >= 0.0 && c.shape.pe_lo <= c.shape.pe_up && c.shape.pe_up <= 100.0)) {
        throw ConfigError("keys 'shape.pe_lo'/'shape.pe_up': need 0 <= pe_lo <= pe_up <= 100");
    }
    if (c.shape.n_min < 1) throw ConfigError("key 'shape.n_min': must be at least 1");
    if (c.shape.se_size < 1 || c.shape.se_size % 2 == 0) throw ConfigError("key 'shape.se_size': must be a positive odd number");

    if (!(c.recon.recess_m >= 0.0)) throw ConfigError("key 'recon.recess_m': must be non-negative");
    require_probability(c.eval.iou_match, "eval.iou_match");
    if (c.eval.k_min < 0) throw ConfigError("key 'eval.k_min': must be non-negative");
}

Config parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    try {
        std::istringstream in(text);
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    std::map<std::string, std::string> values;
    for (const auto& [section, keys] : tree) {
        if (keys.empty()) throw ConfigError(fmt::format("key '{}' outside of any section", section));
        for (const auto& [key, value] : keys) values[section + "." + key] = value.data();
    }

    Config c;
    auto fields = fields_of(c);
    std::set<std::string> known;
    for (const auto& f : fields) {
        const auto name = f.full_name();
        known.insert(name);
        const auto it = values.find(name);
        if (it == values.end()) throw ConfigError(fmt::format("missing required key '{}'", name));
        assign(f, it->second);
    }
    for (const auto& [name, value] : values) {
        if (!known.count(name)) throw ConfigError(fmt::format("unknown key '{}'", name));
    }
    validate_config(c);
    return c;
}

Config read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_text(const Config& c) {
    Config copy = c;
    std::string out;
    std::string current;
    for (const auto& f : fields_of(copy)) {
        if (f.section != current) {
            if (!current.empty()) out += '\n';
            out += "[" + f.section + "]\n";
            current = f.section;
        }
        out += f.key + " = " + render(f.ref) + "\n";
    }
    return out;
}

void write_config(const Config& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write config '{}'", path.string()));
    out << config_to_text(c);
}

}  // namespace facref
