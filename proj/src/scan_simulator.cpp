#include "facref/scan_simulator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

void ScanSpec::validate() const {
    if (trajectory.empty()) throw SpecError("scan trajectory is empty");
    if (!(angular_resolution > 0.0)) throw SpecError("angular resolution must be positive");
    if (!(max_range > 0.0)) throw SpecError("max range must be positive");
    if (!(sigma_noise >= 0.0)) throw SpecError("range noise must be non-negative");
    if (!(tau >= 0.0 && tau <= 1.0)) throw SpecError("transmission tau must lie in [0,1]");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw SpecError("label confusion epsilon must lie in [0,1)");
    if (passes < 1) throw SpecError("at least one pass is required");
    if (!(interior_offset > 0.0)) throw SpecError("interior offset must be positive");
    if (ground_z && !std::isfinite(*ground_z)) throw SpecError("ground height must be finite");
    for (const auto& t : transients) {
        if (t.box.empty()) throw SpecError("transient box is empty");
        if (!(t.active_fraction >= 0.0 && t.active_fraction <= 1.0)) {
            throw SpecError("transient active fraction must lie in [0,1]");
        }
    }
}

std::vector<GroundTruthOpening> ground_truth_boxes(const BuildingModel& model) {
    std::vector<GroundTruthOpening> out;
    for (const auto& o : model.openings) {
        const Surface* parent = model.find_surface(o.parent);
        if (!parent) throw LinkError(fmt::format("opening '{}' references unknown surface '{}'", o.id, o.parent));
        const PlaneFrame f = fit_plane_frame(parent->polygon);
        const PlaneCoords a = project_to_plane(o.anchor, f);
        out.push_back({o.id, o.parent, o.kind, Rect2{a.u, a.v, o.width, o.height}});
    }
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimSurface {
    PreparedPolygon prep;
    Label label;
};

struct SimOpening {
    std::size_t surface;
    PlaneFrame frame;  // parent frame
    double d = 0.0;    // plane offset of the front face
    Rect2 box;
    Label label;
};

enum class HitKind { None, Surface, Opening, Ground, Transient, Interior };

struct Hit {
    double t = kInf;
    HitKind kind = HitKind::None;
    std::size_t index = 0;
};

double plane_param(const Point3& o, const Vec3& d, const Vec3& n, double offset) {
    const double denom = n.dot(d);
    if (std::abs(denom) < 1e-12) return kInf;
    const double t = (offset - n.dot(o)) / denom;
    return t > 0.0 ? t : kInf;
}

class Scene {
public:
    Scene(const BuildingModel& model, const ScanSpec& spec) : spec_(spec) {
        for (const auto& s : model.surfaces) {
            Label l = Label::Wall;
            if (s.type == SurfaceType::Roof) l = Label::Other;
            if (s.type == SurfaceType::Ground) l = Label::Floor;
            surfaces_.push_back({PreparedPolygon(s.polygon), l});
            bounds_.extend(bounds_of(s.polygon.exterior));
        }
        for (const auto& o : model.openings) {
            std::size_t idx = 0;
            while (idx < model.surfaces.size() && model.surfaces[idx].id != o.parent) ++idx;
            if (idx == model.surfaces.size()) {
                throw LinkError(fmt::format("opening '{}' references unknown surface '{}'", o.id, o.parent));
            }
            const PlaneFrame& f = surfaces_[idx].prep.frame;
            const PlaneCoords a = project_to_plane(o.anchor, f);
            openings_.push_back({idx, f, f.n.dot(o.anchor), Rect2{a.u, a.v, o.width, o.height},
                                 o.kind == OpeningKind::Door ? Label::Door : Label::Window});
        }
        ground_z_ = spec.ground_z ? *spec.ground_z : bounds_.empty() ? 0.0 : bounds_.min.z();
    }

    const Aabb& bounds() const { return bounds_; }
    std::size_t opening_count() const { return openings_.size(); }

    /// Nearest hit after `t_from` along (o, d). `interior` is the opening the ray entered through.
    Hit nearest(const Point3& o, const Vec3& d, double t_from, const std::vector<char>& active,
                std::optional<std::size_t> interior) const {
        Hit best;
        auto consider = [&](double t, HitKind k, std::size_t i) {
            if (t > t_from && t < best.t) best = {t, k, i};
        };
        for (std::size_t k = 0; k < surfaces_.size(); ++k) {
            const auto& prep = surfaces_[k].prep;
            const double t = plane_param(o, d, prep.frame.n, prep.frame.n.dot(prep.frame.origin));
            if (!(t > t_from && t < best.t)) continue;
            const PlaneCoords c = project_to_plane(o + t * d, prep.frame);
            if (!prep.contains({c.u, c.v}) || in_opening(k, c.u, c.v)) continue;
            consider(t, HitKind::Surface, k);
        }
        for (std::size_t k = 0; k < openings_.size(); ++k) {
            if (interior && *interior == k) continue;
            const auto& op = openings_[k];
            const double t = plane_param(o, d, op.frame.n, op.d);
            if (!(t > t_from && t < best.t)) continue;
            const PlaneCoords c = project_to_plane(o + t * d, op.frame);
            if (inside(op.box, c.u, c.v)) consider(t, HitKind::Opening, k);
        }
        if (spec_.ground_plane) consider(plane_param(o, d, Vec3::UnitZ(), ground_z_), HitKind::Ground, 0);
        for (std::size_t k = 0; k < spec_.transients.size(); ++k) {
            if (!active[k]) continue;
            const auto clip = clip_segment(Ray{o, d, spec_.max_range}, spec_.transients[k].box);
            if (clip && clip->first > 0.0) consider(clip->first, HitKind::Transient, k);
        }
        if (interior) {
            const auto& op = openings_[*interior];
            consider(plane_param(o, d, op.frame.n, op.d - spec_.interior_offset), HitKind::Interior, *interior);
        }
        return best;
    }

    Label label_of(const Hit& h) const {
        switch (h.kind) {
            case HitKind::Surface: return surfaces_[h.index].label;
            case HitKind::Opening: return openings_[h.index].label;
            case HitKind::Ground: return Label::Floor;
            case HitKind::Transient: return spec_.transients[h.index].label;
            case HitKind::Interior:
            case HitKind::None: return Label::Other;
        }
        return Label::Other;
    }

private:
    static bool inside(const Rect2& r, double u, double v) {
        return u >= r.u_min && u <= r.u_max() && v >= r.v_min && v <= r.v_max();
    }

    bool in_opening(std::size_t surface, double u, double v) const {
        for (const auto& op : openings_) {
            if (op.surface == surface && inside(op.box, u, v)) return true;
        }
        return false;
    }

    const ScanSpec& spec_;
    std::vector<SimSurface> surfaces_;
    std::vector<SimOpening> openings_;
    Aabb bounds_;
    double ground_z_ = 0.0;
};

struct AngleWindow {
    double az0, az1, el0, el1, az_center;
};

AngleWindow angle_window(const Point3& s, const Aabb& b) {
    const Point3 center = 0.5 * (b.min + b.max);
    const double azc = std::atan2(center.y() - s.y(), center.x() - s.x());
    const bool inside_xy = s.x() >= b.min.x() && s.x() <= b.max.x() && s.y() >= b.min.y() && s.y() <= b.max.y();
    AngleWindow w{kInf, -kInf, kInf, -kInf, azc};
    for (int c = 0; c < 8; ++c) {
        const Point3 p((c & 1) ? b.max.x() : b.min.x(), (c & 2) ? b.max.y() : b.min.y(), (c & 4) ? b.max.z() : b.min.z());
        const Vec3 d = p - s;
        double az = std::atan2(d.y(), d.x()) - azc;
        az = std::remainder(az, 2.0 * std::numbers::pi);
        const double el = std::atan2(d.z(), std::hypot(d.x(), d.y()));
        w.az0 = std::min(w.az0, az);
        w.az1 = std::max(w.az1, az);
        w.el0 = std::min(w.el0, el);
        w.el1 = std::max(w.el1, el);
    }
    if (inside_xy) {
        w.az0 = -std::numbers::pi;
        w.az1 = std::numbers::pi;
    }
    return w;
}

LabelProbs noisy_probs(Label truth, double eps) {
    LabelProbs p;
    p.fill(eps / static_cast<double>(kLabelCount - 1));
    p[index_of(truth)] = 1.0 - eps;
    return p;
}

}  // namespace

SimResult simulate(const BuildingModel& model, const ScanSpec& spec) {
    spec.validate();
    const Scene scene(model, spec);
    if (scene.bounds().empty()) throw SpecError("model has no surfaces to scan");
    SimResult out;
    out.opening_rays.assign(scene.opening_count(), 0);
    const double res = spec.angular_resolution;

    for (int pass = 0; pass < spec.passes; ++pass) {
        std::vector<char> active(spec.transients.size(), 0);
        for (std::size_t k = 0; k < spec.transients.size(); ++k) {
            active[k] = pass < static_cast<int>(std::lround(spec.transients[k].active_fraction * spec.passes));
        }
        for (std::size_t pose = 0; pose < spec.trajectory.size(); ++pose) {
            const Point3& s = spec.trajectory[pose];
            std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                              static_cast<std::uint32_t>(pass), static_cast<std::uint32_t>(pose)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            std::normal_distribution<double> noise(0.0, spec.sigma_noise > 0.0 ? spec.sigma_noise : 1.0);
            const AngleWindow w = angle_window(s, scene.bounds());
            const auto n_az = static_cast<long>(std::floor((w.az1 - w.az0) / res)) + 1;
            const auto n_el = static_cast<long>(std::floor((w.el1 - w.el0) / res)) + 1;
            for (long ie = 0; ie < n_el; ++ie) {
                const double el = w.el0 + ie * res;
                for (long ia = 0; ia < n_az; ++ia) {
                    const double az = w.az_center + w.az0 + ia * res;
                    const Vec3 d(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
                    std::optional<std::size_t> interior;
                    double t_from = 0.0;
                    Hit hit;
                    for (int bounce = 0; bounce < 4; ++bounce) {
                        hit = scene.nearest(s, d, t_from, active, interior);
                        if (hit.kind != HitKind::Opening || hit.t > spec.max_range) break;
                        ++out.opening_rays[hit.index];
                        if (uni(rng) >= spec.tau) break;
                        interior = hit.index;
                        t_from = hit.t + 1e-9;
                    }
                    if (hit.kind == HitKind::None || hit.t > spec.max_range) continue;
                    double range = hit.t;
                    if (spec.sigma_noise > 0.0) range += noise(rng);
                    PointRecord rec;
                    rec.position = s + range * d;
                    rec.sensor = s;
                    rec.true_label = scene.label_of(hit);
                    rec.prob = noisy_probs(*rec.true_label, spec.epsilon);
                    out.cloud.points.push_back(rec);
                    out.transient.push_back(hit.kind == HitKind::Transient ? 1 : 0);
                }
            }
        }
    }
    return out;
}

namespace {

double parse_double(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof()) throw SpecError(fmt::format("key '{}': '{}' is not a number", key, text));
    return v;
}

std::uint64_t parse_seed(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::uint64_t v = 0;
    if (text.find('-') != std::string::npos || !(in >> v) || !(in >> std::ws).eof()) {
        throw SpecError(fmt::format("key '{}': '{}' is not an unsigned integer", key, text));
    }
    return v;
}

Point3 parse_point(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    Point3 p;
    if (!(in >> p.x() >> p.y() >> p.z()) || !(in >> std::ws).eof()) {
        throw SpecError(fmt::format("key '{}': '{}' is not an 'x y z' triple", key, text));
    }
    return p;
}

}  // namespace

ScanSpec parse_scan_spec(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.what());
    }
    ScanSpec spec;
    bool have_poses = false;
    for (const auto& [section, body] : tree) {
        if (section == "scan") {
            for (const auto& [key, node] : body) {
                const auto v = node.data();
                const std::string full = "scan." + key;
                if (key == "angular_resolution") spec.angular_resolution = parse_double(v, full);
                else if (key == "max_range") spec.max_range = parse_double(v, full);
                else if (key == "sigma_noise") spec.sigma_noise = parse_double(v, full);
                else if (key == "tau") spec.tau = parse_double(v, full);
                else if (key == "epsilon") spec.epsilon = parse_double(v, full);
                else if (key == "passes") spec.passes = static_cast<int>(parse_double(v, full));
                else if (key == "ground_plane") spec.ground_plane = v == "true" || v == "1";
                else if (key == "ground_z") spec.ground_z = parse_double(v, full);
                else if (key == "interior_offset") spec.interior_offset = parse_double(v, full);
                else if (key == "seed") spec.seed = parse_seed(v, full);
                else throw SpecError(fmt::format("unknown key '{}'", full));
            }
        } else if (section == "trajectory") {
            for (const auto& [key, node] : body) {
                if (key != "poses") throw SpecError(fmt::format("unknown key 'trajectory.{}'", key));
                std::string item;
                std::istringstream in(node.data());
                while (std::getline(in, item, ';')) {
                    if (item.find_first_not_of(" \t") == std::string::npos) continue;
                    spec.trajectory.push_back(parse_point(item, "trajectory.poses"));
                }
                have_poses = true;
            }
        } else if (section.rfind("transient.", 0) == 0) {
            TransientObject t;
            for (const auto& [key, node] : body) {
                const std::string full = section + "." + key;
                if (key == "min") t.box.min = parse_point(node.data(), full);
                else if (key == "max") t.box.max = parse_point(node.data(), full);
                else if (key == "active_fraction") t.active_fraction = parse_double(node.data(), full);
                else if (key == "label") {
                    const auto l = label_from_name(node.data());
                    if (!l) throw SpecError(fmt::format("key '{}': unknown label '{}'", full, node.data()));
                    t.label = *l;
                } else {
                    throw SpecError(fmt::format("unknown key '{}'", full));
                }
            }
            spec.transients.push_back(t);
        } else {
            throw SpecError(fmt::format("unknown section '{}'", section));
        }
    }
    if (!have_poses) throw SpecError("missing required key 'trajectory.poses'");
    spec.validate();
    return spec;
}

ScanSpec read_scan_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(fmt::format("cannot open scan spec '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scan_spec(ss.str());
}

ConfusionMatrix uniform_confusion(double eps) {
    ConfusionMatrix m{};
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        for (std::size_t j = 0; j < kLabelCount; ++j) {
            m[i][j] = i == j ? 1.0 - eps : eps / static_cast<double>(kLabelCount - 1);
        }
    }
    return m;
}

PointCloud corrupt_labels(const PointCloud& cloud, const ConfusionMatrix& confusion, std::uint64_t seed,
                          double confidence) {
    for (const auto& row : confusion) {
        double sum = 0.0;
        for (const double v : row) {
            if (!(v >= 0.0)) throw SpecError("confusion matrix has a negative entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw SpecError("confusion matrix rows must sum to one");
    }
    if (!(confidence >= 1.0 / kLabelCount && confidence <= 1.0)) throw SpecError("confidence must lie in [1/8, 1]");
    std::mt19937_64 rng(seed);
    PointCloud out = cloud;
    for (auto& rec : out.points) {
        if (!rec.true_label) continue;
        const auto& row = confusion[index_of(*rec.true_label)];
        std::discrete_distribution<std::size_t> pick(row.begin(), row.end());
        const std::size_t drawn = pick(rng);
        rec.prob.fill((1.0 - confidence) / static_cast<double>(kLabelCount - 1));
        rec.prob[drawn] = confidence;
    }
    return out;
}

}  // namespace facref
