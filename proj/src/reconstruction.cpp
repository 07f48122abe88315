#include "facref/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

FitTransform compute_fit(const Rect2& bbox, const PlaneFrame& frame, const OpeningLibraryEntry& entry,
                         double recess) {
    (void)entry;  // library entries share the +x-facing convention, so their own yaw is zero
    FitTransform t;
    t.yaw = yaw_of_normal(frame.n);
    t.translation = unproject({bbox.u_min, bbox.v_min, -recess}, frame);
    t.scale = Vec3(bbox.width, bbox.height, 1.0);
    return t;
}

Point3 apply_transform(const Point3& local, const FitTransform& t) {
    const Vec3 s = local.cwiseProduct(t.scale);
    const Vec3 canonical(-s.z(), s.x(), s.y());
    const double c = std::cos(t.yaw), sn = std::sin(t.yaw);
    const Vec3 rotated(c * canonical.x() - sn * canonical.y(), sn * canonical.x() + c * canonical.y(), canonical.z());
    return rotated + t.translation;
}

OpeningSolid apply_fit(const OpeningLibraryEntry& entry, const FitTransform& t, std::string id, std::string parent) {
    if (!(t.scale.x() > 0.0 && t.scale.y() > 0.0 && t.scale.z() > 0.0)) {
        throw FitError(fmt::format("non-positive scale ({}, {}, {})", t.scale.x(), t.scale.y(), t.scale.z()));
    }
    OpeningSolid s;
    s.id = std::move(id);
    s.kind = entry.kind;
    s.library_entry = entry.name;
    s.parent = std::move(parent);
    s.anchor = apply_transform(Point3::Zero(), t);
    s.width = t.scale.x();
    s.height = t.scale.y();
    s.depth = entry.depth * t.scale.z();
    s.triangles.reserve(entry.triangles.size());
    for (const auto& tri : entry.triangles) {
        s.triangles.push_back({apply_transform(tri[0], t), apply_transform(tri[1], t), apply_transform(tri[2], t)});
    }
    return s;
}

const OpeningLibraryEntry& select_entry(const std::vector<OpeningLibraryEntry>& library, OpeningKind kind) {
    for (const auto& e : library) {
        if (e.kind == kind) return e;
    }
    throw FitError(fmt::format("opening library has no {} entry", opening_kind_name(kind)));
}

BuildingModel assemble_lod3(const BuildingModel& model, const std::vector<OpeningSolid>& solids) {
    BuildingModel out = model;
    out.lod = 3;
    for (const auto& s : solids) {
        if (!out.find_surface(s.parent)) {
            throw LinkError(fmt::format("opening '{}' references unknown surface '{}'", s.id, s.parent));
        }
        auto it = std::find_if(out.openings.begin(), out.openings.end(), [&](const auto& o) { return o.id == s.id; });
        if (it != out.openings.end()) {
            *it = s;
        } else {
            out.openings.push_back(s);
        }
    }
    return out;
}

DispatchResult dispatch(const std::vector<CellCluster>& clusters, const std::string& facade_id) {
    DispatchResult r;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (clusters[k].kind == ClusterKind::Other) {
            r.diagnostics.push_back({facade_id, k,
                                     fmt::format("cluster of {} cells is not a window or door; no reconstruction "
                                                 "module for it",
                                                 clusters[k].cells.size())});
        } else {
            r.openings.push_back(k);
        }
    }
    return r;
}

}  // namespace facref
