#pragma once

#include <string>
#include <vector>

#include "facref/bayes_net.hpp"
#include "facref/building.hpp"
#include "facref/geometry.hpp"
#include "facref/opening_library.hpp"

namespace facref {

/// Local entry coordinates (x: width, y: height, z: depth into the wall) are
/// scaled, turned into a +x-facing façade frame, rotated by `yaw` about z and
/// translated.
struct FitTransform {
    Point3 translation = Point3::Zero();
    double yaw = 0.0;
    Vec3 scale = Vec3::Ones();
};

/// Places the entry origin at (u_min, v_min) on the façade plane, recessed by `recess` along -n.
FitTransform compute_fit(const Rect2& bbox, const PlaneFrame& frame, const OpeningLibraryEntry& entry,
                         double recess = 0.0);

Point3 apply_transform(const Point3& local, const FitTransform& t);

/// Throws FitError on non-positive scales.
OpeningSolid apply_fit(const OpeningLibraryEntry& entry, const FitTransform& t, std::string id,
                       std::string parent);

/// First entry of the requested kind; throws FitError if there is none.
const OpeningLibraryEntry& select_entry(const std::vector<OpeningLibraryEntry>& library, OpeningKind kind);

/// Copy of `model` at LoD3 with `solids` attached; solids replace openings with the same id.
BuildingModel assemble_lod3(const BuildingModel& model, const std::vector<OpeningSolid>& solids);

struct DispatchDiagnostic {
    std::string facade_id;
    std::size_t cluster = 0;
    std::string message;
};

struct DispatchResult {
    std::vector<std::size_t> openings;  // cluster indices routed to the shape pipeline
    std::vector<DispatchDiagnostic> diagnostics;
};

DispatchResult dispatch(const std::vector<CellCluster>& clusters, const std::string& facade_id);

}  // namespace facref
