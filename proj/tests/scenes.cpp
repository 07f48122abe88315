#include "scenes.hpp"

#include <fmt/format.h>

#include "facref/opening_library.hpp"
#include "facref/reconstruction.hpp"

namespace facref::scenes {

BuildingModel box_building(double w, double d, double h, double front_y) {
    const Point3 a(0, front_y, 0), b(w, front_y, 0), c(w, front_y + d, 0), e(0, front_y + d, 0);
    const Vec3 up(0, 0, h);
    BuildingModel m;
    m.id = "box";
    m.lod = 2;
    m.surfaces.push_back({kFront, SurfaceType::Wall, PlanarPolygon({a, b, b + up, a + up})});
    m.surfaces.push_back({"wall_right", SurfaceType::Wall, PlanarPolygon({b, c, c + up, b + up})});
    m.surfaces.push_back({"wall_back", SurfaceType::Wall, PlanarPolygon({c, e, e + up, c + up})});
    m.surfaces.push_back({"wall_left", SurfaceType::Wall, PlanarPolygon({e, a, a + up, e + up})});
    m.surfaces.push_back({"roof", SurfaceType::Roof, PlanarPolygon({a + up, b + up, c + up, e + up})});
    m.surfaces.push_back({"ground", SurfaceType::Ground, PlanarPolygon({a, e, c, b})});
    return m;
}

BuildingModel single_facade(double w, double h, double front_y) {
    BuildingModel m = box_building(w, 8.0, h, front_y);
    m.id = "facade";
    m.surfaces.resize(1);
    return m;
}

std::vector<OpeningPlacement> six_windows_one_door() {
    return {
        {OpeningKind::Door, {1.03, 0.0, 1.0, 2.2}},
        {OpeningKind::Window, {4.07, 0.98, 1.0, 1.5}},
        {OpeningKind::Window, {7.54, 0.96, 1.0, 1.5}},
        {OpeningKind::Window, {1.06, 3.64, 1.0, 1.5}},
        {OpeningKind::Window, {3.52, 3.62, 1.0, 1.5}},
        {OpeningKind::Window, {6.05, 3.67, 1.0, 1.5}},
        {OpeningKind::Window, {8.58, 3.63, 1.0, 1.5}},
    };
}

BuildingModel with_openings(const BuildingModel& lod2, const std::string& facade,
                            const std::vector<OpeningPlacement>& openings) {
    const Surface* wall = lod2.find_surface(facade);
    const PlaneFrame frame = fit_plane_frame(wall->polygon);
    const auto library = default_opening_library();
    std::vector<OpeningSolid> solids;
    for (std::size_t i = 0; i < openings.size(); ++i) {
        const auto& entry = select_entry(library, openings[i].kind);
        const auto fit = compute_fit(openings[i].box, frame, entry);
        solids.push_back(apply_fit(entry, fit, fmt::format("gt_{}", i), facade));
    }
    return assemble_lod3(lod2, solids);
}

std::vector<Point3> street_trajectory(const std::vector<double>& distances, int per_line, double x0, double x1,
                                      double z) {
    std::vector<Point3> out;
    for (const double d : distances) {
        for (int i = 0; i < per_line; ++i) {
            const double t = per_line > 1 ? static_cast<double>(i) / (per_line - 1) : 0.5;
            out.emplace_back(x0 + t * (x1 - x0), -d, z);
        }
    }
    return out;
}

ScanSpec end_to_end_scan(std::uint64_t seed) {
    ScanSpec s;
    s.trajectory = street_trajectory({5.0, 7.5, 10.0, 12.5, 15.0}, 10, -3.0, 13.0);
    s.angular_resolution = 0.01;
    s.max_range = 40.0;
    s.sigma_noise = 0.01;
    s.tau = 0.9;
    s.epsilon = 0.1;
    s.seed = seed;
    return s;
}

}  // namespace facref::scenes
