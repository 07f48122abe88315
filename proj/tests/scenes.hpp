#pragma once

#include <string>
#include <vector>

#include "facref/building.hpp"
#include "facref/geometry.hpp"
#include "facref/scan_simulator.hpp"

namespace facref::scenes {

inline constexpr const char* kFront = "wall_front";

/// Keep the front façade and the street off voxel boundaries at v_s = 0.1 m, so
/// their noisy returns fall into a single voxel layer.
inline constexpr double kFrontY = 0.05;
inline constexpr double kStreetZ = -0.05;

/// LoD2 box building; the front façade lies in y = front_y and faces -y, so its
/// frame has u = +x and v = +z with the origin at (0, front_y, 0).
BuildingModel box_building(double width = 10.0, double depth = 8.0, double height = 6.0, double front_y = kFrontY);

/// LoD2 model holding only the front wall of box_building.
BuildingModel single_facade(double width = 10.0, double height = 6.0, double front_y = kFrontY);

struct OpeningPlacement {
    OpeningKind kind = OpeningKind::Window;
    Rect2 box;  // front façade frame
};

/// Six 1.0 x 1.5 m windows and one 1.0 x 2.2 m door on a 10 x 6 m façade, placed
/// off the voxel lattice.
std::vector<OpeningPlacement> six_windows_one_door();

/// Ground truth LoD3: the LoD2 model with library boxes fitted to `openings` on `facade`.
BuildingModel with_openings(const BuildingModel& lod2, const std::string& facade,
                            const std::vector<OpeningPlacement>& openings);

/// Lines parallel to the front façade at the given distances, `per_line` poses each,
/// spread over x in [x0, x1] at height z.
std::vector<Point3> street_trajectory(const std::vector<double>& distances, int per_line, double x0, double x1,
                                      double z = 2.0);

/// End-to-end scan: 50 poses at 5-15 m, tau 0.9, 1 cm noise, eps 0.1.
ScanSpec end_to_end_scan(std::uint64_t seed);

}  // namespace facref::scenes
