#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace facref {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Ring = std::vector<Point3>;

inline constexpr double kPlaneTolerance = 1e-3;  // meters
inline constexpr double kUnitTolerance = 1e-9;

/// Segment from a sensor to a hit point: origin + t * direction, t in [0, length].
struct Ray {
    Point3 origin = Point3::Zero();
    Vec3 direction = Vec3::UnitX();
    double length = 1.0;

    Point3 end() const { return origin + length * direction; }
    Point3 at(double t) const { return origin + t * direction; }

    /// Throws DegenerateGeometry when the endpoints coincide.
    static Ray between(const Point3& from, const Point3& to);
};

struct PlanarPolygon {
    Ring exterior;
    std::vector<Ring> holes;

    PlanarPolygon() = default;
    explicit PlanarPolygon(Ring ext, std::vector<Ring> hs = {})
        : exterior(std::move(ext)), holes(std::move(hs)) {}

    /// Checks vertex counts and coplanarity against `tolerance`.
    /// Throws DegenerateGeometry on failure.
    void validate(double tolerance = kPlaneTolerance) const;

    bool operator==(const PlanarPolygon&) const = default;
};

/// Orthonormal right-handed frame attached to a plane: u x v = n.
struct PlaneFrame {
    Point3 origin = Point3::Zero();
    Vec3 u = Vec3::UnitX();
    Vec3 v = Vec3::UnitY();
    Vec3 n = Vec3::UnitZ();
};

struct PlaneCoords {
    double u = 0.0;
    double v = 0.0;
    double d = 0.0;  // signed distance along the frame normal
};

/// Axis-aligned rectangle in façade-plane coordinates.
struct Rect2 {
    double u_min = 0.0;
    double v_min = 0.0;
    double width = 0.0;   // a
    double height = 0.0;  // b

    double u_max() const { return u_min + width; }
    double v_max() const { return v_min + height; }
    double area() const { return width * height; }
};

struct Aabb {
    Point3 min = Point3::Constant(std::numeric_limits<double>::infinity());
    Point3 max = Point3::Constant(-std::numeric_limits<double>::infinity());

    bool empty() const { return (min.array() > max.array()).any(); }
    void extend(const Point3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void extend(const Aabb& b) {
        if (b.empty()) return;
        extend(b.min);
        extend(b.max);
    }
    bool contains(const Point3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }
};

/// Newell normal of a ring, scaled by twice the enclosed area.
Vec3 newell_normal(const Ring& ring);

/// Normal from Newell's method; u horizontal unless the normal is vertical.
PlaneFrame fit_plane_frame(const PlanarPolygon& poly);

PlaneCoords project_to_plane(const Point3& p, const PlaneFrame& f);
Point3 unproject(const PlaneCoords& c, const PlaneFrame& f);

/// Even-odd point-in-polygon test in 2D; `ring2d` is (u, v) pairs.
bool point_in_ring(const std::vector<Eigen::Vector2d>& ring2d, const Eigen::Vector2d& q);

/// Inside the exterior and outside every hole, evaluated in the frame's plane.
bool contains_projected(const PlanarPolygon& poly, const PlaneFrame& f, const Eigen::Vector2d& q);

std::optional<Point3> ray_polygon_intersect(const Ray& r, const PlanarPolygon& poly);

/// Same as above with a precomputed frame (hot path in the simulator).
std::optional<double> ray_polygon_param(const Ray& r, const PlanarPolygon& poly,
                                        const PlaneFrame& f);

double ring_area(const Ring& ring);
double polygon_area(const PlanarPolygon& poly);

/// atan2(n_y, n_x). Throws NotAFacade for a (near-)vertical normal.
double yaw_of_normal(const Vec3& n);

/// Rectangle spanned by the polygon's exterior in frame coordinates.
Rect2 planar_extent(const PlanarPolygon& poly, const PlaneFrame& f);

Aabb bounds_of(const Ring& ring);

/// Polygon with its frame and 2D rings cached, for repeated ray queries.
struct PreparedPolygon {
    PlanarPolygon polygon;
    PlaneFrame frame;
    std::vector<Eigen::Vector2d> exterior2d;
    std::vector<std::vector<Eigen::Vector2d>> holes2d;
    Rect2 extent;

    explicit PreparedPolygon(PlanarPolygon poly);

    bool contains(const Eigen::Vector2d& q) const;
    std::optional<double> intersect(const Ray& r) const;
};

/// Slab test of a segment against a box; returns the clipped parameter range.
std::optional<std::pair<double, double>> clip_segment(const Ray& r, const Aabb& box);

/// Moller-Trumbore; returns the ray parameter of the hit.
std::optional<double> ray_triangle_param(const Ray& r, const Point3& a, const Point3& b,
                                         const Point3& c);

}  // namespace facref
