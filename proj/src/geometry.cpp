#include "facref/geometry.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

namespace {

std::vector<Eigen::Vector2d> ring_to_2d(const Ring& ring, const PlaneFrame& f) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(ring.size());
    for (const auto& p : ring) {
        const auto c = project_to_plane(p, f);
        out.emplace_back(c.u, c.v);
    }
    return out;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                    const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const double d1 = cross2(p2 - p1, q1 - p1);
    const double d2 = cross2(p2 - p1, q2 - p1);
    const double d3 = cross2(q2 - q1, p1 - q1);
    const double d4 = cross2(q2 - q1, p2 - q1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

std::size_t distinct_vertices(const Ring& ring) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i && !seen; ++j) {
            seen = (ring[i] - ring[j]).norm() < kUnitTolerance;
        }
        if (!seen) ++count;
    }
    return count;
}

}  // namespace

Ray Ray::between(const Point3& from, const Point3& to) {
    const Vec3 d = to - from;
    const double len = d.norm();
    if (!(len > 0.0)) throw DegenerateGeometry("ray endpoints coincide");
    return Ray{from, d / len, len};
}

Vec3 newell_normal(const Ring& ring) {
    Vec3 n = Vec3::Zero();
    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point3& a = ring[i];
        const Point3& b = ring[(i + 1) % m];
        n.x() += (a.y() - b.y()) * (a.z() + b.z());
        n.y() += (a.z() - b.z()) * (a.x() + b.x());
        n.z() += (a.x() - b.x()) * (a.y() + b.y());
    }
    return n;
}

void PlanarPolygon::validate(double tolerance) const {
    if (distinct_vertices(exterior) < 3) throw DegenerateGeometry("exterior ring has fewer than 3 distinct vertices");
    for (const auto& h : holes) {
        if (distinct_vertices(h) < 3) throw DegenerateGeometry("hole ring has fewer than 3 distinct vertices");
    }
    for (const auto& p : exterior) {
        if (!p.allFinite()) throw DegenerateGeometry("non-finite vertex");
    }
    const PlaneFrame f = fit_plane_frame(*this);
    auto check = [&](const Ring& ring) {
        for (const auto& p : ring) {
            const double d = std::abs(project_to_plane(p, f).d);
            if (d > tolerance) {
                throw DegenerateGeometry(fmt::format("vertex {:.6f} m off the polygon plane (tolerance {})", d, tolerance));
            }
        }
    };
    check(exterior);
    for (const auto& h : holes) check(h);

    const auto ring2d = ring_to_2d(exterior, f);
    const std::size_t m = ring2d.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (j == i + 1 || (i == 0 && j == m - 1)) continue;
            if (segments_cross(ring2d[i], ring2d[(i + 1) % m], ring2d[j], ring2d[(j + 1) % m])) {
                throw DegenerateGeometry("exterior ring self-intersects");
            }
        }
    }
}

PlaneFrame fit_plane_frame(const PlanarPolygon& poly) {
    if (poly.exterior.size() < 3) throw DegenerateGeometry("polygon needs at least 3 vertices");
    const Vec3 nn = newell_normal(poly.exterior);
    const double len = nn.norm();
    if (!(len > 1e-12)) throw DegenerateGeometry("polygon has zero area");

    PlaneFrame f;
    f.n = nn / len;
    f.origin = poly.exterior.front();
    if (std::hypot(f.n.x(), f.n.y()) < kUnitTolerance) {
        f.u = Vec3::UnitX();
    } else {
        f.u = Vec3::UnitZ().cross(f.n).normalized();
    }
    f.v = f.n.cross(f.u);
    return f;
}

PlaneCoords project_to_plane(const Point3& p, const PlaneFrame& f) {
    const Vec3 d = p - f.origin;
    return {d.dot(f.u), d.dot(f.v), d.dot(f.n)};
}

Point3 unproject(const PlaneCoords& c, const PlaneFrame& f) {
    return f.origin + c.u * f.u + c.v * f.v + c.d * f.n;
}

bool point_in_ring(const std::vector<Eigen::Vector2d>& ring, const Eigen::Vector2d& q) {
    bool inside = false;
    const std::size_t m = ring.size();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto& a = ring[i];
        const auto& b = ring[j];
        if ((a.y() > q.y()) != (b.y() > q.y())) {
            const double x = (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x();
            if (q.x() < x) inside = !inside;
        }
    }
    return inside;
}

bool contains_projected(const PlanarPolygon& poly, const PlaneFrame& f, const Eigen::Vector2d& q) {
    bool inside = point_in_ring(ring_to_2d(poly.exterior, f), q);
    for (const auto& h : poly.holes) {
        if (point_in_ring(ring_to_2d(h, f), q)) inside = !inside;
    }
    return inside;
}

std::optional<double> ray_polygon_param(const Ray& r, const PlanarPolygon& poly, const PlaneFrame& f) {
    const double denom = f.n.dot(r.direction);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = f.n.dot(f.origin - r.origin) / denom;
    if (t < 0.0 || t > r.length) return std::nullopt;
    const auto c = project_to_plane(r.at(t), f);
    if (!contains_projected(poly, f, {c.u, c.v})) return std::nullopt;
    return t;
}

std::optional<Point3> ray_polygon_intersect(const Ray& r, const PlanarPolygon& poly) {
    const PlaneFrame f = fit_plane_frame(poly);
    if (auto t = ray_polygon_param(r, poly, f)) return r.at(*t);
    return std::nullopt;
}

double ring_area(const Ring& ring) { return 0.5 * newell_normal(ring).norm(); }

double polygon_area(const PlanarPolygon& poly) {
    const double outer = ring_area(poly.exterior);
    if (!(outer > 1e-12)) throw DegenerateGeometry("exterior ring has zero area");
    double area = outer;
    for (const auto& h : poly.holes) area -= ring_area(h);
    return std::max(area, 0.0);
}

double yaw_of_normal(const Vec3& n) {
    if (std::hypot(n.x(), n.y()) < kUnitTolerance) throw NotAFacade("normal is vertical");
    double yaw = std::atan2(n.y(), n.x());
    if (yaw <= -std::numbers::pi) yaw = std::numbers::pi;
    return yaw;
}

Rect2 planar_extent(const PlanarPolygon& poly, const PlaneFrame& f) {
    double u0 = std::numeric_limits<double>::infinity(), v0 = u0;
    double u1 = -u0, v1 = -u0;
    for (const auto& p : poly.exterior) {
        const auto c = project_to_plane(p, f);
        u0 = std::min(u0, c.u);
        v0 = std::min(v0, c.v);
        u1 = std::max(u1, c.u);
        v1 = std::max(v1, c.v);
    }
    return {u0, v0, u1 - u0, v1 - v0};
}

Aabb bounds_of(const Ring& ring) {
    Aabb b;
    for (const auto& p : ring) b.extend(p);
    return b;
}

PreparedPolygon::PreparedPolygon(PlanarPolygon poly)
    : polygon(std::move(poly)), frame(fit_plane_frame(polygon)) {
    exterior2d = ring_to_2d(polygon.exterior, frame);
    for (const auto& h : polygon.holes) holes2d.push_back(ring_to_2d(h, frame));
    extent = planar_extent(polygon, frame);
}

bool PreparedPolygon::contains(const Eigen::Vector2d& q) const {
    if (q.x() < extent.u_min || q.x() > extent.u_max() || q.y() < extent.v_min || q.y() > extent.v_max()) {
        return false;
    }
    bool inside = point_in_ring(exterior2d, q);
    for (const auto& h : holes2d) {
        if (point_in_ring(h, q)) inside = !inside;
    }
    return inside;
}

std::optional<double> PreparedPolygon::intersect(const Ray& r) const {
    const double denom = frame.n.dot(r.direction);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = frame.n.dot(frame.origin - r.origin) / denom;
    if (t < 0.0 || t > r.length) return std::nullopt;
    const auto c = project_to_plane(r.at(t), frame);
    if (!contains({c.u, c.v})) return std::nullopt;
    return t;
}

std::optional<std::pair<double, double>> clip_segment(const Ray& r, const Aabb& box) {
    double t0 = 0.0, t1 = r.length;
    for (int a = 0; a < 3; ++a) {
        const double o = r.origin[a], d = r.direction[a];
        if (std::abs(d) < 1e-300) {
            if (o < box.min[a] || o > box.max[a]) return std::nullopt;
            continue;
        }
        double ta = (box.min[a] - o) / d;
        double tb = (box.max[a] - o) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

std::optional<double> ray_triangle_param(const Ray& r, const Point3& a, const Point3& b, const Point3& c) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 p = r.direction.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 s = r.origin - a;
    const double bu = s.dot(p) * inv;
    if (bu < 0.0 || bu > 1.0) return std::nullopt;
    const Vec3 q = s.cross(e1);
    const double bv = r.direction.dot(q) * inv;
    if (bv < 0.0 || bu + bv > 1.0) return std::nullopt;
    const double t = e2.dot(q) * inv;
    if (t < 0.0 || t > r.length) return std::nullopt;
    return t;
}

}  // namespace facref
