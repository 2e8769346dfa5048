#include "dcm/geometry.hpp"

#include <cmath>

namespace dcm {

std::optional<Vec2> circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double d = 2.0 * cross2(ab, ac);
    const double scale = ab.norm() + ac.norm();
    if (std::abs(d) < 1e-14 * scale * scale * scale) return std::nullopt;
    const double ab2 = ab.squaredNorm();
    const double ac2 = ac.squaredNorm();
    const double ux = (ac.y() * ab2 - ab.y() * ac2) / d;
    const double uy = (ab.x() * ac2 - ac.x() * ab2) / d;
    return Vec2(a.x() + ux, a.y() + uy);
}

PolygonMoments polygon_moments(const std::vector<Vec2>& poly) {
    PolygonMoments m;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double w = cross2(p, q);
        m.area += 0.5 * w;
        m.sx += w * (p.x() + q.x()) / 6.0;
        m.sy += w * (p.y() + q.y()) / 6.0;
        m.ixx_iyy += w *
                     (p.x() * p.x() + p.x() * q.x() + q.x() * q.x() +
                      p.y() * p.y() + p.y() * q.y() + q.y() * q.y()) /
                     12.0;
    }
    return m;
}

CellMoments polygon_moments_about(const std::vector<Vec2>& poly, const Vec2& p) {
    const PolygonMoments m = polygon_moments(poly);
    CellMoments c;
    c.area = m.area;
    c.sx = m.sx - p.x() * m.area;
    c.sy = m.sy - p.y() * m.area;
    // Parallel-axis shift of the polar moment from the origin to p.
    c.polar = m.ixx_iyy - 2.0 * p.x() * m.sx - 2.0 * p.y() * m.sy +
              p.squaredNorm() * m.area;
    return c;
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                    double tol) {
    auto shared = [&](const Vec2& u, const Vec2& v) { return (u - v).norm() < tol; };
    if (shared(a0, b0) || shared(a0, b1) || shared(a1, b0) || shared(a1, b1)) return false;
    const double d1 = cross2(a1 - a0, b0 - a0);
    const double d2 = cross2(a1 - a0, b1 - a0);
    const double d3 = cross2(b1 - b0, a0 - b0);
    const double d4 = cross2(b1 - b0, a1 - b0);
    return (d1 * d2 < 0.0) && (d3 * d4 < 0.0);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

}  // namespace dcm
