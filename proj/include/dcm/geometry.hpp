#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace dcm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// +90 degree counter-clockwise rotation.
inline Vec2 rot90(const Vec2& v) { return Vec2(-v.y(), v.x()); }

// Signed area of triangle (a, b, c); positive for counter-clockwise ordering.
inline double tri_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * cross2(b - a, c - a);
}

// Circumcenter of a non-degenerate triangle. Returns nullopt if the points
// are (numerically) collinear.
std::optional<Vec2> circumcenter(const Vec2& a, const Vec2& b, const Vec2& c);

// Area moments of a simple closed polygon (vertices in order, not repeated),
// evaluated by exact Green's-theorem quadrature. All quantities are signed
// with the polygon orientation (CCW positive).
struct PolygonMoments {
    double area = 0.0;   // integral dA
    double sx = 0.0;     // integral x dA
    double sy = 0.0;     // integral y dA
    double ixx_iyy = 0.0; // integral (x^2 + y^2) dA
};
PolygonMoments polygon_moments(const std::vector<Vec2>& poly);

// Moments of a polygon about a reference point p: area, first moments
// of (x - p), and polar second moment about p.
struct CellMoments {
    double area = 0.0;
    double sx = 0.0;   // integral (x - px) dA
    double sy = 0.0;   // integral (y - py) dA
    double polar = 0.0; // integral ((x-px)^2 + (y-py)^2) dA
};
CellMoments polygon_moments_about(const std::vector<Vec2>& poly, const Vec2& p);

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p);

// Proper or touching intersection of segments [a0,a1] and [b0,b1],
// excluding the case of a shared endpoint.
bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                    double tol = 1e-12);

// Distance from point p to segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace dcm
