#include "dcm/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dcm {

namespace {

// Zigzag triangulation of the strip between two left-to-right point rows.
void triangulate_strip(const std::vector<Vec2>& pts, const std::vector<int>& bottom,
                       const std::vector<int>& top, std::vector<std::array<int, 3>>& out) {
    std::size_t i = 0, j = 0;
    while (i + 1 < bottom.size() || j + 1 < top.size()) {
        const bool can_b = i + 1 < bottom.size();
        const bool can_t = j + 1 < top.size();
        bool advance_bottom;
        if (can_b && can_t) {
            const double db = (pts[bottom[i + 1]] - pts[top[j]]).squaredNorm();
            const double dt = (pts[top[j + 1]] - pts[bottom[i]]).squaredNorm();
            advance_bottom = db <= dt;
        } else {
            advance_bottom = can_b;
        }
        if (advance_bottom) {
            out.push_back({bottom[i], bottom[i + 1], top[j]});
            ++i;
        } else {
            out.push_back({bottom[i], top[j + 1], top[j]});
            ++j;
        }
    }
}

}  // namespace

Triangulation structured_rectangle(double w, double h, double target_size) {
    if (!(w > 0.0 && h > 0.0 && target_size > 0.0))
        throw Error("structured_rectangle: dimensions and size must be positive");
    const int nx = std::max(1, static_cast<int>(std::lround(w / target_size)));
    const int ny = std::max(1, static_cast<int>(std::lround(h / (0.866 * target_size))));
    const double dx = w / nx;
    const double dy = h / ny;

    std::vector<Vec2> pts;
    std::vector<std::vector<int>> rows(ny + 1);
    for (int j = 0; j <= ny; ++j) {
        const double y = j * dy;
        const bool offset = (j % 2 == 1);
        if (!offset) {
            for (int i = 0; i <= nx; ++i) {
                rows[j].push_back(static_cast<int>(pts.size()));
                pts.emplace_back(i * dx, y);
            }
        } else {
            rows[j].push_back(static_cast<int>(pts.size()));
            pts.emplace_back(0.0, y);
            for (int i = 0; i < nx; ++i) {
                rows[j].push_back(static_cast<int>(pts.size()));
                pts.emplace_back((i + 0.5) * dx, y);
            }
            rows[j].push_back(static_cast<int>(pts.size()));
            pts.emplace_back(w, y);
        }
    }

    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < ny; ++j) triangulate_strip(pts, rows[j], rows[j + 1], tris);
    return make_triangulation(std::move(pts), std::move(tris));
}

// ---------------------------------------------------------------------------
// Bowyer-Watson Delaunay
// ---------------------------------------------------------------------------

namespace {

struct DTri {
    std::array<int, 3> v;    // CCW
    std::array<int, 3> adj;  // neighbor across edge (v[i], v[i+1]); -1 = hull
    bool alive = true;
};

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

// > 0 when p lies strictly inside the circumcircle of CCW triangle (a,b,c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double ax = a.x() - p.x(), ay = a.y() - p.y();
    const double bx = b.x() - p.x(), by = b.y() - p.y();
    const double cx = c.x() - p.x(), cy = c.y() - p.y();
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

class DelaunayBuilder {
public:
    explicit DelaunayBuilder(const std::vector<Vec2>& input) : pts_(input) {
        Vec2 lo = pts_[0], hi = pts_[0];
        for (const Vec2& p : pts_) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const Vec2 c = 0.5 * (lo + hi);
        const double r = std::max((hi - lo).norm(), 1e-12) * 20.0;
        super_ = static_cast<int>(pts_.size());
        pts_.push_back(c + Vec2(-2.0 * r, -r));
        pts_.push_back(c + Vec2(2.0 * r, -r));
        pts_.push_back(c + Vec2(0.0, 2.0 * r));
        tris_.push_back({{super_, super_ + 1, super_ + 2}, {-1, -1, -1}, true});
    }

    void insert(int ip) {
        const Vec2& p = pts_[ip];
        const int start = locate(p);
        // Grow the cavity of triangles whose circumcircle contains p.
        std::vector<int> bad;
        std::vector<char> in_bad(tris_.size(), 0);
        std::vector<int> stack{start};
        in_bad[start] = 1;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            bad.push_back(t);
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].adj[e];
                if (nb < 0 || in_bad[nb]) continue;
                const auto& v = tris_[nb].v;
                if (incircle(pts_[v[0]], pts_[v[1]], pts_[v[2]], p) > 0.0) {
                    in_bad[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        // Boundary edges of the cavity, (a, b) with outside neighbor.
        struct CavityEdge {
            int a, b, outside;
        };
        std::vector<CavityEdge> edges;
        for (int t : bad) {
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].adj[e];
                if (nb >= 0 && in_bad[nb]) continue;
                edges.push_back({tris_[t].v[e], tris_[t].v[(e + 1) % 3], nb});
            }
        }
        for (int t : bad) tris_[t].alive = false;

        // Fan the cavity from p; link new triangles to the outside and to
        // each other via the shared edges (p, a)/(b, p).
        std::vector<int> fresh;
        fresh.reserve(edges.size());
        for (const CavityEdge& ce : edges) {
            const int t = alloc();
            tris_[t].v = {ce.a, ce.b, ip};
            tris_[t].adj = {ce.outside, -1, -1};
            if (ce.outside >= 0) {
                DTri& o = tris_[ce.outside];
                for (int e = 0; e < 3; ++e)
                    if (o.v[e] == ce.b && o.v[(e + 1) % 3] == ce.a) o.adj[e] = t;
            }
            fresh.push_back(t);
        }
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            for (std::size_t j = 0; j < fresh.size(); ++j) {
                if (i == j) continue;
                // edge 1 of i: (b_i, p); edge 2 of j: (p, a_j); they match when b_i == a_j
                if (tris_[fresh[i]].v[1] == tris_[fresh[j]].v[0]) {
                    tris_[fresh[i]].adj[1] = fresh[j];
                    tris_[fresh[j]].adj[2] = fresh[i];
                }
            }
        }
        last_ = fresh.empty() ? last_ : fresh.front();
    }

    std::vector<std::array<int, 3>> finish() {
        std::vector<std::array<int, 3>> out;
        for (const DTri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= super_ || t.v[1] >= super_ || t.v[2] >= super_) continue;
            out.push_back(t.v);
        }
        return out;
    }

private:
    int alloc() {
        tris_.push_back({});
        tris_.back().alive = true;
        return static_cast<int>(tris_.size()) - 1;
    }

    int locate(const Vec2& p) const {
        int t = (last_ >= 0 && tris_[last_].alive) ? last_ : first_alive();
        for (int steps = 0; steps < 4 * static_cast<int>(tris_.size()); ++steps) {
            bool moved = false;
            for (int e = 0; e < 3; ++e) {
                const Vec2& a = pts_[tris_[t].v[e]];
                const Vec2& b = pts_[tris_[t].v[(e + 1) % 3]];
                if (orient(a, b, p) < 0.0) {
                    const int nb = tris_[t].adj[e];
                    if (nb >= 0) {
                        t = nb;
                        moved = true;
                        break;
                    }
                }
            }
            if (!moved) return t;
        }
        // Walk cycled on a degenerate configuration; fall back to scanning.
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            if (!tris_[i].alive) continue;
            const auto& v = tris_[i].v;
            if (orient(pts_[v[0]], pts_[v[1]], p) >= 0.0 &&
                orient(pts_[v[1]], pts_[v[2]], p) >= 0.0 &&
                orient(pts_[v[2]], pts_[v[0]], p) >= 0.0)
                return static_cast<int>(i);
        }
        throw Error("delaunay: point location failed");
    }

    int first_alive() const {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive) return static_cast<int>(i);
        throw Error("delaunay: no triangles");
    }

    std::vector<Vec2> pts_;
    std::vector<DTri> tris_;
    int super_ = -1;
    int last_ = -1;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points) {
    if (points.size() < 3) throw Error("delaunay: need at least 3 points");
    DelaunayBuilder builder(points);
    for (std::size_t i = 0; i < points.size(); ++i) builder.insert(static_cast<int>(i));
    auto tris = builder.finish();
    // Compact away exactly degenerate slivers on collinear boundary runs.
    tris.erase(std::remove_if(tris.begin(), tris.end(),
                              [&](const std::array<int, 3>& t) {
                                  return tri_signed_area(points[t[0]], points[t[1]],
                                                         points[t[2]]) <= 0.0;
                              }),
               tris.end());
    return tris;
}

// ---------------------------------------------------------------------------
// Graded unstructured meshing
// ---------------------------------------------------------------------------

namespace {

std::vector<Vec2> sample_boundary(const MeshDomain& domain, const SizeField& size) {
    std::vector<Vec2> pts;
    const std::size_t n = domain.boundary.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = domain.boundary[i];
        const Vec2 b = domain.boundary[(i + 1) % n];
        const double len = (b - a).norm();
        const double target = std::max(1e-12, size(0.5 * (a + b)));
        const int div = std::max(1, static_cast<int>(std::lround(len / target)));
        for (int k = 0; k < div; ++k) pts.push_back(a + (static_cast<double>(k) / div) * (b - a));
    }
    return pts;
}

double min_boundary_distance(const MeshDomain& domain, const Vec2& p) {
    double d = 1e300;
    const std::size_t n = domain.boundary.size();
    for (std::size_t i = 0; i < n; ++i)
        d = std::min(d, point_segment_distance(p, domain.boundary[i],
                                               domain.boundary[(i + 1) % n]));
    return d;
}

void check_conformity(const MeshDomain& domain, const Triangulation& tri) {
    const std::size_t nb = domain.boundary.size();
    for (const auto& t : tri.tris) {
        for (int e = 0; e < 3; ++e) {
            const Vec2& a = tri.nodes[t[e]];
            const Vec2& b = tri.nodes[t[(e + 1) % 3]];
            for (std::size_t i = 0; i < nb; ++i) {
                const Vec2& c = domain.boundary[i];
                const Vec2& d = domain.boundary[(i + 1) % nb];
                if (segments_cross(a, b, c, d))
                    throw Error("generated mesh does not conform to the domain boundary");
            }
        }
    }
}

}  // namespace

Triangulation unstructured_mesh(const MeshDomain& domain, const SizeField& size, unsigned seed,
                                int smoothing_passes) {
    if (domain.boundary.size() < 3) throw Error("mesh domain needs a closed boundary polygon");

    std::vector<Vec2> fixed = sample_boundary(domain, size);
    const std::size_t n_fixed = fixed.size();

    Vec2 lo = domain.boundary[0], hi = domain.boundary[0];
    for (const Vec2& p : domain.boundary) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }

    double h_min = 1e300;
    for (const Vec2& p : fixed) h_min = std::min(h_min, size(p));

    // Hex lattice at the finest size, thinned by the local density, jittered.
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> jit(-0.08, 0.08);
    std::vector<Vec2> pts = fixed;
    const double dy = 0.866 * h_min;
    int row = 0;
    for (double y = lo.y() + 0.5 * dy; y < hi.y(); y += dy, ++row) {
        const double x0 = lo.x() + ((row % 2) ? 0.75 : 0.25) * h_min;
        for (double x = x0; x < hi.x(); x += h_min) {
            const Vec2 cand(x, y);
            const double s = size(cand);
            const double keep = (h_min / s) * (h_min / s);
            if (unit(rng) > keep) continue;
            if (!point_in_polygon(domain.boundary, cand)) continue;
            if (min_boundary_distance(domain, cand) < 0.55 * s) continue;
            pts.push_back(cand + s * Vec2(jit(rng), jit(rng)));
        }
    }

    // Smoothing: density-weighted star centroids, boundary fixed.
    for (int pass = 0; pass <= smoothing_passes; ++pass) {
        const auto tris = delaunay(pts);
        if (pass == smoothing_passes) {
            std::vector<std::array<int, 3>> kept;
            for (const auto& t : tris) {
                const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
                if (point_in_polygon(domain.boundary, c)) kept.push_back(t);
            }
            Triangulation out = make_triangulation(pts, kept);
            check_conformity(domain, out);
            return out;
        }
        std::vector<Vec2> acc(pts.size(), Vec2::Zero());
        std::vector<double> wsum(pts.size(), 0.0);
        for (const auto& t : tris) {
            const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
            if (!point_in_polygon(domain.boundary, c)) continue;
            const double area = tri_signed_area(pts[t[0]], pts[t[1]], pts[t[2]]);
            const double s = size(c);
            const double w = area / (s * s);
            for (int k = 0; k < 3; ++k) {
                acc[t[k]] += w * c;
                wsum[t[k]] += w;
            }
        }
        for (std::size_t i = n_fixed; i < pts.size(); ++i) {
            if (wsum[i] <= 0.0) continue;
            const Vec2 target = acc[i] / wsum[i];
            if (!point_in_polygon(domain.boundary, target)) continue;
            if (min_boundary_distance(domain, target) < 0.45 * size(target)) continue;
            pts[i] = target;
        }
    }
    throw Error("unreachable");
}

Triangulation unstructured_mesh_uniform(const MeshDomain& domain, double size, unsigned seed) {
    if (!(size > 0.0)) throw Error("mesh size must be positive");
    return unstructured_mesh(domain, [size](const Vec2&) { return size; }, seed);
}

}  // namespace dcm
