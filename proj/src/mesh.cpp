#include "dcm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dcm {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Per-triangle facet geometry of the raw (unmerged) dual: circumcenter plus
// signed perpendicular offsets toward the triangle interior, one per edge.
struct TriGeom {
    Vec2 circumcenter;
    double area = 0.0;
    std::array<double, 3> h{};    // edge i = (nodes[i], nodes[i+1])
    std::array<double, 3> ell{};
    double min_ratio = 1e300;
};

TriGeom tri_geom(const Triangulation& tri, const std::array<int, 3>& t) {
    TriGeom g;
    const Vec2 a = tri.nodes[t[0]], b = tri.nodes[t[1]], c = tri.nodes[t[2]];
    g.area = tri_signed_area(a, b, c);
    auto cc = circumcenter(a, b, c);
    if (!cc) throw Error("degenerate (collinear) triangle encountered");
    g.circumcenter = *cc;
    const std::array<Vec2, 3> p{a, b, c};
    for (int e = 0; e < 3; ++e) {
        const Vec2 p0 = p[e], p1 = p[(e + 1) % 3];
        const Vec2 mid = 0.5 * (p0 + p1);
        const Vec2 dir = (p1 - p0).normalized();
        g.ell[e] = (p1 - p0).norm();
        g.h[e] = (g.circumcenter - mid).dot(rot90(dir));  // interior is left of a CCW edge
        g.min_ratio = std::min(g.min_ratio, g.h[e] / g.ell[e]);
    }
    return g;
}

Facet make_edge_facet(const std::vector<Node>& nodes, int elem_id, int ga, int gb,
                      int local_a_of_ga, int local_a_of_gb, const Vec2& circum) {
    Facet f;
    f.element = elem_id;
    f.node_a = std::min(ga, gb);
    f.node_b = std::max(ga, gb);
    f.local_a = (f.node_a == ga) ? local_a_of_ga : local_a_of_gb;
    f.local_b = (f.node_a == ga) ? local_a_of_gb : local_a_of_ga;
    const Vec2 xa = nodes[f.node_a].pos, xb = nodes[f.node_b].pos;
    f.ell = (xb - xa).norm();
    if (f.ell <= 0.0) throw Error("zero-length element edge");
    f.n = (xb - xa) / f.ell;
    f.m = rot90(f.n);
    f.p0 = 0.5 * (xa + xb);
    f.p1 = circum;
    f.centroid = 0.5 * (f.p0 + f.p1);
    f.c_a = f.centroid - xa;
    f.c_b = f.centroid - xb;
    return f;
}

std::vector<Vec2> element_polygon(const DualComplex& dc, const Element& el) {
    std::vector<Vec2> poly;
    poly.reserve(el.nodes.size());
    for (int n : el.nodes) poly.push_back(dc.nodes[n].pos);
    return poly;
}

void build_cells_and_boundary(DualComplex& dc) {
    dc.cells.assign(dc.nodes.size(), VoronoiCell{});
    for (std::size_t i = 0; i < dc.nodes.size(); ++i) dc.cells[i].node = static_cast<int>(i);

    auto add_piece = [&](int node, std::vector<Vec2> poly) {
        const CellMoments m = polygon_moments_about(poly, dc.nodes[node].pos);
        VoronoiCell& cell = dc.cells[node];
        cell.area += m.area;
        cell.sx += m.sx;
        cell.sy += m.sy;
        cell.polar += m.polar;
        cell.pieces.push_back(std::move(poly));
    };

    for (const Element& el : dc.elements) {
        const int nn = static_cast<int>(el.nodes.size());
        if (el.kind == ElementKind::Triangle) {
            const Vec2 O = dc.facets[el.facets[0]].p1;  // shared circumcenter
            for (int i = 0; i < 3; ++i) {
                const Vec2 xi = dc.nodes[el.nodes[i]].pos;
                const Vec2 mid_next = 0.5 * (xi + dc.nodes[el.nodes[(i + 1) % 3]].pos);
                const Vec2 mid_prev = 0.5 * (xi + dc.nodes[el.nodes[(i + 2) % 3]].pos);
                add_piece(el.nodes[i], {xi, mid_next, O, mid_prev});
            }
        } else {
            // Quad node order (I, J, K, L) with the interior wall between I
            // and K running from O1 (owner of edges KL, LI) to O2 (IJ, JK).
            const Vec2 O2 = dc.facets[el.facets[0]].p1;
            const Vec2 O1 = dc.facets[el.facets[2]].p1;
            const Vec2 xI = dc.nodes[el.nodes[0]].pos;
            const Vec2 xJ = dc.nodes[el.nodes[1]].pos;
            const Vec2 xK = dc.nodes[el.nodes[2]].pos;
            const Vec2 xL = dc.nodes[el.nodes[3]].pos;
            add_piece(el.nodes[0], {xI, 0.5 * (xI + xJ), O2, O1, 0.5 * (xL + xI)});
            add_piece(el.nodes[1], {xJ, 0.5 * (xJ + xK), O2, 0.5 * (xI + xJ)});
            add_piece(el.nodes[2], {xK, 0.5 * (xK + xL), O1, O2, 0.5 * (xJ + xK)});
            add_piece(el.nodes[3], {xL, 0.5 * (xL + xI), O1, 0.5 * (xK + xL)});
        }
        (void)nn;
    }

    // Boundary edges: element polygon edges owned by exactly one element.
    std::map<EdgeKey, int> edge_count;
    std::map<EdgeKey, std::pair<int, int>> edge_dir;  // CCW orientation in its element
    for (const Element& el : dc.elements) {
        const int nn = static_cast<int>(el.nodes.size());
        for (int i = 0; i < nn; ++i) {
            const int a = el.nodes[i], b = el.nodes[(i + 1) % nn];
            edge_count[edge_key(a, b)] += 1;
            edge_dir[edge_key(a, b)] = {a, b};
        }
    }
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        const auto [a, b] = edge_dir[key];
        const Vec2 xa = dc.nodes[a].pos, xb = dc.nodes[b].pos;
        const Vec2 mid = 0.5 * (xa + xb);
        const Vec2 outward = -rot90((xb - xa).normalized());
        dc.cells[a].boundary.push_back({xa, mid, outward});
        dc.cells[b].boundary.push_back({mid, xb, outward});
    }
}

void flag_problem_elements(DualComplex& dc, double ratio) {
    for (Element& el : dc.elements) {
        el.problem = false;
        for (int fi : el.facets) {
            const Facet& f = dc.facets[fi];
            if (f.h / f.ell < ratio) el.problem = true;
        }
    }
}

}  // namespace

int DualComplex::problem_element_count() const {
    return static_cast<int>(
        std::count_if(elements.begin(), elements.end(), [](const Element& e) { return e.problem; }));
}

double DualComplex::min_facet_ratio() const {
    double r = 1e300;
    for (const Facet& f : facets) r = std::min(r, f.h / f.ell);
    return r;
}

Triangulation make_triangulation(std::vector<Vec2> points, std::vector<std::array<int, 3>> tris,
                                 std::vector<std::string> tags) {
    Triangulation tri;
    tri.nodes = std::move(points);
    tri.node_tags = std::move(tags);
    tri.node_tags.resize(tri.nodes.size());
    for (const Vec2& p : tri.nodes)
        if (!p.allFinite()) throw Error("non-finite node coordinates");
    const int n = static_cast<int>(tri.nodes.size());
    std::vector<bool> used(tri.nodes.size(), false);
    for (auto& t : tris) {
        for (int k : t)
            if (k < 0 || k >= n) throw Error("triangle references unknown node " + std::to_string(k + 1));
        const double area = tri_signed_area(tri.nodes[t[0]], tri.nodes[t[1]], tri.nodes[t[2]]);
        if (area == 0.0) throw Error("zero-area triangle (nodes " + std::to_string(t[0] + 1) + " " +
                                     std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + ")");
        if (area < 0.0) std::swap(t[1], t[2]);
        for (int k : t) used[k] = true;
    }
    tri.tris = std::move(tris);
    for (int i = 0; i < n; ++i)
        if (!used[i])
            tri.warnings.push_back("node " + std::to_string(i + 1) +
                                   " is not referenced by any triangle; kept as orphan");
    return tri;
}

Triangulation load_triangulation(const std::string& node_path, const std::string& element_path) {
    auto open = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open mesh file: " + path);
        return in;
    };

    std::map<int, Vec2> node_by_id;
    std::map<int, std::string> tag_by_id;
    {
        std::ifstream in = open(node_path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            int id;
            if (!(ls >> id)) {
                if (ls.eof()) continue;  // blank
                throw Error(node_path + ":" + std::to_string(lineno) + ": malformed node line");
            }
            double x, y;
            if (!(ls >> x >> y))
                throw Error(node_path + ":" + std::to_string(lineno) + ": malformed node line");
            if (node_by_id.count(id))
                throw Error(node_path + ":" + std::to_string(lineno) + ": duplicate node id " +
                            std::to_string(id));
            std::string tag;
            ls >> tag;
            node_by_id[id] = Vec2(x, y);
            tag_by_id[id] = tag;
        }
    }
    if (node_by_id.empty()) throw Error(node_path + ": no nodes");
    const int n = static_cast<int>(node_by_id.size());
    std::vector<Vec2> points(n);
    std::vector<std::string> tags(n);
    for (const auto& [id, pos] : node_by_id) {
        if (id < 1 || id > n)
            throw Error(node_path + ": node ids must be 1.." + std::to_string(n) + ", got " +
                        std::to_string(id));
        points[id - 1] = pos;
        tags[id - 1] = tag_by_id[id];
    }

    std::vector<std::array<int, 3>> tris;
    {
        std::ifstream in = open(element_path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            int id;
            if (!(ls >> id)) {
                if (ls.eof()) continue;
                throw Error(element_path + ":" + std::to_string(lineno) + ": malformed element line");
            }
            int a, b, c;
            if (!(ls >> a >> b >> c))
                throw Error(element_path + ":" + std::to_string(lineno) + ": malformed element line");
            for (int k : {a, b, c})
                if (k < 1 || k > n)
                    throw Error(element_path + ":" + std::to_string(lineno) +
                                ": element references unknown node " + std::to_string(k));
            tris.push_back({a - 1, b - 1, c - 1});
        }
    }
    return make_triangulation(std::move(points), std::move(tris), std::move(tags));
}

void save_triangulation(const Triangulation& tri, const std::string& node_path,
                        const std::string& element_path) {
    std::ofstream nf(node_path);
    if (!nf) throw Error("cannot write " + node_path);
    nf.precision(17);
    for (std::size_t i = 0; i < tri.nodes.size(); ++i) {
        nf << (i + 1) << " " << tri.nodes[i].x() << " " << tri.nodes[i].y();
        if (!tri.node_tags[i].empty()) nf << " " << tri.node_tags[i];
        nf << "\n";
    }
    std::ofstream ef(element_path);
    if (!ef) throw Error("cannot write " + element_path);
    for (std::size_t i = 0; i < tri.tris.size(); ++i)
        ef << (i + 1) << " " << (tri.tris[i][0] + 1) << " " << (tri.tris[i][1] + 1) << " "
           << (tri.tris[i][2] + 1) << "\n";
}

namespace {

// Shared element construction: `pairs` maps each consumed triangle to its
// merge partner (lowest index first identifies the pair).
DualComplex assemble(const Triangulation& tri, double thickness, Mode mode,
                     const std::vector<std::pair<int, int>>& pairs, double quad4_tol) {
    DualComplex dc;
    dc.mode = mode;
    dc.thickness = thickness;
    dc.source = tri;
    dc.warnings = tri.warnings;
    dc.nodes.resize(tri.nodes.size());
    for (std::size_t i = 0; i < tri.nodes.size(); ++i) {
        dc.nodes[i].pos = tri.nodes[i];
        dc.nodes[i].tag = tri.node_tags[i];
        dc.nodes[i].dof = {3 * static_cast<int>(i), 3 * static_cast<int>(i) + 1,
                           3 * static_cast<int>(i) + 2};
    }

    std::vector<int> partner(tri.tris.size(), -1);
    for (const auto& [a, b] : pairs) {
        partner[a] = b;
        partner[b] = a;
    }

    std::vector<TriGeom> geom(tri.tris.size());
    for (std::size_t t = 0; t < tri.tris.size(); ++t) geom[t] = tri_geom(tri, tri.tris[t]);

    std::vector<bool> done(tri.tris.size(), false);
    for (std::size_t t = 0; t < tri.tris.size(); ++t) {
        if (done[t]) continue;
        if (partner[t] < 0) {
            const auto& tn = tri.tris[t];
            Element el;
            el.kind = ElementKind::Triangle;
            el.nodes = {tn[0], tn[1], tn[2]};
            el.area = geom[t].area;
            const int eid = static_cast<int>(dc.elements.size());
            for (int e = 0; e < 3; ++e) {
                Facet f = make_edge_facet(dc.nodes, eid, tn[e], tn[(e + 1) % 3], e, (e + 1) % 3,
                                          geom[t].circumcenter);
                f.h = geom[t].h[e];
                el.facets.push_back(static_cast<int>(dc.facets.size()));
                dc.facets.push_back(f);
            }
            dc.elements.push_back(std::move(el));
            done[t] = true;
            continue;
        }

        const std::size_t u = static_cast<std::size_t>(partner[t]);
        done[t] = done[u] = true;
        const auto& t1 = tri.tris[t];
        const auto& t2 = tri.tris[u];
        // Shared edge (P, Q), traversed P->Q in t1.
        int e1 = -1, e2 = -1;
        for (int i = 0; i < 3 && e1 < 0; ++i)
            for (int j = 0; j < 3; ++j)
                if (t1[i] == t2[(j + 1) % 3] && t1[(i + 1) % 3] == t2[j]) {
                    e1 = i;
                    e2 = j;
                    break;
                }
        if (e1 < 0) throw Error("merge pair does not share an edge");
        const int P = t1[e1], Q = t1[(e1 + 1) % 3];
        const int R1 = t1[(e1 + 2) % 3];  // apex of t1
        const int R2 = t2[(e2 + 2) % 3];  // apex of t2
        const Vec2 O1 = geom[t].circumcenter, O2 = geom[u].circumcenter;

        Element el;
        el.nodes = {P, R2, Q, R1};  // CCW: union boundary of the two triangles
        el.area = geom[t].area + geom[u].area;
        const int eid = static_cast<int>(dc.elements.size());

        // Convexity of the quad (strict).
        for (int i = 0; i < 4; ++i) {
            const Vec2 a = dc.nodes[el.nodes[i]].pos;
            const Vec2 b = dc.nodes[el.nodes[(i + 1) % 4]].pos;
            const Vec2 c = dc.nodes[el.nodes[(i + 2) % 4]].pos;
            if (tri_signed_area(a, b, c) <= 0.0)
                throw Error("merging triangles " + std::to_string(t + 1) + " and " +
                            std::to_string(u + 1) + " would create a non-convex quadrilateral");
        }

        // Interior wall between P and Q: from O1 to O2 along the bisector of
        // PQ; its length is the sum of the two signed circumcenter offsets.
        const double ell5 = (dc.nodes[Q].pos - dc.nodes[P].pos).norm();
        auto edge_of = [](const std::array<int, 3>& tn, int a, int b) {
            for (int i = 0; i < 3; ++i)
                if ((tn[i] == a && tn[(i + 1) % 3] == b) || (tn[i] == b && tn[(i + 1) % 3] == a))
                    return i;
            throw Error("internal: edge lookup");
        };
        const double h5 = geom[t].h[edge_of(t1, P, Q)] + geom[u].h[edge_of(t2, P, Q)];
        if (h5 < -quad4_tol * ell5)
            throw Error("merging triangles " + std::to_string(t + 1) + " and " +
                        std::to_string(u + 1) + ": cells across the shared edge do not meet");
        el.kind = (std::abs(h5) <= quad4_tol * ell5) ? ElementKind::Quad4 : ElementKind::Quad5;

        // Boundary facets in node order IJ, JK, KL, LI; owners: t2 for the
        // first two, t1 for the last two.
        struct EdgeSpec {
            int a, b, la, lb;
            const Vec2* O;
            std::size_t owner;
        };
        const std::array<EdgeSpec, 4> edges{{{P, R2, 0, 1, &O2, u},
                                             {R2, Q, 1, 2, &O2, u},
                                             {Q, R1, 2, 3, &O1, t},
                                             {R1, P, 3, 0, &O1, t}}};
        for (const auto& es : edges) {
            Facet f = make_edge_facet(dc.nodes, eid, es.a, es.b, es.la, es.lb, *es.O);
            f.h = geom[es.owner].h[edge_of(tri.tris[es.owner], es.a, es.b)];
            el.facets.push_back(static_cast<int>(dc.facets.size()));
            dc.facets.push_back(f);
        }
        if (el.kind == ElementKind::Quad5) {
            Facet f;
            f.element = eid;
            f.node_a = std::min(P, Q);
            f.node_b = std::max(P, Q);
            f.local_a = (f.node_a == P) ? 0 : 2;
            f.local_b = (f.node_a == P) ? 2 : 0;
            const Vec2 xa = dc.nodes[f.node_a].pos, xb = dc.nodes[f.node_b].pos;
            f.ell = ell5;
            f.n = (xb - xa) / f.ell;
            f.m = rot90(f.n);
            f.p0 = O1;
            f.p1 = O2;
            f.h = h5;
            f.centroid = 0.5 * (O1 + O2);
            f.c_a = f.centroid - xa;
            f.c_b = f.centroid - xb;
            el.facets.push_back(static_cast<int>(dc.facets.size()));
            dc.facets.push_back(f);
        }
        dc.elements.push_back(std::move(el));
    }

    for (std::size_t i = 0; i < dc.nodes.size(); ++i) dc.nodes[i].orphan = true;
    for (const Element& el : dc.elements)
        for (int n : el.nodes) dc.nodes[n].orphan = false;

    dc.domain_area = 0.0;
    for (const Element& el : dc.elements) dc.domain_area += el.area;

    build_cells_and_boundary(dc);
    return dc;
}

}  // namespace

DualComplex build_dual(const Triangulation& tri, double thickness, Mode mode) {
    if (thickness <= 0.0) throw Error("thickness must be positive");
    DualComplex dc = assemble(tri, thickness, mode, {}, 1e-12);
    flag_problem_elements(dc, 0.05);
    return dc;
}

DualComplex merge_problem_triangles(const DualComplex& dc, double f_over_e_min) {
    if (f_over_e_min < 0.0) throw Error("f_over_e_min must be nonnegative");
    const Triangulation& tri = dc.source;

    std::vector<TriGeom> geom(tri.tris.size());
    for (std::size_t t = 0; t < tri.tris.size(); ++t) geom[t] = tri_geom(tri, tri.tris[t]);

    std::map<EdgeKey, std::vector<int>> edge_tris;
    for (std::size_t t = 0; t < tri.tris.size(); ++t)
        for (int e = 0; e < 3; ++e)
            edge_tris[edge_key(tri.tris[t][e], tri.tris[t][(e + 1) % 3])].push_back(
                static_cast<int>(t));

    std::vector<int> problems;
    for (std::size_t t = 0; t < tri.tris.size(); ++t)
        if (geom[t].min_ratio < f_over_e_min) problems.push_back(static_cast<int>(t));
    std::sort(problems.begin(), problems.end(),
              [&](int a, int b) { return geom[a].min_ratio < geom[b].min_ratio; });

    std::vector<bool> consumed(tri.tris.size(), false);
    std::vector<std::pair<int, int>> pairs;
    for (int t : problems) {
        if (consumed[t]) continue;
        // Merge across the edge whose facet degenerates; that is the longest
        // edge of a right/obtuse triangle. Remaining problem edges act as
        // fallbacks when that neighbor was already consumed.
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return geom[t].h[a] / geom[t].ell[a] < geom[t].h[b] / geom[t].ell[b];
        });
        int chosen = -1;
        for (int e : order) {
            if (geom[t].h[e] / geom[t].ell[e] >= f_over_e_min) break;
            const auto& adj =
                edge_tris[edge_key(tri.tris[t][e], tri.tris[t][(e + 1) % 3])];
            for (int other : adj) {
                if (other == t || consumed[other]) continue;
                chosen = other;
                break;
            }
            if (chosen >= 0) break;
        }
        if (chosen < 0)
            throw Error("problem triangle " + std::to_string(t + 1) +
                        " (facet/edge ratio " + std::to_string(geom[t].min_ratio) +
                        ") has no mergeable neighbor");
        consumed[t] = consumed[chosen] = true;
        pairs.emplace_back(t, chosen);
    }

    DualComplex merged = assemble(tri, dc.thickness, dc.mode, pairs, 1e-12);
    flag_problem_elements(merged, f_over_e_min);
    validate_complex(merged, f_over_e_min, true);
    return merged;
}

void validate_complex(const DualComplex& dc, double f_over_e_min, bool require_admissible) {
    for (const Facet& f : dc.facets) {
        const Vec2 xa = dc.nodes[f.node_a].pos, xb = dc.nodes[f.node_b].pos;
        const Vec2 edge_dir = (xb - xa) / f.ell;
        if (std::abs(f.n.norm() - 1.0) > 1e-12 || std::abs(f.m.norm() - 1.0) > 1e-12)
            throw Error("facet frame vectors not unit length");
        if (std::abs(f.n.dot(f.m)) > 1e-12) throw Error("facet frame not orthogonal");
        if (std::abs(f.n.dot(edge_dir) - 1.0) > 1e-12)
            throw Error("facet normal not aligned with its element edge");
        if (f.ell <= 0.0) throw Error("nonpositive edge length");
    }

    for (std::size_t e = 0; e < dc.elements.size(); ++e) {
        const Element& el = dc.elements[e];
        if (el.area <= 0.0) throw Error("element " + std::to_string(e + 1) + ": nonpositive area");
        double sum = 0.0;
        for (int fi : el.facets) sum += dc.facets[fi].h * dc.facets[fi].ell;
        if (std::abs(sum - 2.0 * el.area) > 1e-10 * el.area)
            throw Error("element " + std::to_string(e + 1) +
                        ": facet area identity violated (sum h*ell != 2A)");
        if (require_admissible) {
            const auto poly = element_polygon(dc, el);
            for (std::size_t k = 0; k < el.facets.size(); ++k) {
                const Facet& f = dc.facets[el.facets[k]];
                const bool fifth = (el.kind == ElementKind::Quad5 && k == 4);
                const double min_ratio = fifth ? 0.0 : f_over_e_min;
                if (f.h / f.ell < min_ratio)
                    throw Error("element " + std::to_string(e + 1) + ": facet ratio " +
                                std::to_string(f.h / f.ell) + " below threshold");
                if (!point_in_polygon(poly, f.centroid))
                    throw Error("element " + std::to_string(e + 1) +
                                ": facet centroid outside the element polygon");
            }
        }
    }

    double cell_area = 0.0;
    for (const VoronoiCell& c : dc.cells) {
        cell_area += c.area;
        if (require_admissible && !dc.nodes[c.node].orphan && c.area <= 0.0)
            throw Error("cell around node " + std::to_string(c.node + 1) + ": nonpositive area");
    }
    if (std::abs(cell_area - dc.domain_area) > 1e-8 * dc.domain_area)
        throw Error("Voronoi cell areas do not partition the domain");
}

void dump_facet_table(const DualComplex& dc, std::ostream& os) {
    os << "# facet element node_a node_b n1 n2 m1 m2 h ell\n";
    os.precision(12);
    for (std::size_t i = 0; i < dc.facets.size(); ++i) {
        const Facet& f = dc.facets[i];
        os << i << " " << f.element << " " << (f.node_a + 1) << " " << (f.node_b + 1) << " "
           << f.n.x() << " " << f.n.y() << " " << f.m.x() << " " << f.m.y() << " " << f.h << " "
           << f.ell << "\n";
    }
}

CellMassProperties cell_mass_properties(const std::vector<Vec2>& polygon, const Vec2& node,
                                        double rho, double thickness) {
    if (polygon.size() < 3) throw Error("cell polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < polygon.size(); ++i)
        for (std::size_t j = i + 1; j < polygon.size(); ++j)
            if (segments_cross(polygon[i], polygon[(i + 1) % polygon.size()], polygon[j],
                               polygon[(j + 1) % polygon.size()]))
                throw Error("self-intersecting cell polygon");
    const CellMoments m = polygon_moments_about(polygon, node);
    if (m.area <= 0.0) throw Error("degenerate cell polygon (nonpositive area)");
    CellMassProperties out;
    out.mass = rho * thickness * m.area;
    out.sx = m.sx;
    out.sy = m.sy;
    out.polar = m.polar;
    return out;
}

}  // namespace dcm
