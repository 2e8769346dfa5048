#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcm/geometry.hpp"

namespace dcm {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Mode { PlaneStress, PlaneStrain };

enum class ElementKind { Triangle, Quad5, Quad4 };

struct Node {
    Vec2 pos;
    std::array<int, 3> dof{-1, -1, -1};  // u1, u2, phi3
    std::string tag;
    bool orphan = false;
};

// Planar interface between two Voronoi cells inside one element. The segment
// [p0, p1] lies on the perpendicular bisector of the edge (node_a, node_b);
// n points along the edge from the lower-indexed node to the higher one and
// m = rot90(n).
struct Facet {
    int element = -1;
    int node_a = -1, node_b = -1;    // global node ids, node_a < node_b
    int local_a = -1, local_b = -1;  // element-local node positions
    Vec2 p0, p1;
    Vec2 centroid;
    Vec2 n, m;
    double h = 0.0;    // facet length, signed (negative when outside the element)
    double ell = 0.0;  // edge length |x_b - x_a|
    Vec2 c_a, c_b;     // centroid - node position
};

struct Element {
    ElementKind kind = ElementKind::Triangle;
    std::vector<int> nodes;   // 3 or 4 global node ids, CCW
    std::vector<int> facets;  // facet indices, 3..5
    double area = 0.0;
    bool problem = false;     // any facet below the admissibility threshold
};

struct CellBoundarySegment {
    Vec2 a, b;     // sub-segment of a domain boundary edge owned by this cell
    Vec2 outward;  // unit outward normal of the domain boundary
};

// Rigid polygonal cell around one node, assembled from the per-element corner
// regions; moments are taken about the node position.
struct VoronoiCell {
    int node = -1;
    double area = 0.0;
    double sx = 0.0, sy = 0.0;
    double polar = 0.0;
    std::vector<std::vector<Vec2>> pieces;  // one corner polygon per incident element
    std::vector<CellBoundarySegment> boundary;
};

struct Triangulation {
    std::vector<Vec2> nodes;
    std::vector<std::string> node_tags;
    std::vector<std::array<int, 3>> tris;  // 0-based, stored CCW
    std::vector<std::string> warnings;
};

struct DualComplex {
    Mode mode = Mode::PlaneStrain;
    double thickness = 1.0;
    std::vector<Node> nodes;
    std::vector<Element> elements;
    std::vector<Facet> facets;
    std::vector<VoronoiCell> cells;
    double domain_area = 0.0;
    std::vector<std::string> warnings;
    Triangulation source;  // kept so the merge pass can rebuild elements

    int dof_count() const { return 3 * static_cast<int>(nodes.size()); }
    int problem_element_count() const;
    double min_facet_ratio() const;  // min over facets of h/ell
};

// Whitespace-delimited mesh files: node lines `id x y [tag]`, element lines
// `id n1 n2 n3`, ids 1-based. Triangles are reordered CCW on load; nodes
// referenced by no triangle are kept and flagged with a warning.
Triangulation load_triangulation(const std::string& node_path, const std::string& element_path);
void save_triangulation(const Triangulation& tri, const std::string& node_path,
                        const std::string& element_path);

// Validates ids/areas and normalizes orientation of a programmatically built
// point/triangle set.
Triangulation make_triangulation(std::vector<Vec2> points, std::vector<std::array<int, 3>> tris,
                                 std::vector<std::string> tags = {});

// Builds the triangle-only dual complex: per triangle, three facets spanning
// from the edge midpoints to the circumcenter. Right/obtuse triangles produce
// zero/negative facet lengths and are flagged, not rejected; run
// merge_problem_triangles afterward to obtain an admissible mesh.
DualComplex build_dual(const Triangulation& tri, double thickness, Mode mode);

// Combines every triangle holding a facet with h/ell below f_over_e_min with
// the neighbor across its longest edge into a five-facet quadrilateral
// (four-facet when the pair is exactly right-right).
DualComplex merge_problem_triangles(const DualComplex& dc, double f_over_e_min = 0.05);

// Geometry consistency checks (orthogonality, area identities, cell
// partition); throws Error on violation. `require_admissible` additionally
// enforces the facet ratio threshold on triangles.
void validate_complex(const DualComplex& dc, double f_over_e_min = 0.05,
                      bool require_admissible = true);

// Facet table dump (element, nodes, n, m, h, ell) for debugging.
void dump_facet_table(const DualComplex& dc, std::ostream& os);

// Mass and moments of one cell polygon: M = rho*s*area, first moments and
// polar moment about the node. Throws on degenerate (non-positive area) input.
struct CellMassProperties {
    double mass = 0.0;
    double sx = 0.0, sy = 0.0;
    double polar = 0.0;
};
CellMassProperties cell_mass_properties(const std::vector<Vec2>& polygon, const Vec2& node,
                                        double rho, double thickness);

}  // namespace dcm
