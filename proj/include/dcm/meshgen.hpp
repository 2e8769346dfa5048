#pragma once

#include <functional>
#include <vector>

#include "dcm/mesh.hpp"

namespace dcm {

// Offset-row (near-equilateral) triangulation of the rectangle [0,w] x [0,h].
// Interior rows are shifted by half a pitch; the first and last point of each
// shifted row is clamped onto the vertical sides, which produces right
// triangles there that the merge pass turns into quadrilaterals.
Triangulation structured_rectangle(double w, double h, double target_size);

using SizeField = std::function<double(const Vec2&)>;

// Simple polygon domain (CCW outer boundary, indentations allowed, no holes).
struct MeshDomain {
    std::vector<Vec2> boundary;
};

// Plain Delaunay triangulation of a point set (Bowyer-Watson); triangles CCW.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points);

// Graded unstructured mesh: boundary polyline sampled at the local size,
// interior seeded on a thinned hex lattice, then a few passes of
// density-weighted star-centroid smoothing under Delaunay retriangulation.
// Deterministic for a fixed seed. Triangles whose centroid falls outside the
// domain polygon (e.g. inside a notch) are discarded; the result is checked
// for boundary conformity.
Triangulation unstructured_mesh(const MeshDomain& domain, const SizeField& size,
                                unsigned seed = 1, int smoothing_passes = 8);

// Uniform-size convenience wrapper.
Triangulation unstructured_mesh_uniform(const MeshDomain& domain, double size, unsigned seed = 1);

}  // namespace dcm
