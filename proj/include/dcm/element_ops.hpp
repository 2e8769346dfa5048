#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dcm/material.hpp"
#include "dcm/mesh.hpp"

namespace dcm {

using RowX = Eigen::RowVectorXd;
using MatX = Eigen::MatrixXd;

// Per-facet strain rows against the element DOF vector
// Q = [u1 u2 phi3 | ...] (one block per element node, CCW order):
// eps_N = N Q, eps_M = M Q.
struct FacetRows {
    RowX N;
    RowX M;
};
FacetRows facet_rows(const DualComplex& dc, const Facet& f);

// All operators of one element: facet rows, the volumetric row
// V = (3 A alpha)^-1 sum_f ell_f h_f N_f and the deviatoric rows D_f = N_f - V.
struct ElementOperators {
    int dofs = 0;
    std::vector<FacetRows> facet;  // aligned with Element::facets
    RowX V;
    std::vector<RowX> D;
};
ElementOperators element_operators(const DualComplex& dc, int elem_id, double nu);

RowX volumetric_row(const DualComplex& dc, int elem_id, double alpha);

// Elastic element stiffness
//   K = 2 s A E_V V^T V
//     + sum_f s h_f ell_f [E_D D_f^T D_f + (E_V+E_D)/2 (V^T D_f + D_f^T V)
//                          + E_D M_f^T M_f].
// Elements with a facet below the admissibility threshold should have been
// merged; they are refused unless `diagnostic` is set (spectral studies of
// degenerate shapes need their singular matrices).
MatX element_stiffness(const DualComplex& dc, int elem_id, double E, double nu,
                       bool diagnostic = false, double f_over_e_min = 0.05);

// Secant stiffness with per-facet (1 - D_f) scaling of every modulus.
MatX element_secant_stiffness(const DualComplex& dc, int elem_id, const MaterialParams& mat,
                              const std::vector<double>& facet_damage);

// Per-node 3x3 consistent mass block rho*s*[[A,0,-Sy],[0,A,Sx],[-Sy,Sx,I]]
// from the Voronoi cell moments.
Eigen::Matrix3d node_mass_block(const VoronoiCell& cell, double rho, double thickness);

// Diagonal (lumped) global mass vector; off-diagonal first moments are
// discarded. Throws if any non-orphan cell has nonpositive area.
Eigen::VectorXd lumped_mass_vector(const DualComplex& dc, double rho);

struct SpectralResult {
    Eigen::VectorXd eigenvalues;  // ascending
    int nullity = 0;              // |lambda| < 1e-9 * max|lambda|
    double lambda_min_positive = 0.0;
    bool defective = false;  // nullity > 3 or negative eigenvalues
};
SpectralResult spectral_check(const MatX& K);

// Rigid-body DOF vector (translation + rotation omega about point p) for an
// element, in its local DOF ordering.
Eigen::VectorXd rigid_mode(const DualComplex& dc, int elem_id, const Vec2& translation,
                           double omega, const Vec2& p);

// Structured-text dump of one element's operator rows and matrices for
// cross-checking against an independent implementation.
void dump_element_operators(const DualComplex& dc, int elem_id, double E, double nu, double rho,
                            std::ostream& os);

}  // namespace dcm
