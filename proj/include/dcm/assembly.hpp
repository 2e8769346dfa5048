#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "dcm/element_ops.hpp"
#include "dcm/material.hpp"
#include "dcm/mesh.hpp"

namespace dcm {

using SpMat = Eigen::SparseMatrix<double>;
using VecX = Eigen::VectorXd;

// Flattened per-facet/per-element operator data for fast strain evaluation
// and force scatter in the time-stepping loops. Geometry is immutable once
// the complex is built, so this cache is computed once per analysis.
struct AssemblyCache {
    struct FacetOps {
        int element = 0;
        int dof_a = 0, dof_b = 0;  // base DOF index (u1) of the two nodes
        double nx, ny, mx, my;
        double ra_n, rb_n, ra_m, rb_m;  // rotation coefficients (v1*c2 - v2*c1)
        double inv_ell;
        double ell, h;
        double sh;       // thickness * h   (facet area / unit traction lever)
        double measure;  // thickness * h * ell (energy measure)
    };
    std::vector<FacetOps> facet;               // aligned with dc.facets
    std::vector<std::vector<int>> elem_dofs;   // global DOF ids per element
    std::vector<VecX> elem_V;                  // volumetric row in element-local DOFs
    double alpha = 1.0;
};

AssemblyCache build_cache(const DualComplex& dc, double nu);

// Facet strains (eps_N, eps_M and the owning element's eps_V) from the global
// DOF vector q; writes into the aligned state vector.
void update_facet_strains(const DualComplex& dc, const AssemblyCache& cache, const VecX& q,
                          std::vector<FacetState>& states);

// Facet states with per-facet softening parameters; verifies ell_f < ell_t.
std::vector<FacetState> init_facet_states(const DualComplex& dc, const MaterialParams& mat);

// Damage ratchet over all facets from the current strains (principal facet
// strain via the reconstructed tensor) followed by traction evaluation.
void update_damage_and_tractions(const DualComplex& dc, std::vector<FacetState>& states,
                                 const MaterialParams& mat, bool with_damage);

// Internal force vector F = sum_f s*h_f*ell_f (t_N N_f^T + t_M M_f^T) using
// the tractions stored in the states.
VecX internal_forces(const DualComplex& dc, const AssemblyCache& cache,
                     const std::vector<FacetState>& states);

// Global elastic stiffness (damage ignored).
SpMat global_stiffness(const DualComplex& dc, const MaterialParams& mat);

// Global secant stiffness with per-facet (1 - D) scaling.
SpMat global_secant_stiffness(const DualComplex& dc, const MaterialParams& mat,
                              const std::vector<FacetState>& states);

// Strain energy sum_f 1/2 * measure * (t_N eps_N + t_M eps_M) with the stored
// (possibly damage-scaled) tractions.
double strain_energy(const AssemblyCache& cache, const std::vector<FacetState>& states);

// Undamaged energy density per facet (the quantity released by damage growth).
double facet_elastic_energy(const AssemblyCache::FacetOps& ops, const FacetState& s,
                            const MaterialParams& mat);

}  // namespace dcm
