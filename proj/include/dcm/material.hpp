#pragma once

#include "dcm/geometry.hpp"
#include "dcm/mesh.hpp"

namespace dcm {

struct MaterialParams {
    double E = 0.0;        // Young's modulus (Pa)
    double nu = 0.0;       // Poisson's ratio
    double rho = 0.0;      // density (kg/m^3)
    double sigma_t = 0.0;  // tensile strength (Pa)
    double ell_t = 0.0;    // Hillerborg characteristic length (m)

    double eps_t() const { return sigma_t / E; }
    double G_t() const { return ell_t * sigma_t * sigma_t / (2.0 * E); }
    double E_V() const { return E / (1.0 - 2.0 * nu); }
    double E_D() const { return E / (1.0 + nu); }

    static MaterialParams from_fracture_energy(double E, double nu, double rho, double sigma_t,
                                               double G_t);
    void validate() const;  // throws Error on out-of-range parameters
};

// Volumetric scaling of Eq.-20 type facet sums: 1 in plane strain,
// (1-nu)/(1-2nu) in plane stress. Fails for incompressible plane stress.
double alpha_factor(Mode mode, double nu);

struct Tractions {
    double t_N = 0.0;
    double t_M = 0.0;
};

// t_N = E_V eps_V + E_D (eps_N - eps_V); t_M = E_D eps_M.
Tractions elastic_tractions(double eps_N, double eps_M, double eps_V, const MaterialParams& mat);

struct SymTensor2D {
    double t11 = 0.0, t12 = 0.0, t22 = 0.0;
    double t33 = 0.0;  // out-of-plane component (zero in plane strain for strains)
};

// Recovers the full strain tensor at a facet from its normal/tangential
// strains plus the element volumetric strain, by inverting the projection
// system with the symmetrized tangential projector M12 = (n1*m2 + n2*m1)/2.
SymTensor2D facet_strain_tensor(double eps_N, double eps_M, double eps_V, const Vec2& n,
                                const Vec2& m, double nu, Mode mode);

// Same inversion applied to (t_N, t_M, sigma_V); the trace relation follows
// the constitutive split (sigma_33 = 0 in plane stress, nu*(s11+s22) in
// plane strain).
SymTensor2D facet_stress_tensor(double t_N, double t_M, double sigma_V, const Vec2& n,
                                const Vec2& m, const MaterialParams& mat, Mode mode);

// Largest principal value: in-plane eigenvalues, and additionally t33 for
// plane stress where the lateral contraction can govern.
double principal_max(const SymTensor2D& t, Mode mode);

// Facet softening parameter eps_F = (eps_t/2)(ell_t/ell_f - 1).
// ell_f >= ell_t means snap-back at the facet level and is refused.
double facet_softening_strain(const MaterialParams& mat, double ell_f);

// D = 1 - (eps_t/eps_max) exp(-<eps_max - eps_t>/eps_F), clamped to [0, 1).
double damage_of(double eps_max, double eps_t, double eps_F);

struct FacetState {
    double eps_N = 0.0, eps_M = 0.0, eps_V = 0.0;
    double t_N = 0.0, t_M = 0.0;
    double eps_max = 0.0;  // history maximum principal strain
    double damage = 0.0;
    double eps_F = 0.0;  // cached softening parameter for this facet
};

// Ratchets eps_max with the current principal strain and re-evaluates damage;
// both are nondecreasing.
void damage_update(FacetState& state, double eps_I_current, const MaterialParams& mat);

// (1 - D)-scaled elastic tractions from the strains stored in the state.
Tractions damaged_tractions(const FacetState& state, const MaterialParams& mat);

}  // namespace dcm
