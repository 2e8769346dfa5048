#include "dcm/material.hpp"

#include <cmath>

namespace dcm {

MaterialParams MaterialParams::from_fracture_energy(double E, double nu, double rho,
                                                    double sigma_t, double G_t) {
    MaterialParams m;
    m.E = E;
    m.nu = nu;
    m.rho = rho;
    m.sigma_t = sigma_t;
    m.ell_t = 2.0 * E * G_t / (sigma_t * sigma_t);
    m.validate();
    return m;
}

void MaterialParams::validate() const {
    if (!(E > 0.0)) throw Error("material: E must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw Error("material: nu must lie in (-1, 0.5)");
    if (!(sigma_t > 0.0)) throw Error("material: sigma_t must be positive");
    if (!(ell_t > 0.0)) throw Error("material: ell_t must be positive");
    if (!(rho >= 0.0)) throw Error("material: rho must be nonnegative");
}

double alpha_factor(Mode mode, double nu) {
    if (mode == Mode::PlaneStrain) return 1.0;
    if (std::abs(1.0 - 2.0 * nu) < 1e-12)
        throw Error("incompressible material (nu = 0.5) not supported in plane stress");
    return (1.0 - nu) / (1.0 - 2.0 * nu);
}

Tractions elastic_tractions(double eps_N, double eps_M, double eps_V, const MaterialParams& mat) {
    Tractions t;
    t.t_N = mat.E_V() * eps_V + mat.E_D() * (eps_N - eps_V);
    t.t_M = mat.E_D() * eps_M;
    return t;
}

namespace {

// Inverts the 3x3 projection system
//   t11 + t22           = trace_rhs
//   N11 t11 + 2 N12 t12 + N22 t22 = pN
//   M11 t11 + 2 M12 t12 + M22 t22 = pM
// with Nij = ni nj and the symmetrized Mij. The denominator equals -1/2 for
// any orthonormal facet frame.
SymTensor2D invert_projection(double pN, double pM, double trace_rhs, const Vec2& n,
                              const Vec2& m) {
    const double N11 = n.x() * n.x(), N12 = n.x() * n.y(), N22 = n.y() * n.y();
    const double M11 = n.x() * m.x(), M22 = n.y() * m.y();
    const double M12 = 0.5 * (n.x() * m.y() + n.y() * m.x());
    const double den = M11 * N12 + M12 * N22 - M12 * N11 - M22 * N12;
    SymTensor2D t;
    t.t11 = (pM * N12 - pN * M12 + trace_rhs * (M12 * N22 - N12 * M22)) / den;
    t.t12 = (pN * (M11 - M22) + pM * (N22 - N11) - trace_rhs * (M11 * N22 - N11 * M22)) /
            (2.0 * den);
    t.t22 = (pN * M12 - pM * N12 + trace_rhs * (M11 * N12 - N11 * M12)) / den;
    return t;
}

}  // namespace

SymTensor2D facet_strain_tensor(double eps_N, double eps_M, double eps_V, const Vec2& n,
                                const Vec2& m, double nu, Mode mode) {
    const double trace_rhs = (mode == Mode::PlaneStrain)
                                 ? 3.0 * eps_V
                                 : 3.0 * eps_V * (1.0 - nu) / (1.0 - 2.0 * nu);
    SymTensor2D t = invert_projection(eps_N, eps_M, trace_rhs, n, m);
    t.t33 = (mode == Mode::PlaneStrain) ? 0.0 : -nu * (t.t11 + t.t22) / (1.0 - nu);
    return t;
}

SymTensor2D facet_stress_tensor(double t_N, double t_M, double sigma_V, const Vec2& n,
                                const Vec2& m, const MaterialParams& mat, Mode mode) {
    // In-plane trace from the volumetric stress: s11 + s22 = 3 sigma_V in
    // plane stress; in plane strain s33 = (E_V - E_D) eps_V carries part of
    // the trace, leaving s11 + s22 = sigma_V (2 E_V + E_D) / E_V.
    const double trace_rhs = (mode == Mode::PlaneStrain)
                                 ? sigma_V * (2.0 * mat.E_V() + mat.E_D()) / mat.E_V()
                                 : 3.0 * sigma_V;
    SymTensor2D t = invert_projection(t_N, t_M, trace_rhs, n, m);
    t.t33 = (mode == Mode::PlaneStrain) ? mat.nu * (t.t11 + t.t22) : 0.0;
    return t;
}

double principal_max(const SymTensor2D& t, Mode mode) {
    const double mean = 0.5 * (t.t11 + t.t22);
    const double radius = std::sqrt(0.25 * (t.t11 - t.t22) * (t.t11 - t.t22) + t.t12 * t.t12);
    const double in_plane = mean + radius;
    return (mode == Mode::PlaneStress) ? std::max(in_plane, t.t33) : in_plane;
}

double facet_softening_strain(const MaterialParams& mat, double ell_f) {
    if (!(ell_f > 0.0)) throw Error("facet edge length must be positive");
    if (ell_f >= mat.ell_t)
        throw Error("snap-back: element size exceeds characteristic length (ell_f = " +
                    std::to_string(ell_f) + " >= ell_t = " + std::to_string(mat.ell_t) +
                    "); refine the mesh");
    return 0.5 * mat.eps_t() * (mat.ell_t / ell_f - 1.0);
}

double damage_of(double eps_max, double eps_t, double eps_F) {
    if (eps_max <= eps_t) return 0.0;
    const double d = 1.0 - (eps_t / eps_max) * std::exp(-(eps_max - eps_t) / eps_F);
    return std::min(d, 1.0 - 1e-12);
}

void damage_update(FacetState& state, double eps_I_current, const MaterialParams& mat) {
    state.eps_max = std::max(state.eps_max, eps_I_current);
    state.damage = std::max(state.damage, damage_of(state.eps_max, mat.eps_t(), state.eps_F));
}

Tractions damaged_tractions(const FacetState& state, const MaterialParams& mat) {
    Tractions t = elastic_tractions(state.eps_N, state.eps_M, state.eps_V, mat);
    t.t_N *= (1.0 - state.damage);
    t.t_M *= (1.0 - state.damage);
    return t;
}

}  // namespace dcm
