#include "dcm/assembly.hpp"

namespace dcm {

AssemblyCache build_cache(const DualComplex& dc, double nu) {
    AssemblyCache cache;
    cache.alpha = alpha_factor(dc.mode, nu);
    cache.facet.resize(dc.facets.size());
    for (std::size_t i = 0; i < dc.facets.size(); ++i) {
        const Facet& f = dc.facets[i];
        AssemblyCache::FacetOps& o = cache.facet[i];
        o.element = f.element;
        o.dof_a = dc.nodes[f.node_a].dof[0];
        o.dof_b = dc.nodes[f.node_b].dof[0];
        o.nx = f.n.x();
        o.ny = f.n.y();
        o.mx = f.m.x();
        o.my = f.m.y();
        o.ra_n = f.n.x() * f.c_a.y() - f.n.y() * f.c_a.x();
        o.rb_n = f.n.x() * f.c_b.y() - f.n.y() * f.c_b.x();
        o.ra_m = f.m.x() * f.c_a.y() - f.m.y() * f.c_a.x();
        o.rb_m = f.m.x() * f.c_b.y() - f.m.y() * f.c_b.x();
        o.inv_ell = 1.0 / f.ell;
        o.ell = f.ell;
        o.h = f.h;
        o.sh = dc.thickness * f.h;
        o.measure = dc.thickness * f.h * f.ell;
    }
    cache.elem_dofs.resize(dc.elements.size());
    cache.elem_V.resize(dc.elements.size());
    for (std::size_t e = 0; e < dc.elements.size(); ++e) {
        const Element& el = dc.elements[e];
        auto& dofs = cache.elem_dofs[e];
        for (int n : el.nodes) {
            dofs.push_back(dc.nodes[n].dof[0]);
            dofs.push_back(dc.nodes[n].dof[1]);
            dofs.push_back(dc.nodes[n].dof[2]);
        }
        cache.elem_V[e] = volumetric_row(dc, static_cast<int>(e), cache.alpha).transpose();
    }
    return cache;
}

void update_facet_strains(const DualComplex& dc, const AssemblyCache& cache, const VecX& q,
                          std::vector<FacetState>& states) {
    std::vector<double> eps_V(dc.elements.size());
    for (std::size_t e = 0; e < dc.elements.size(); ++e) {
        const auto& dofs = cache.elem_dofs[e];
        const VecX& V = cache.elem_V[e];
        double v = 0.0;
        for (std::size_t k = 0; k < dofs.size(); ++k) v += V(k) * q(dofs[k]);
        eps_V[e] = v;
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& o = cache.facet[i];
        const double ua1 = q(o.dof_a), ua2 = q(o.dof_a + 1), fa = q(o.dof_a + 2);
        const double ub1 = q(o.dof_b), ub2 = q(o.dof_b + 1), fb = q(o.dof_b + 2);
        FacetState& s = states[i];
        s.eps_N = o.inv_ell * (o.nx * (ub1 - ua1) + o.ny * (ub2 - ua2) + o.ra_n * fa - o.rb_n * fb);
        s.eps_M = o.inv_ell * (o.mx * (ub1 - ua1) + o.my * (ub2 - ua2) + o.ra_m * fa - o.rb_m * fb);
        s.eps_V = eps_V[o.element];
    }
}

std::vector<FacetState> init_facet_states(const DualComplex& dc, const MaterialParams& mat) {
    std::vector<FacetState> states(dc.facets.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        states[i].eps_F = facet_softening_strain(mat, dc.facets[i].ell);
    return states;
}

void update_damage_and_tractions(const DualComplex& dc, std::vector<FacetState>& states,
                                 const MaterialParams& mat, bool with_damage) {
    for (std::size_t i = 0; i < states.size(); ++i) {
        FacetState& s = states[i];
        if (with_damage) {
            const Facet& f = dc.facets[i];
            const SymTensor2D strain =
                facet_strain_tensor(s.eps_N, s.eps_M, s.eps_V, f.n, f.m, mat.nu, dc.mode);
            damage_update(s, principal_max(strain, dc.mode), mat);
            const Tractions t = damaged_tractions(s, mat);
            s.t_N = t.t_N;
            s.t_M = t.t_M;
        } else {
            const Tractions t = elastic_tractions(s.eps_N, s.eps_M, s.eps_V, mat);
            s.t_N = t.t_N;
            s.t_M = t.t_M;
        }
    }
}

VecX internal_forces(const DualComplex& dc, const AssemblyCache& cache,
                     const std::vector<FacetState>& states) {
    VecX F = VecX::Zero(dc.dof_count());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& o = cache.facet[i];
        const FacetState& s = states[i];
        const double fN = o.sh * s.t_N;  // measure * t_N / ell
        const double fM = o.sh * s.t_M;
        F(o.dof_a) -= fN * o.nx + fM * o.mx;
        F(o.dof_a + 1) -= fN * o.ny + fM * o.my;
        F(o.dof_a + 2) += fN * o.ra_n + fM * o.ra_m;
        F(o.dof_b) += fN * o.nx + fM * o.mx;
        F(o.dof_b + 1) += fN * o.ny + fM * o.my;
        F(o.dof_b + 2) -= fN * o.rb_n + fM * o.rb_m;
    }
    return F;
}

namespace {

SpMat assemble_global(const DualComplex& dc, const MaterialParams& mat,
                      const std::vector<FacetState>* states) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(dc.elements.size() * 90);
    std::vector<double> damage;
    if (states) {
        damage.resize(states->size());
        for (std::size_t i = 0; i < states->size(); ++i) damage[i] = (*states)[i].damage;
    }
    for (std::size_t e = 0; e < dc.elements.size(); ++e) {
        const Element& el = dc.elements[e];
        const MatX K = states ? element_secant_stiffness(dc, static_cast<int>(e), mat, damage)
                              : element_stiffness(dc, static_cast<int>(e), mat.E, mat.nu);
        std::vector<int> dofs;
        for (int n : el.nodes)
            for (int k = 0; k < 3; ++k) dofs.push_back(dc.nodes[n].dof[k]);
        for (std::size_t r = 0; r < dofs.size(); ++r)
            for (std::size_t c = 0; c < dofs.size(); ++c)
                if (K(r, c) != 0.0) trips.emplace_back(dofs[r], dofs[c], K(r, c));
    }
    SpMat K(dc.dof_count(), dc.dof_count());
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

}  // namespace

SpMat global_stiffness(const DualComplex& dc, const MaterialParams& mat) {
    return assemble_global(dc, mat, nullptr);
}

SpMat global_secant_stiffness(const DualComplex& dc, const MaterialParams& mat,
                              const std::vector<FacetState>& states) {
    return assemble_global(dc, mat, &states);
}

double strain_energy(const AssemblyCache& cache, const std::vector<FacetState>& states) {
    double se = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const FacetState& s = states[i];
        se += 0.5 * cache.facet[i].measure * (s.t_N * s.eps_N + s.t_M * s.eps_M);
    }
    return se;
}

double facet_elastic_energy(const AssemblyCache::FacetOps& ops, const FacetState& s,
                            const MaterialParams& mat) {
    const Tractions t = elastic_tractions(s.eps_N, s.eps_M, s.eps_V, mat);
    return 0.5 * ops.measure * (t.t_N * s.eps_N + t.t_M * s.eps_M);
}

}  // namespace dcm
