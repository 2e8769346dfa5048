#include "dcm/element_ops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

namespace dcm {

FacetRows facet_rows(const DualComplex& dc, const Facet& f) {
    const Element& el = dc.elements[f.element];
    const int dofs = 3 * static_cast<int>(el.nodes.size());
    FacetRows r;
    r.N = RowX::Zero(dofs);
    r.M = RowX::Zero(dofs);
    if (f.ell <= 0.0) throw Error("facet with zero edge length");
    const double inv_ell = 1.0 / f.ell;
    auto fill = [&](RowX& row, const Vec2& v) {
        const int a = 3 * f.local_a, b = 3 * f.local_b;
        row(a) = -v.x() * inv_ell;
        row(a + 1) = -v.y() * inv_ell;
        row(a + 2) = (v.x() * f.c_a.y() - v.y() * f.c_a.x()) * inv_ell;
        row(b) = v.x() * inv_ell;
        row(b + 1) = v.y() * inv_ell;
        row(b + 2) = -(v.x() * f.c_b.y() - v.y() * f.c_b.x()) * inv_ell;
    };
    fill(r.N, f.n);
    fill(r.M, f.m);
    return r;
}

RowX volumetric_row(const DualComplex& dc, int elem_id, double alpha) {
    const Element& el = dc.elements[elem_id];
    if (!(alpha > 0.0)) throw Error("alpha must be positive");
    RowX V = RowX::Zero(3 * static_cast<int>(el.nodes.size()));
    for (int fi : el.facets) {
        const Facet& f = dc.facets[fi];
        V += (f.ell * f.h) * facet_rows(dc, f).N;
    }
    V /= (3.0 * el.area * alpha);
    return V;
}

ElementOperators element_operators(const DualComplex& dc, int elem_id, double nu) {
    const Element& el = dc.elements[elem_id];
    ElementOperators ops;
    ops.dofs = 3 * static_cast<int>(el.nodes.size());
    ops.V = RowX::Zero(ops.dofs);
    const double alpha = alpha_factor(dc.mode, nu);
    for (int fi : el.facets) {
        const Facet& f = dc.facets[fi];
        ops.facet.push_back(facet_rows(dc, f));
        ops.V += (f.ell * f.h) * ops.facet.back().N;
    }
    ops.V /= (3.0 * el.area * alpha);
    for (const FacetRows& fr : ops.facet) ops.D.push_back(fr.N - ops.V);
    return ops;
}

namespace {

MatX stiffness_impl(const DualComplex& dc, int elem_id, double E_V, double E_D, double nu,
                    const std::vector<double>* facet_damage) {
    const Element& el = dc.elements[elem_id];
    const ElementOperators ops = element_operators(dc, elem_id, nu);
    const double s = dc.thickness;
    MatX K = MatX::Zero(ops.dofs, ops.dofs);
    for (std::size_t k = 0; k < el.facets.size(); ++k) {
        const Facet& f = dc.facets[el.facets[k]];
        const double scale =
            s * f.h * f.ell * (facet_damage ? (1.0 - (*facet_damage)[el.facets[k]]) : 1.0);
        const RowX& Df = ops.D[k];
        const RowX& Mf = ops.facet[k].M;
        K += scale * (E_V * ops.V.transpose() * ops.V + E_D * Df.transpose() * Df +
                      0.5 * (E_V + E_D) *
                          (ops.V.transpose() * Df + Df.transpose() * ops.V) +
                      E_D * Mf.transpose() * Mf);
    }
    return K;
}

}  // namespace

MatX element_stiffness(const DualComplex& dc, int elem_id, double E, double nu, bool diagnostic,
                       double f_over_e_min) {
    const Element& el = dc.elements[elem_id];
    if (!diagnostic) {
        for (std::size_t k = 0; k < el.facets.size(); ++k) {
            const Facet& f = dc.facets[el.facets[k]];
            const bool fifth = (el.kind == ElementKind::Quad5 && k == 4);
            if (f.h / f.ell < (fifth ? 0.0 : f_over_e_min))
                throw Error("element " + std::to_string(elem_id + 1) +
                            " has a facet below the admissibility threshold; run the merge pass");
        }
    }
    const double E_V = E / (1.0 - 2.0 * nu);
    const double E_D = E / (1.0 + nu);
    return stiffness_impl(dc, elem_id, E_V, E_D, nu, nullptr);
}

MatX element_secant_stiffness(const DualComplex& dc, int elem_id, const MaterialParams& mat,
                              const std::vector<double>& facet_damage) {
    return stiffness_impl(dc, elem_id, mat.E_V(), mat.E_D(), mat.nu, &facet_damage);
}

Eigen::Matrix3d node_mass_block(const VoronoiCell& cell, double rho, double thickness) {
    if (!(cell.area > 0.0)) throw Error("cell with nonpositive area in mass computation");
    Eigen::Matrix3d m;
    m << cell.area, 0.0, -cell.sy,
         0.0, cell.area, cell.sx,
         -cell.sy, cell.sx, cell.polar;
    return rho * thickness * m;
}

Eigen::VectorXd lumped_mass_vector(const DualComplex& dc, double rho) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dc.dof_count());
    for (const VoronoiCell& c : dc.cells) {
        if (dc.nodes[c.node].orphan) continue;
        if (!(c.area > 0.0))
            throw Error("cell around node " + std::to_string(c.node + 1) +
                        " has nonpositive area");
        const double mt = rho * dc.thickness * c.area;
        const auto& dof = dc.nodes[c.node].dof;
        m(dof[0]) = mt;
        m(dof[1]) = mt;
        m(dof[2]) = rho * dc.thickness * c.polar;
    }
    return m;
}

SpectralResult spectral_check(const MatX& K) {
    Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (K + K.transpose()));
    SpectralResult r;
    r.eigenvalues = es.eigenvalues();
    const double scale = r.eigenvalues.cwiseAbs().maxCoeff();
    const double tol = 1e-9 * scale;
    r.lambda_min_positive = 0.0;
    for (int i = 0; i < r.eigenvalues.size(); ++i) {
        const double l = r.eigenvalues(i);
        if (std::abs(l) < tol)
            ++r.nullity;
        else if (l > 0.0 && r.lambda_min_positive == 0.0)
            r.lambda_min_positive = l;
    }
    const bool has_negative = r.eigenvalues(0) < -tol;
    r.defective = (r.nullity > 3) || has_negative;
    return r;
}

void dump_element_operators(const DualComplex& dc, int elem_id, double E, double nu, double rho,
                            std::ostream& os) {
    const Element& el = dc.elements[elem_id];
    const ElementOperators ops = element_operators(dc, elem_id, nu);
    os.precision(12);
    os << "element " << elem_id << " kind "
       << (el.kind == ElementKind::Triangle ? "tri" : el.kind == ElementKind::Quad5 ? "quad5"
                                                                                    : "quad4")
       << " nodes";
    for (int n : el.nodes) os << " " << (n + 1);
    os << " area " << el.area << "\n";
    for (std::size_t k = 0; k < ops.facet.size(); ++k) {
        os << "N" << (k + 1) << " " << ops.facet[k].N << "\n";
        os << "M" << (k + 1) << " " << ops.facet[k].M << "\n";
    }
    os << "V " << ops.V << "\n";
    os << "K\n" << element_stiffness(dc, elem_id, E, nu, true) << "\n";
    if (rho > 0.0) {
        os << "M_blocks\n";
        for (int n : el.nodes)
            os << node_mass_block(dc.cells[n], rho, dc.thickness) << "\n";
    }
}

Eigen::VectorXd rigid_mode(const DualComplex& dc, int elem_id, const Vec2& translation,
                           double omega, const Vec2& p) {
    const Element& el = dc.elements[elem_id];
    Eigen::VectorXd q(3 * el.nodes.size());
    for (std::size_t i = 0; i < el.nodes.size(); ++i) {
        const Vec2 u = translation + omega * rot90(dc.nodes[el.nodes[i]].pos - p);
        q(3 * i) = u.x();
        q(3 * i + 1) = u.y();
        q(3 * i + 2) = omega;
    }
    return q;
}

}  // namespace dcm
