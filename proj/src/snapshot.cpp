#include "dcm/snapshot.hpp"

#include <fstream>
#include <sstream>

namespace dcm {

void write_field_snapshot(const DualComplex& dc, const VecX& q,
                          const std::vector<FacetState>& states, const MaterialParams& mat,
                          const std::string& path, double magnify, const VecX* velocity) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write snapshot: " + path);
    os.precision(9);

    struct Piece {
        int node;
        std::array<Vec2, 3> verts;
        int facet;
    };
    std::vector<Piece> pieces;
    pieces.reserve(2 * dc.facets.size());
    for (std::size_t i = 0; i < dc.facets.size(); ++i) {
        const Facet& f = dc.facets[i];
        for (int side = 0; side < 2; ++side) {
            const int node = (side == 0) ? f.node_a : f.node_b;
            Piece p{node, {dc.nodes[node].pos, f.p0, f.p1}, static_cast<int>(i)};
            if (tri_signed_area(p.verts[0], p.verts[1], p.verts[2]) < 0.0)
                std::swap(p.verts[1], p.verts[2]);
            pieces.push_back(p);
        }
    }

    auto moved = [&](const Piece& p, const Vec2& v) {
        const auto& dof = dc.nodes[p.node].dof;
        const Vec2 u(q(dof[0]), q(dof[1]));
        const double phi = q(dof[2]);
        const Vec2 x0 = dc.nodes[p.node].pos;
        return v + magnify * (u + phi * rot90(v - x0));
    };

    os << "# vtk DataFile Version 3.0\n";
    os << "dcm2d facet field snapshot\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << 3 * pieces.size() << " double\n";
    for (const Piece& p : pieces)
        for (const Vec2& v : p.verts) {
            const Vec2 x = moved(p, v);
            os << x.x() << " " << x.y() << " 0\n";
        }
    os << "CELLS " << pieces.size() << " " << 4 * pieces.size() << "\n";
    for (std::size_t i = 0; i < pieces.size(); ++i)
        os << "3 " << 3 * i << " " << 3 * i + 1 << " " << 3 * i + 2 << "\n";
    os << "CELL_TYPES " << pieces.size() << "\n";
    for (std::size_t i = 0; i < pieces.size(); ++i) os << "5\n";

    const double eps_t = (mat.sigma_t > 0.0) ? mat.eps_t() : 0.0;
    os << "CELL_DATA " << pieces.size() << "\n";
    auto cell_scalars = [&](const std::string& name, auto&& fn) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (const Piece& p : pieces) os << fn(states[p.facet], dc.facets[p.facet]) << "\n";
    };
    cell_scalars("damage", [](const FacetState& s, const Facet&) { return s.damage; });
    cell_scalars("eps_max_ratio", [&](const FacetState& s, const Facet&) {
        return eps_t > 0.0 ? s.eps_max / eps_t : 0.0;
    });
    cell_scalars("sigma_xx_ratio", [&](const FacetState& s, const Facet& f) {
        if (!(mat.sigma_t > 0.0)) return 0.0;
        const double sigma_V = (1.0 - s.damage) * mat.E_V() * s.eps_V;
        const SymTensor2D sig = facet_stress_tensor(s.t_N, s.t_M, sigma_V, f.n, f.m, mat, dc.mode);
        return sig.t11 / mat.sigma_t;
    });
    cell_scalars("t_N", [](const FacetState& s, const Facet&) { return s.t_N; });
    cell_scalars("t_M", [](const FacetState& s, const Facet&) { return s.t_M; });

    os << "POINT_DATA " << 3 * pieces.size() << "\n";
    os << "VECTORS displacement double\n";
    for (const Piece& p : pieces)
        for (const Vec2& v : p.verts) {
            const auto& dof = dc.nodes[p.node].dof;
            const Vec2 u = Vec2(q(dof[0]), q(dof[1])) + q(dof[2]) * rot90(v - dc.nodes[p.node].pos);
            os << u.x() << " " << u.y() << " 0\n";
        }
    os << "SCALARS rotation double 1\nLOOKUP_TABLE default\n";
    for (const Piece& p : pieces)
        for (int k = 0; k < 3; ++k) os << q(dc.nodes[p.node].dof[2]) << "\n";
    if (velocity) {
        os << "VECTORS velocity double\n";
        for (const Piece& p : pieces)
            for (const Vec2& v : p.verts) {
                const auto& dof = dc.nodes[p.node].dof;
                const Vec2 u = Vec2((*velocity)(dof[0]), (*velocity)(dof[1])) +
                               (*velocity)(dof[2]) * rot90(v - dc.nodes[p.node].pos);
                os << u.x() << " " << u.y() << " 0\n";
            }
    }
}

SnapshotSummary read_snapshot_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open snapshot: " + path);
    SnapshotSummary sum;
    std::string line;
    std::getline(in, line);
    if (line.rfind("# vtk DataFile", 0) != 0) throw Error("snapshot: missing vtk header");
    std::getline(in, line);  // title
    std::getline(in, line);
    if (line != "ASCII") throw Error("snapshot: expected ASCII");
    std::getline(in, line);
    if (line != "DATASET UNSTRUCTURED_GRID") throw Error("snapshot: expected unstructured grid");

    bool in_cell_data = false;
    std::string current_array;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "POINTS") {
            ss >> sum.points;
            for (int i = 0; i < sum.points; ++i) {
                double x, y, z;
                if (!(in >> x >> y >> z)) throw Error("snapshot: truncated POINTS");
            }
            std::getline(in, line);
        } else if (tok == "CELLS") {
            int total;
            ss >> sum.cells >> total;
            for (int i = 0; i < total; ++i) {
                int v;
                if (!(in >> v)) throw Error("snapshot: truncated CELLS");
            }
            std::getline(in, line);
        } else if (tok == "CELL_TYPES") {
            int n;
            ss >> n;
            for (int i = 0; i < n; ++i) {
                int v;
                if (!(in >> v)) throw Error("snapshot: truncated CELL_TYPES");
                if (v != 5 && v != 9) throw Error("snapshot: unexpected cell type");
            }
            std::getline(in, line);
        } else if (tok == "CELL_DATA") {
            in_cell_data = true;
        } else if (tok == "POINT_DATA") {
            in_cell_data = false;
        } else if (tok == "SCALARS") {
            ss >> current_array;
            (in_cell_data ? sum.cell_arrays : sum.point_arrays).push_back(current_array);
            std::getline(in, line);  // LOOKUP_TABLE
            const int n = in_cell_data ? sum.cells : sum.points;
            for (int i = 0; i < n; ++i) {
                double v;
                if (!(in >> v)) throw Error("snapshot: truncated SCALARS " + current_array);
                if (current_array == "damage") {
                    if (i == 0) sum.damage_min = sum.damage_max = v;
                    sum.damage_min = std::min(sum.damage_min, v);
                    sum.damage_max = std::max(sum.damage_max, v);
                }
            }
            std::getline(in, line);
        } else if (tok == "VECTORS") {
            ss >> current_array;
            (in_cell_data ? sum.cell_arrays : sum.point_arrays).push_back(current_array);
            const int n = in_cell_data ? sum.cells : sum.points;
            for (int i = 0; i < 3 * n; ++i) {
                double v;
                if (!(in >> v)) throw Error("snapshot: truncated VECTORS " + current_array);
            }
            std::getline(in, line);
        }
    }
    return sum;
}

void write_history_csv(const std::vector<QuasiStaticRecord>& rows, double sigma_n_scale,
                       const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write history: " + path);
    os.precision(12);
    os << "t,applied,reaction,sigma_N,KE,SE,dissipated,work\n";
    for (const auto& r : rows)
        os << r.t << "," << r.applied << "," << r.reaction << ","
           << (sigma_n_scale > 0.0 ? r.reaction / sigma_n_scale : 0.0) << ",0," << r.strain_energy
           << "," << r.dissipated << "," << r.work << "\n";
}

void write_history_csv(const std::vector<DynamicsRecord>& rows, double sigma_n_scale,
                       const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write history: " + path);
    os.precision(12);
    os << "t,applied,reaction,sigma_N,KE,SE,dissipated,work\n";
    for (const auto& r : rows)
        os << r.t << "," << r.applied << "," << r.reaction << ","
           << (sigma_n_scale > 0.0 ? r.reaction / sigma_n_scale : 0.0) << "," << r.kinetic << ","
           << r.strain_energy << "," << r.dissipated << "," << r.work << "\n";
}

}  // namespace dcm
