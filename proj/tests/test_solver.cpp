#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcm/meshgen.hpp"
#include "dcm/runs.hpp"
#include "dcm/solver.hpp"

using namespace dcm;

namespace {

DualComplex rect_complex(double w, double h, double size, Mode mode = Mode::PlaneStrain,
                         double thickness = 1.0) {
    return merge_problem_triangles(build_dual(structured_rectangle(w, h, size), thickness, mode));
}

MaterialParams steel() {
    MaterialParams m;
    m.E = 190e9;
    m.nu = 0.3;
    m.rho = 8000.0;
    m.sigma_t = 844e6;
    m.ell_t = 0.012;
    return m;
}

}  // namespace

TEST_CASE("elastic consistency: internal forces equal K q on random states") {
    const DualComplex dc = rect_complex(1.0, 1.0, 0.3);
    MaterialParams mat;
    mat.E = 2.1e9;
    mat.nu = 0.3;
    const SpMat K = global_stiffness(dc, mat);
    const AssemblyCache cache = build_cache(dc, mat.nu);
    std::vector<FacetState> states(dc.facets.size());

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    for (int trial = 0; trial < 5; ++trial) {
        VecX q(dc.dof_count());
        for (int i = 0; i < q.size(); ++i) q(i) = u(rng);
        update_facet_strains(dc, cache, q, states);
        update_damage_and_tractions(dc, states, mat, false);
        const VecX F = internal_forces(dc, cache, states);
        const VecX Kq = K * q;
        CHECK((F - Kq).norm() <= 1e-10 * Kq.norm());
    }
}

TEST_CASE("rigid motion of the whole mesh produces no internal force") {
    const DualComplex dc = rect_complex(1.0, 1.0, 0.34);
    MaterialParams mat;
    mat.E = 1e9;
    mat.nu = 0.25;
    const AssemblyCache cache = build_cache(dc, mat.nu);
    std::vector<FacetState> states(dc.facets.size());
    VecX q(dc.dof_count());
    const Vec2 trans(0.3, -0.2);
    const double omega = 0.05;
    const Vec2 pivot(0.4, 0.6);
    for (std::size_t n = 0; n < dc.nodes.size(); ++n) {
        const Vec2 u = trans + omega * rot90(dc.nodes[n].pos - pivot);
        q(dc.nodes[n].dof[0]) = u.x();
        q(dc.nodes[n].dof[1]) = u.y();
        q(dc.nodes[n].dof[2]) = omega;
    }
    update_facet_strains(dc, cache, q, states);
    update_damage_and_tractions(dc, states, mat, false);
    const VecX F = internal_forces(dc, cache, states);
    CHECK(F.norm() <= 1e-10 * mat.E * dc.thickness);
}

TEST_CASE("edge tractions: constant pressure resultants and moments") {
    const DualComplex dc = rect_complex(2.0, 1.0, 0.24, Mode::PlaneStrain, 3.0);
    const double p = 5.0e5;
    NodeSelector right = parse_selector("x > 1.999999999");
    const VecX F = edge_traction_forces(dc, right, [p](const Vec2&) { return Vec2(p, 0.0); });
    double fx = 0.0, fy = 0.0, mom = 0.0;
    for (const Node& n : dc.nodes) {
        fx += F(n.dof[0]);
        fy += F(n.dof[1]);
        // Moment about the edge midpoint (2, 0.5).
        mom += F(n.dof[2]) + cross2(n.pos - Vec2(2.0, 0.5), Vec2(F(n.dof[0]), F(n.dof[1])));
    }
    CHECK(fx == doctest::Approx(p * 1.0 * 3.0).epsilon(1e-12));
    CHECK(fy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(mom) <= 1e-9 * p * 3.0);
}

TEST_CASE("edge tractions: parabolic shear resultant equals P") {
    const BeamSpec beam;
    const double I = beam.D * beam.D * beam.D / 12.0;
    const Triangulation tri = structured_rectangle(beam.L, beam.D, 1.5);
    Triangulation shifted = tri;
    for (Vec2& pnt : shifted.nodes) pnt.y() -= beam.D / 2.0;
    const DualComplex dc = merge_problem_triangles(build_dual(shifted, 1.0, Mode::PlaneStrain));
    NodeSelector tipsel = parse_selector("x > 47.999999");
    const VecX F = edge_traction_forces(dc, tipsel, [&](const Vec2& pos) {
        return Vec2(0.0, -beam.P * (beam.D * beam.D / 4.0 - pos.y() * pos.y()) / (2.0 * I));
    });
    double fy = 0.0;
    for (const Node& n : dc.nodes) fy += F(n.dof[1]);
    CHECK(fy == doctest::Approx(-beam.P).epsilon(1e-12));
}

TEST_CASE("edge traction selector off the boundary is an error") {
    const DualComplex dc = rect_complex(1.0, 1.0, 0.3);
    NodeSelector nowhere = parse_selector("box 0.4 0.4 0.6 0.6");
    CHECK_THROWS_WITH_AS(
        edge_traction_forces(dc, nowhere, [](const Vec2&) { return Vec2(1.0, 0.0); }),
        doctest::Contains("matches no boundary segment"), Error);
}

TEST_CASE("self-equilibrated cantilever load set has zero resultants") {
    const BeamSpec beam;
    const double I = beam.D * beam.D * beam.D / 12.0;
    Triangulation tri = structured_rectangle(beam.L, beam.D, 2.0);
    for (Vec2& pnt : tri.nodes) pnt.y() -= beam.D / 2.0;
    const DualComplex dc = merge_problem_triangles(build_dual(tri, 1.0, Mode::PlaneStrain));

    VecX F = edge_traction_forces(dc, parse_selector("x > 47.999999"), [&](const Vec2& pos) {
        return Vec2(0.0, -beam.P * (beam.D * beam.D / 4.0 - pos.y() * pos.y()) / (2.0 * I));
    });
    // Opposite shear plus the bending stress at the fixed end.
    F += edge_traction_forces(dc, parse_selector("x < 1e-9"), [&](const Vec2& pos) {
        return Vec2(-beam.P * beam.L * pos.y() / I,
                    beam.P * (beam.D * beam.D / 4.0 - pos.y() * pos.y()) / (2.0 * I));
    });
    double fx = 0.0, fy = 0.0, mom = 0.0;
    for (const Node& n : dc.nodes) {
        fx += F(n.dof[0]);
        fy += F(n.dof[1]);
        mom += F(n.dof[2]) + cross2(n.pos, Vec2(F(n.dof[0]), F(n.dof[1])));
    }
    const double scale = beam.P * beam.L;
    CHECK(std::abs(fx) <= 1e-9 * scale);
    CHECK(std::abs(fy) <= 1e-9 * scale);
    CHECK(std::abs(mom) <= 1e-9 * scale);
}

TEST_CASE("static: uniform traction on a rectangle gives the uniform field") {
    const DualComplex dc = rect_complex(2.0, 1.0, 0.2, Mode::PlaneStress);
    MaterialParams mat;
    mat.E = 70e9;
    mat.nu = 0.33;
    const double p = 1e6;

    // A rigid-cell support must react moments as well: node-applied reactions
    // alone cannot carry the couple of the distributed edge reaction, so the
    // support edge constrains the rotation too.
    BoundaryConditions bcs;
    EssentialBC left;
    left.where = parse_selector("x < 1e-9");
    left.comps = {true, false, true};
    bcs.essential.push_back(left);
    EssentialBC corner;
    corner.where = parse_selector("near 0 0 1e-6");
    corner.comps = {false, true, false};
    bcs.essential.push_back(corner);
    EdgeTractionBC pull;
    pull.where = parse_selector("x > 1.999999999");
    pull.traction = [p](const Vec2&) { return Vec2(p, 0.0); };
    bcs.tractions.push_back(pull);

    const StaticResult res = solve_linear_static(dc, mat, bcs);
    CHECK(res.solve_residual <= 1e-10);
    // Plane stress uniaxial: eps_xx = p/E everywhere.
    const double eps = p / mat.E;
    for (std::size_t n = 0; n < dc.nodes.size(); ++n) {
        const Vec2 x = dc.nodes[n].pos;
        CHECK(res.q(dc.nodes[n].dof[0]) ==
              doctest::Approx(eps * x.x()).epsilon(1e-8).scale(eps * 2.0));
        CHECK(res.q(dc.nodes[n].dof[1]) ==
              doctest::Approx(-mat.nu * eps * (x.y() - 0.0)).epsilon(1e-8).scale(eps));
    }
}

TEST_CASE("static: missing constraints name the free rigid mode") {
    const DualComplex dc = rect_complex(1.0, 1.0, 0.4);
    MaterialParams mat;
    mat.E = 1e9;
    mat.nu = 0.2;
    BoundaryConditions bcs;
    EssentialBC left;
    left.where = parse_selector("x < 1e-9");
    left.comps = {true, false, false};  // u1 only: vertical translation still free
    bcs.essential.push_back(left);
    CHECK_THROWS_WITH_AS(solve_linear_static(dc, mat, bcs), doctest::Contains("translation-y"),
                         Error);
}

TEST_CASE("orphan nodes are pinned automatically") {
    Triangulation tri = structured_rectangle(1.0, 1.0, 0.5);
    tri.nodes.push_back(Vec2(5.0, 5.0));
    tri.node_tags.push_back("");
    const Triangulation tri2 = make_triangulation(tri.nodes, tri.tris, tri.node_tags);
    const DualComplex dc = merge_problem_triangles(build_dual(tri2, 1.0, Mode::PlaneStrain));
    MaterialParams mat;
    mat.E = 1e9;
    mat.nu = 0.2;
    BoundaryConditions bcs;
    EssentialBC bottom;
    bottom.where = parse_selector("y < 1e-9");
    bottom.comps = {true, true, true};
    bcs.essential.push_back(bottom);
    EdgeTractionBC pull;
    pull.where = parse_selector("y > 0.999999");
    pull.traction = [](const Vec2&) { return Vec2(0.0, 1e5); };
    bcs.tractions.push_back(pull);
    const StaticResult res = solve_linear_static(dc, mat, bcs);
    CHECK(res.q.allFinite());
    const int orphan = static_cast<int>(dc.nodes.size()) - 1;
    CHECK(res.q(dc.nodes[orphan].dof[0]) == 0.0);
}

TEST_CASE("quasi-static below the strength limit matches linear static") {
    const DualComplex dc = rect_complex(0.1, 0.05, 0.012, Mode::PlaneStress, 0.01);
    MaterialParams mat;
    mat.E = 30e9;
    mat.nu = 0.2;
    mat.rho = 2400.0;
    mat.sigma_t = 2e6;
    mat.ell_t = 0.7;
    const double pull = 1e-7;  // far below the elastic limit

    BoundaryConditions bcs;
    EssentialBC left;
    left.where = parse_selector("x < 1e-9");
    left.comps = {true, true, false};
    bcs.essential.push_back(left);
    EssentialBC right;
    right.where = parse_selector("x > 0.099999999");
    right.comps = {true, false, false};
    right.program = LoadProgram::ramp(pull);
    bcs.essential.push_back(right);

    QuasiStaticOptions opts;
    opts.increments = 4;
    opts.reaction_nodes = right.where;
    opts.reaction_component = 0;
    const QuasiStaticResult qs = solve_quasi_static(dc, mat, bcs, opts);
    REQUIRE(qs.history.size() == 4);
    for (const auto& rec : qs.history) CHECK(rec.dissipated == 0.0);
    CHECK(qs.history.back().iterations <= 2);

    // Compare the final state against a plain static solve at full load.
    BoundaryConditions bcs_static = bcs;
    bcs_static.essential[1].program = LoadProgram::step(pull);
    const StaticResult st = solve_linear_static(dc, mat, bcs_static);
    CHECK((qs.q - st.q).norm() <= 1e-9 * st.q.norm());
    // Reactions scale linearly over the increments.
    CHECK(qs.history[1].reaction == doctest::Approx(0.5 * qs.history[3].reaction).epsilon(1e-6));
}

TEST_CASE("explicit dynamics: momentum conservation of a free body") {
    const DualComplex dc = rect_complex(0.02, 0.01, 0.0025, Mode::PlaneStress, 0.001);
    MaterialParams mat = steel();

    // Initial velocity through a short released pulse; afterwards the body is
    // load-free and momenta must be conserved.
    BoundaryConditions bcs;
    EssentialBC kick;
    kick.where = parse_selector("x < 1e-9");
    kick.comps = {true, false, false};
    kick.program = LoadProgram::sine_pulse(5.0, 2.0e-7);
    kick.is_velocity = true;
    bcs.essential.push_back(kick);

    DynamicsOptions opts;
    opts.dt = 0.8 * critical_time_step(dc, mat);
    opts.t_end = 2.0e-7 + 1000.0 * opts.dt;
    opts.with_damage = false;
    opts.history_every = 100000;
    opts.probe_times = {2.0e-7 + 10.0 * opts.dt, opts.t_end - opts.dt};
    const DynamicsResult res = solve_explicit_dynamics(dc, mat, bcs, opts);
    REQUIRE(res.probes.size() == 2);

    const VecX mass = lumped_mass_vector(dc, mat.rho);
    auto momenta = [&](const DynamicsProbe& p) {
        Eigen::Vector3d out = Eigen::Vector3d::Zero();  // (px, py, L about origin)
        for (const Node& n : dc.nodes) {
            const double mx = mass(n.dof[0]);
            const Vec2 v(p.v(n.dof[0]), p.v(n.dof[1]));
            out(0) += mx * v.x();
            out(1) += mx * v.y();
            out(2) += mx * cross2(n.pos, v) + mass(n.dof[2]) * p.v(n.dof[2]);
        }
        return out;
    };
    const Eigen::Vector3d m0 = momenta(res.probes[0]);
    const Eigen::Vector3d m1 = momenta(res.probes[1]);
    CHECK(std::abs(m1(0) - m0(0)) <= 1e-8 * std::abs(m0(0)));
    CHECK(std::abs(m1(1) - m0(1)) <= 1e-8 * std::max(std::abs(m0(0)), std::abs(m0(1))));
    CHECK(std::abs(m1(2) - m0(2)) <= 1e-8 * std::abs(m0(0)) * 0.02);
}

TEST_CASE("explicit dynamics: elastic energy ledger closes within 1%") {
    const DualComplex dc = rect_complex(0.02, 0.005, 0.002, Mode::PlaneStress, 0.001);
    MaterialParams mat = steel();
    BoundaryConditions bcs;
    EssentialBC fix;
    fix.where = parse_selector("x > 0.019999999");
    fix.comps = {true, true, true};
    bcs.essential.push_back(fix);
    EssentialBC pulse;
    pulse.where = parse_selector("x < 1e-9");
    pulse.comps = {true, false, false};
    pulse.program = LoadProgram::sine_pulse(2.0, 1.0e-6);
    pulse.is_velocity = true;
    bcs.essential.push_back(pulse);

    DynamicsOptions opts;
    opts.dt = 0.5 * critical_time_step(dc, mat);
    opts.t_end = 3.0e-6;
    opts.with_damage = false;
    opts.history_every = 20;
    const DynamicsResult res = solve_explicit_dynamics(dc, mat, bcs, opts);
    const DynamicsRecord& last = res.history.back();
    CHECK(last.work > 0.0);
    CHECK(std::abs(last.kinetic + last.strain_energy - last.work) <= 0.01 * last.work);
}

TEST_CASE("explicit dynamics refuses an unstable step unless overridden") {
    const DualComplex dc = rect_complex(0.01, 0.005, 0.002, Mode::PlaneStress, 0.001);
    MaterialParams mat = steel();
    BoundaryConditions bcs;
    DynamicsOptions opts;
    opts.dt = 10.0 * critical_time_step(dc, mat);
    opts.t_end = 20.0 * opts.dt;
    opts.with_damage = false;
    CHECK_THROWS_WITH_AS(solve_explicit_dynamics(dc, mat, bcs, opts),
                         doctest::Contains("stability"), Error);
    opts.allow_unstable = true;
    CHECK_NOTHROW(solve_explicit_dynamics(dc, mat, bcs, opts));
}

TEST_CASE("cantilever convergence harness: exact fields are self-consistent") {
    const BeamSpec beam;
    // Finite-difference strains from the displacement field must match the
    // stress field through the plane-strain constitutive relations.
    const double h = 1e-6;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(0.5, beam.L - 0.5);
    std::uniform_real_distribution<double> uy(-beam.D / 2 + 0.5, beam.D / 2 - 0.5);
    for (int k = 0; k < 20; ++k) {
        const Vec2 x(ux(rng), uy(rng));
        auto u = [&](const Vec2& p) {
            const Eigen::Vector3d v = beam_exact_displacement(beam, p);
            return Vec2(v(0), v(1));
        };
        const Vec2 dudx = (u(x + Vec2(h, 0)) - u(x - Vec2(h, 0))) / (2 * h);
        const Vec2 dudy = (u(x + Vec2(0, h)) - u(x - Vec2(0, h))) / (2 * h);
        const double exx = dudx.x(), eyy = dudy.y(), gxy = dudx.y() + dudy.x();
        const Eigen::Vector3d s = beam_exact_stress(beam, x);
        const double Eb = beam.E / (1.0 - beam.nu * beam.nu);
        const double nb = beam.nu / (1.0 - beam.nu);
        CHECK(exx == doctest::Approx((s(0) - nb * s(1)) / Eb).epsilon(1e-5));
        CHECK(eyy == doctest::Approx((s(1) - nb * s(0)) / Eb).epsilon(2e-4).scale(std::abs(exx)));
        CHECK(gxy == doctest::Approx(2.0 * (1.0 + nb) * s(2) / Eb).epsilon(1e-5));
    }
    // Quadrature check of the closed-form energy.
    double U = 0.0;
    const int n = 60;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 x((i + 0.5) * beam.L / n, -beam.D / 2 + (j + 0.5) * beam.D / n);
            const Eigen::Vector3d s = beam_exact_stress(beam, x);
            const double Eb = beam.E / (1.0 - beam.nu * beam.nu);
            const double nb = beam.nu / (1.0 - beam.nu);
            const double dens = (s(0) * s(0)) / (2.0 * Eb) + (1.0 + nb) * s(2) * s(2) / Eb;
            U += dens * (beam.L / n) * (beam.D / n);
        }
    CHECK(U == doctest::Approx(beam_exact_energy(beam)).epsilon(1e-3));
}
