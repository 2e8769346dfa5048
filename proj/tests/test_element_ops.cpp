#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcm/element_ops.hpp"
#include "dcm/meshgen.hpp"

using namespace dcm;

namespace {

DualComplex triangle_complex(const Vec2& a, const Vec2& b, const Vec2& c,
                             Mode mode = Mode::PlaneStrain) {
    return build_dual(make_triangulation({a, b, c}, {{0, 1, 2}}), 1.0, mode);
}

// One Quad5 built from a mirrored right/acute pair.
DualComplex quad5_complex(Mode mode = Mode::PlaneStrain) {
    const Triangulation tri = make_triangulation(
        {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 0.22), Vec2(0.5, -2.0)}, {{0, 1, 2}, {0, 3, 1}});
    return merge_problem_triangles(build_dual(tri, 1.0, mode));
}

// Element DOF vector for a linear displacement field u = G x with the
// compatible rotation phi = (g21 - g12)/2.
Eigen::VectorXd linear_field_dofs(const DualComplex& dc, int elem, const Mat2& G) {
    const Element& el = dc.elements[elem];
    Eigen::VectorXd q(3 * el.nodes.size());
    const double phi = 0.5 * (G(1, 0) - G(0, 1));
    for (std::size_t i = 0; i < el.nodes.size(); ++i) {
        const Vec2 u = G * dc.nodes[el.nodes[i]].pos;
        q(3 * i) = u.x();
        q(3 * i + 1) = u.y();
        q(3 * i + 2) = phi;
    }
    return q;
}

}  // namespace

TEST_CASE("facet rows annihilate rigid motions (triangle and quad)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 a(u(rng), u(rng));
        const Vec2 b = a + Vec2(1.5 + u(rng), 0.3 * u(rng));
        Vec2 c = a + Vec2(0.5 * u(rng), 1.2 + std::abs(u(rng)));
        if (tri_signed_area(a, b, c) < 0.2) continue;
        const DualComplex dc = triangle_complex(a, b, c);
        const auto q = rigid_mode(dc, 0, Vec2(u(rng), u(rng)), u(rng), Vec2(u(rng), u(rng)));
        for (int fi : dc.elements[0].facets) {
            const FacetRows rows = facet_rows(dc, dc.facets[fi]);
            CHECK(std::abs(rows.N.dot(q)) < 1e-12);
            CHECK(std::abs(rows.M.dot(q)) < 1e-12);
        }
    }
    const DualComplex quad = quad5_complex();
    const auto q = rigid_mode(quad, 0, Vec2(0.3, -0.7), 0.4, Vec2(0.2, 0.1));
    for (int fi : quad.elements[0].facets) {
        const FacetRows rows = facet_rows(quad, quad.facets[fi]);
        CHECK(std::abs(rows.N.dot(q)) < 1e-12);
        CHECK(std::abs(rows.M.dot(q)) < 1e-12);
    }
}

TEST_CASE("facet strains equal strain-tensor projections for linear fields") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Vec2 a(u(rng), u(rng));
        const Vec2 b = a + Vec2(1.0 + 0.5 * u(rng), 0.4 * u(rng));
        const Vec2 c = a + Vec2(0.4 * u(rng), 1.0 + 0.5 * std::abs(u(rng)));
        if (tri_signed_area(a, b, c) < 0.15) continue;
        const DualComplex dc = triangle_complex(a, b, c);
        Mat2 G;
        G << u(rng), u(rng), u(rng), u(rng);
        const Mat2 strain = 0.5 * (G + G.transpose());
        const auto q = linear_field_dofs(dc, 0, G);
        for (int fi : dc.elements[0].facets) {
            const Facet& f = dc.facets[fi];
            const FacetRows rows = facet_rows(dc, f);
            const double eps_N = f.n.dot(strain * f.n);
            const double eps_M = f.n.dot(strain * f.m);
            CHECK(rows.N.dot(q) == doctest::Approx(eps_N).epsilon(1e-12));
            CHECK(rows.M.dot(q) == doctest::Approx(eps_M).epsilon(1e-12));
        }
    }
}

TEST_CASE("facet strain projection holds on the merged quad too") {
    const DualComplex dc = quad5_complex();
    Mat2 G;
    G << 0.3, -0.8, 0.5, -0.1;
    const Mat2 strain = 0.5 * (G + G.transpose());
    const auto q = linear_field_dofs(dc, 0, G);
    for (int fi : dc.elements[0].facets) {
        const Facet& f = dc.facets[fi];
        const FacetRows rows = facet_rows(dc, f);
        CHECK(rows.N.dot(q) == doctest::Approx(f.n.dot(strain * f.n)).epsilon(1e-12));
        CHECK(rows.M.dot(q) == doctest::Approx(f.n.dot(strain * f.m)).epsilon(1e-12));
    }
}

TEST_CASE("volumetric row: hydrostatic and shear fields") {
    const DualComplex dc = triangle_complex(Vec2(0, 0), Vec2(1.2, 0.1), Vec2(0.3, 1.0));
    Mat2 G;

    SUBCASE("plane strain hydrostatic gives tr/3") {
        const RowX V = volumetric_row(dc, 0, alpha_factor(Mode::PlaneStrain, 0.3));
        G << 0.01, 0.0, 0.0, 0.01;
        const auto q = linear_field_dofs(dc, 0, G);
        CHECK(V.dot(q) == doctest::Approx(0.02 / 3.0).epsilon(1e-12));
    }
    SUBCASE("plane stress includes the out-of-plane contraction") {
        const double nu = 0.25;
        const RowX V = volumetric_row(dc, 0, alpha_factor(Mode::PlaneStress, nu));
        G << 0.01, 0.0, 0.0, 0.01;
        const auto q = linear_field_dofs(dc, 0, G);
        // eps_33 = -nu (e11 + e22) / (1 - nu); volumetric strain is tr/3.
        const double e33 = -nu * 0.02 / (1.0 - nu);
        CHECK(V.dot(q) == doctest::Approx((0.02 + e33) / 3.0).epsilon(1e-12));
    }
    SUBCASE("pure shear is volumetric-free") {
        const RowX V = volumetric_row(dc, 0, 1.0);
        G << 0.0, 0.01, 0.01, 0.0;
        const auto q = linear_field_dofs(dc, 0, G);
        CHECK(std::abs(V.dot(q)) < 1e-14);
    }
    SUBCASE("incompressible plane stress is rejected") {
        CHECK_THROWS_AS(alpha_factor(Mode::PlaneStress, 0.5), Error);
    }
}

TEST_CASE("stiffness: spectrum of the equilateral triangle") {
    const DualComplex dc = triangle_complex(Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 0.8660254));
    const MatX K = element_stiffness(dc, 0, 1000.0, 0.25);
    CHECK((K - K.transpose()).norm() <= 1e-12 * K.norm());
    const SpectralResult sr = spectral_check(K);
    CHECK(sr.nullity == 3);
    CHECK(sr.eigenvalues(3) > 0.0);
    CHECK(!sr.defective);
}

TEST_CASE("stiffness annihilates rigid modes") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 a(u(rng), u(rng));
        const Vec2 b = a + Vec2(1.4, 0.2 * u(rng));
        const Vec2 c = a + Vec2(0.6 + 0.2 * u(rng), 1.1);
        const DualComplex dc = triangle_complex(a, b, c);
        const MatX K = element_stiffness(dc, 0, 700.0, 0.2, true);
        const auto q = rigid_mode(dc, 0, Vec2(u(rng), u(rng)), u(rng), Vec2(u(rng), u(rng)));
        CHECK((K * q).norm() <= 1e-10 * K.norm() * q.norm());
    }
}

TEST_CASE("stiffness refuses unmerged degenerate elements unless diagnostic") {
    const DualComplex dc = triangle_complex(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    CHECK_THROWS_WITH_AS(element_stiffness(dc, 0, 1.0, 0.25), doctest::Contains("merge"), Error);
    CHECK_NOTHROW(element_stiffness(dc, 0, 1.0, 0.25, true));
}

TEST_CASE("spectral: right triangle gains zero-energy modes, Quad5 does not") {
    {
        // With the hypotenuse facet at zero length only four operator rows
        // survive (V is a combination of the two leg rows), so beyond the
        // three rigid modes each outer cell can spin about its facet
        // centroid: nullity 5.
        const DualComplex dc = triangle_complex(Vec2(0, 0), Vec2(1, 0), Vec2(1.0, 0.8));
        const SpectralResult sr = spectral_check(element_stiffness(dc, 0, 1.0, 0.25, true));
        CHECK(sr.nullity == 5);
        CHECK(sr.defective);
    }
    {
        const DualComplex dc = quad5_complex();
        REQUIRE(dc.elements[0].kind == ElementKind::Quad5);
        const SpectralResult sr = spectral_check(element_stiffness(dc, 0, 1.0, 0.25));
        CHECK(sr.nullity == 3);
        CHECK(!sr.defective);
    }
}

TEST_CASE("energy equivalence: 0.5 q'Kq equals the facet-sum energy") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double E = 1200.0, nu = 0.27;
    MaterialParams mat;
    mat.E = E;
    mat.nu = nu;
    for (const Mode mode : {Mode::PlaneStrain, Mode::PlaneStress}) {
        for (int rep = 0; rep < 2; ++rep) {
            DualComplex dc = rep == 0
                                 ? triangle_complex(Vec2(0, 0), Vec2(1.1, 0.1), Vec2(0.4, 0.9), mode)
                                 : quad5_complex(mode);
            const Element& el = dc.elements[0];
            Eigen::VectorXd q(3 * el.nodes.size());
            for (int i = 0; i < q.size(); ++i) q(i) = u(rng);
            const MatX K = element_stiffness(dc, 0, E, nu);
            const double quad_form = 0.5 * q.dot(K * q);

            const ElementOperators ops = element_operators(dc, 0, nu);
            double facet_sum = 0.0;
            for (std::size_t k = 0; k < el.facets.size(); ++k) {
                const Facet& f = dc.facets[el.facets[k]];
                const double eps_N = ops.facet[k].N.dot(q);
                const double eps_M = ops.facet[k].M.dot(q);
                const double eps_V = ops.V.dot(q);
                const Tractions t = elastic_tractions(eps_N, eps_M, eps_V, mat);
                facet_sum += 0.5 * dc.thickness * f.ell * f.h * (t.t_N * eps_N + t.t_M * eps_M);
            }
            CHECK(quad_form == doctest::Approx(facet_sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("mass: blocks, lumping and totals") {
    const Triangulation tri = structured_rectangle(1.0, 1.0, 0.26);
    const DualComplex dc = merge_problem_triangles(build_dual(tri, 2.0, Mode::PlaneStrain));
    const double rho = 7800.0;

    const Eigen::VectorXd m = lumped_mass_vector(dc, rho);
    for (const Node& n : dc.nodes)
        if (!n.orphan)
            for (int c = 0; c < 3; ++c) CHECK(m(n.dof[c]) > 0.0);
    double mass_u1 = 0.0;
    for (const VoronoiCell& c : dc.cells) mass_u1 += m(dc.nodes[c.node].dof[0]);
    CHECK(mass_u1 == doctest::Approx(rho * 2.0 * dc.domain_area).epsilon(1e-12));

    // Interior node of a centroidal layout: first moments vanish, block is
    // already diagonal. Pick the node nearest the mesh center, away from the
    // merged boundary quads.
    const VoronoiCell* interior = nullptr;
    double best = 1e300;
    for (const VoronoiCell& c : dc.cells) {
        const double d = (dc.nodes[c.node].pos - Vec2(0.5, 0.5)).norm();
        if (c.boundary.empty() && c.area > 0.0 && d < best) {
            best = d;
            interior = &c;
        }
    }
    REQUIRE(interior != nullptr);
    const Eigen::Matrix3d blk = node_mass_block(*interior, rho, dc.thickness);
    CHECK(std::abs(blk(0, 2)) <= 1e-8 * blk(0, 0));
    CHECK(std::abs(blk(1, 2)) <= 1e-8 * blk(1, 1));
    CHECK(blk(2, 2) > 0.0);
}

TEST_CASE("lambda_min decays monotonically toward the right-triangle limit") {
    double prev = 1e300;
    for (int k = 0; k < 10; ++k) {
        const double xt = 0.5 + 0.5 * k / 10.0;
        const DualComplex dc = triangle_complex(Vec2(0, 0), Vec2(1, 0), Vec2(xt, 0.8));
        const SpectralResult sr = spectral_check(element_stiffness(dc, 0, 1.0, 0.25, true));
        CHECK(sr.nullity == 3);
        CHECK(sr.lambda_min_positive < prev);
        prev = sr.lambda_min_positive;
    }
}

TEST_CASE("element operator dump contains rows and the stiffness block") {
    const DualComplex dc = quad5_complex();
    std::ostringstream os;
    dump_element_operators(dc, 0, 1000.0, 0.25, 1.0, os);
    const std::string s = os.str();
    CHECK(s.find("N1") != std::string::npos);
    CHECK(s.find("N5") != std::string::npos);
    CHECK(s.find("V ") != std::string::npos);
    CHECK(s.find("K") != std::string::npos);
    CHECK(s.find("quad5") != std::string::npos);
}
