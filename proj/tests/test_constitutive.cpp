#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dcm/material.hpp"

using namespace dcm;

namespace {

MaterialParams sample_material() {
    MaterialParams m;
    m.E = 30e9;
    m.nu = 0.2;
    m.rho = 2400.0;
    m.sigma_t = 2e6;
    m.ell_t = 0.7;
    return m;
}

// Projection of a symmetric in-plane tensor onto a facet frame, plus the
// volumetric strain of the corresponding 3D state; the independent oracle
// for the Appendix-style inversion.
struct Projected {
    double eps_N, eps_M, eps_V;
};
Projected project(const Mat2& t, const Vec2& n, const Vec2& m, double nu, Mode mode) {
    Projected p;
    p.eps_N = n.dot(t * n);
    p.eps_M = n.dot(t * m);
    const double trace2d = t(0, 0) + t(1, 1);
    const double e33 = (mode == Mode::PlaneStrain) ? 0.0 : -nu * trace2d / (1.0 - nu);
    p.eps_V = (trace2d + e33) / 3.0;
    return p;
}

}  // namespace

TEST_CASE("material parameter consistency") {
    const MaterialParams m = sample_material();
    CHECK(m.eps_t() == doctest::Approx(6.6667e-5).epsilon(1e-3));
    CHECK(m.G_t() == doctest::Approx(46.6667).epsilon(1e-6));
    // Round trip ell_t = 2 E G_t / sigma_t^2.
    CHECK(2.0 * m.E * m.G_t() / (m.sigma_t * m.sigma_t) == doctest::Approx(m.ell_t).epsilon(1e-12));
    const MaterialParams r =
        MaterialParams::from_fracture_energy(m.E, m.nu, m.rho, m.sigma_t, m.G_t());
    CHECK(r.ell_t == doctest::Approx(m.ell_t).epsilon(1e-12));

    MaterialParams bad = m;
    bad.nu = 0.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = m;
    bad.sigma_t = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("elastic tractions: volumetric and deviatoric modes") {
    MaterialParams m;
    m.E = 1000.0;
    m.nu = 0.25;
    SUBCASE("hydrostatic") {
        const Tractions t = elastic_tractions(0.02, 0.0, 0.02, m);
        CHECK(t.t_N == doctest::Approx(m.E_V() * 0.02));
        CHECK(t.t_M == doctest::Approx(0.0));
    }
    SUBCASE("pure facet shear") {
        const Tractions t = elastic_tractions(0.0, 0.015, 0.0, m);
        CHECK(t.t_N == doctest::Approx(0.0));
        CHECK(t.t_M == doctest::Approx(m.E_D() * 0.015));
    }
    SUBCASE("patch-test value: plane strain biaxial 0.1") {
        // E = 1000 MPa, nu = 0.25, eps_xx = eps_yy = 0.1 -> sigma_xx = 160 MPa.
        const double eps_V = 0.2 / 3.0;
        const Tractions t = elastic_tractions(0.1, 0.0, eps_V, m);
        CHECK(t.t_N == doctest::Approx(160.0).epsilon(1e-12));
    }
}

TEST_CASE("denominator identity holds to 1e-14 over random facet angles") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int k = 0; k < 10000; ++k) {
        const double a = angle(rng);
        const Vec2 n(std::cos(a), std::sin(a));
        const Vec2 m = rot90(n);
        const double N11 = n.x() * n.x(), N12 = n.x() * n.y(), N22 = n.y() * n.y();
        const double M11 = n.x() * m.x(), M22 = n.y() * m.y();
        const double M12 = 0.5 * (n.x() * m.y() + n.y() * m.x());
        const double den = M11 * N12 + M12 * N22 - M12 * N11 - M22 * N12;
        CHECK(std::abs(den + 0.5) <= 1e-14);
    }
}

TEST_CASE("facet strain tensor: axis-aligned facet, plane strain") {
    const Vec2 n(1, 0), m(0, 1);
    const double a = 0.01;
    // Uniaxial-strain field: eps_11 = a, everything else zero.
    const SymTensor2D t = facet_strain_tensor(a, 0.0, a / 3.0, n, m, 0.3, Mode::PlaneStrain);
    CHECK(t.t11 == doctest::Approx(a).epsilon(1e-12));
    CHECK(t.t12 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.t22 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.t33 == 0.0);
}

TEST_CASE("project-invert round trip on random tensors, both modes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double nu = 0.28;
    for (const Mode mode : {Mode::PlaneStrain, Mode::PlaneStress}) {
        double max_err = 0.0;
        for (int k = 0; k < 10000; ++k) {
            Mat2 g;
            const double g12 = u(rng);
            g << u(rng), g12, g12, u(rng);
            const double a = angle(rng);
            const Vec2 n(std::cos(a), std::sin(a));
            const Vec2 m = rot90(n);
            const Projected p = project(g, n, m, nu, mode);
            const SymTensor2D t = facet_strain_tensor(p.eps_N, p.eps_M, p.eps_V, n, m, nu, mode);
            max_err = std::max({max_err, std::abs(t.t11 - g(0, 0)), std::abs(t.t12 - g(0, 1)),
                                std::abs(t.t22 - g(1, 1))});
            if (mode == Mode::PlaneStress) {
                const double e33 = -nu * (g(0, 0) + g(1, 1)) / (1.0 - nu);
                max_err = std::max(max_err, std::abs(t.t33 - e33));
            }
        }
        CHECK(max_err <= 1e-12);
    }
}

TEST_CASE("principal strain: diagonal, shear, and governing eps_33") {
    SymTensor2D t;
    t.t11 = 3.0;
    t.t22 = 1.0;
    CHECK(principal_max(t, Mode::PlaneStrain) == doctest::Approx(3.0));
    SymTensor2D s;
    s.t12 = 0.5;
    CHECK(principal_max(s, Mode::PlaneStrain) == doctest::Approx(0.5));
    // Plane stress with strong in-plane compression: the lateral expansion
    // governs.
    SymTensor2D c;
    c.t11 = -0.01;
    c.t22 = -0.01;
    c.t33 = -0.3 * (c.t11 + c.t22) / 0.7;
    CHECK(principal_max(c, Mode::PlaneStress) == doctest::Approx(c.t33));
    CHECK(principal_max(c, Mode::PlaneStrain) == doctest::Approx(-0.01));
}

TEST_CASE("damage law: onset, reference value, limits, monotonicity") {
    const MaterialParams m = sample_material();
    const double eps_t = m.eps_t();
    SUBCASE("no damage at or below the strain limit") {
        CHECK(damage_of(eps_t, eps_t, 1e-3) == 0.0);
        CHECK(damage_of(0.5 * eps_t, eps_t, 1e-3) == 0.0);
    }
    SUBCASE("reference point: eps_max = 2 eps_t with ell_t/ell_f = 3") {
        const double eps_F = 0.5 * eps_t * (3.0 - 1.0);  // equals eps_t
        const double d = damage_of(2.0 * eps_t, eps_t, eps_F);
        CHECK(d == doctest::Approx(1.0 - 0.5 * std::exp(-1.0)).epsilon(1e-12));
        CHECK(d == doctest::Approx(0.81606).epsilon(1e-5));
    }
    SUBCASE("full damage limit") {
        CHECK(damage_of(1e6 * eps_t, eps_t, eps_t) > 0.999999);
        CHECK(damage_of(1e6 * eps_t, eps_t, eps_t) < 1.0);
    }
    SUBCASE("monotone in the history variable") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> du(0.0, 0.5 * eps_t);
        double eps = 0.5 * eps_t, prev_d = 0.0;
        for (int k = 0; k < 200; ++k) {
            eps += du(rng);
            const double d = damage_of(eps, eps_t, eps_t);
            CHECK(d >= prev_d);
            prev_d = d;
        }
        CHECK(prev_d > 0.9);
    }
}

TEST_CASE("facet softening parameter and the snap-back guard") {
    const MaterialParams m = sample_material();
    CHECK(facet_softening_strain(m, m.ell_t / 3.0) ==
          doctest::Approx(m.eps_t() * (3.0 - 1.0) / 2.0));
    CHECK_THROWS_WITH_AS(facet_softening_strain(m, m.ell_t), doctest::Contains("snap-back"),
                         Error);
    CHECK_THROWS_AS(facet_softening_strain(m, 0.0), Error);
}

TEST_CASE("damage update ratchets the history and damage") {
    const MaterialParams m = sample_material();
    FacetState s;
    s.eps_F = facet_softening_strain(m, 0.002);
    damage_update(s, 2.0 * m.eps_t(), m);
    const double d1 = s.damage;
    CHECK(d1 > 0.0);
    damage_update(s, 0.5 * m.eps_t(), m);  // unloading does not heal
    CHECK(s.damage == d1);
    CHECK(s.eps_max == 2.0 * m.eps_t());
    damage_update(s, 3.0 * m.eps_t(), m);
    CHECK(s.damage > d1);
}

TEST_CASE("damaged tractions scale the elastic ones by (1 - D)") {
    const MaterialParams m = sample_material();
    FacetState s;
    s.eps_N = 3e-4;
    s.eps_M = 1e-4;
    s.eps_V = 1e-4;
    s.damage = 0.0;
    const Tractions el = elastic_tractions(s.eps_N, s.eps_M, s.eps_V, m);
    Tractions t = damaged_tractions(s, m);
    CHECK(t.t_N == doctest::Approx(el.t_N));
    CHECK(t.t_M == doctest::Approx(el.t_M));
    s.damage = 0.5;
    t = damaged_tractions(s, m);
    CHECK(t.t_N == doctest::Approx(0.5 * el.t_N));
    CHECK(t.t_M == doctest::Approx(0.5 * el.t_M));
}

TEST_CASE("traction-separation law dissipates G_t per unit crack area") {
    // Single facet, nu = 0 (no volumetric coupling), monotonic normal strain;
    // trapezoid quadrature of t_N(w) from 0 to 20 eps_t ell.
    MaterialParams m;
    m.E = 30e9;
    m.nu = 0.0;
    m.rho = 0.0;
    m.sigma_t = 2e6;
    m.ell_t = 0.7;
    const double eps_t = m.eps_t();

    auto dissipated = [&](double ell_f, double w_end) {
        const double eps_F = facet_softening_strain(m, ell_f);
        const int n = 400000;
        double area = 0.0, t_prev = 0.0, w_prev = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double w = w_end * i / n;
            const double eps = w / ell_f;
            const double d = damage_of(eps, eps_t, eps_F);
            const double t = (1.0 - d) * m.E * eps;  // nu = 0: t_N = (1-D) E eps_N
            area += 0.5 * (t + t_prev) * (w - w_prev);
            t_prev = t;
            w_prev = w;
        }
        return area;
    };
    // Opening that exhausts the exponential tail for a given facet size.
    auto w_full = [&](double ell_f) {
        return ell_f * (eps_t + 40.0 * facet_softening_strain(m, ell_f));
    };

    const double G = m.G_t();
    // At ell_t/ell_f = 3 the softening scale is eps_t itself and the curve is
    // spent well before w = 20 eps_t ell.
    const double ell3 = m.ell_t / 3.0;
    CHECK(std::abs(dissipated(ell3, 20.0 * eps_t * ell3) - G) / G < 0.02);
    // Crack-band property: facet size drops out of the dissipated energy.
    CHECK(std::abs(dissipated(0.002, w_full(0.002)) - G) / G < 0.02);
    CHECK(std::abs(dissipated(0.007, w_full(0.007)) - G) / G < 0.02);
    CHECK(std::abs(dissipated(0.002, w_full(0.002)) - dissipated(0.007, w_full(0.007))) / G <
          0.02);
}

TEST_CASE("unloading follows the secant back through the origin") {
    const MaterialParams m = sample_material();
    FacetState s;
    s.eps_F = facet_softening_strain(m, 0.002);
    s.eps_N = 3.0 * m.eps_t();
    s.eps_V = s.eps_N / 3.0;
    damage_update(s, s.eps_N, m);
    const double D = s.damage;
    // Scale the strains down; tractions must stay proportional (secant).
    const Tractions t1 = damaged_tractions(s, m);
    s.eps_N *= 0.25;
    s.eps_V *= 0.25;
    const Tractions t2 = damaged_tractions(s, m);
    CHECK(t2.t_N == doctest::Approx(0.25 * t1.t_N).epsilon(1e-12));
    CHECK(s.damage == D);
}

TEST_CASE("facet stress tensor: trace handling in both modes") {
    MaterialParams m;
    m.E = 1000.0;
    m.nu = 0.25;
    const Vec2 n = Vec2(std::cos(0.7), std::sin(0.7));
    const Vec2 mm = rot90(n);
    SUBCASE("pure shear tractions give a trace-free tensor") {
        const SymTensor2D s = facet_stress_tensor(0.0, 5.0, 0.0, n, mm, m, Mode::PlaneStress);
        CHECK(s.t11 + s.t22 == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("uniform biaxial stress is reconstructed exactly, plane strain") {
        // gamma = 0.1 I (in-plane), plane strain.
        const double eps_V = 0.2 / 3.0;
        const double sigma = m.E_V() * eps_V + m.E_D() * (0.1 - eps_V);
        const Tractions t = elastic_tractions(0.1, 0.0, eps_V, m);
        const SymTensor2D s =
            facet_stress_tensor(t.t_N, t.t_M, m.E_V() * eps_V, n, mm, m, Mode::PlaneStrain);
        CHECK(s.t11 == doctest::Approx(sigma).epsilon(1e-12));
        CHECK(s.t22 == doctest::Approx(sigma).epsilon(1e-12));
        CHECK(std::abs(s.t12) < 1e-9);
        // sigma_33 = nu (s11 + s22) in plane strain.
        CHECK(s.t33 == doctest::Approx(m.nu * 2.0 * sigma).epsilon(1e-12));
    }
}
