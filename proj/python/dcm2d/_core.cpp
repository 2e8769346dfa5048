#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dcm/runs.hpp"

namespace py = pybind11;
using namespace dcm;

namespace {

DualComplex build_complex(const std::string& preset, double size, const std::string& mode,
                          double thickness, unsigned seed) {
    const Mode m = (mode == "plane_stress") ? Mode::PlaneStress : Mode::PlaneStrain;
    return merge_problem_triangles(build_dual(preset_mesh(preset, size, seed), thickness, m));
}

py::dict mesh_info(const std::string& preset, double size, const std::string& mode,
                   double thickness, unsigned seed) {
    const DualComplex dc = build_complex(preset, size, mode, thickness, seed);
    int quad4 = 0, quad5 = 0;
    for (const Element& el : dc.elements) {
        quad4 += el.kind == ElementKind::Quad4;
        quad5 += el.kind == ElementKind::Quad5;
    }
    py::dict d;
    d["nodes"] = dc.nodes.size();
    d["elements"] = dc.elements.size();
    d["facets"] = dc.facets.size();
    d["quad4"] = quad4;
    d["quad5"] = quad5;
    d["domain_area"] = dc.domain_area;
    d["min_facet_ratio"] = dc.min_facet_ratio();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "2D discontinuous cell method: dual-mesh elasticity, cohesive fracture, "
              "explicit dynamics";

    py::register_exception<Error>(m, "DcmError");

    m.def("mesh_info", &mesh_info, py::arg("preset"), py::arg("size"),
          py::arg("mode") = "plane_strain", py::arg("thickness") = 1.0, py::arg("seed") = 1,
          "Build a preset mesh plus its dual complex and return summary counts.");

    m.def("preset_names", &preset_names);

    m.def(
        "generate_preset",
        [](const std::string& preset, double size, const std::string& prefix, unsigned seed) {
            save_triangulation(preset_mesh(preset, size, seed), prefix + ".node", prefix + ".ele");
        },
        py::arg("preset"), py::arg("size"), py::arg("prefix"), py::arg("seed") = 1,
        "Write <prefix>.node / <prefix>.ele mesh files for a preset geometry.");

    m.def(
        "patch_test",
        [](double mesh_size) {
            const PatchTestResult r = run_patch_test(mesh_size);
            py::dict d;
            d["elements"] = r.elements;
            d["max_stress_ratio_error"] = r.max_stress_ratio_error;
            d["max_interior_residual"] = r.max_interior_residual;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("mesh_size") = 0.15);

    m.def("spectral_study", []() {
        const SpectralStudyResult r = run_spectral_study();
        py::dict d;
        d["acute_nullity"] = r.acute_nullity;
        d["right_nullity"] = r.right_nullity;
        d["ratios"] = r.ratios;
        d["lambda_min"] = r.lambda_min;
        d["pass"] = r.pass;
        return d;
    });

    m.def(
        "cantilever_convergence",
        [](std::vector<double> sizes) {
            const ConvergenceResult r = run_cantilever_convergence(std::move(sizes));
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict e;
                e["elements"] = row.elements;
                e["tip_error"] = row.tip_error;
                e["energy_error"] = row.energy_error;
                rows.append(e);
            }
            py::dict d;
            d["rows"] = rows;
            d["rate_tip"] = r.rate_tip;
            d["rate_energy"] = r.rate_energy;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("sizes") = std::vector<double>{3.0, 2.0, 1.5, 1.0, 0.75});

    m.def("damage", &damage_of, py::arg("eps_max"), py::arg("eps_t"), py::arg("eps_F"),
          "Scalar damage from the history maximum principal strain.");

    m.def(
        "material_derived",
        [](double E, double nu, double sigma_t, double ell_t) {
            MaterialParams mat;
            mat.E = E;
            mat.nu = nu;
            mat.rho = 0.0;
            mat.sigma_t = sigma_t;
            mat.ell_t = ell_t;
            mat.validate();
            py::dict d;
            d["eps_t"] = mat.eps_t();
            d["G_t"] = mat.G_t();
            d["E_V"] = mat.E_V();
            d["E_D"] = mat.E_D();
            return d;
        },
        py::arg("E"), py::arg("nu"), py::arg("sigma_t"), py::arg("ell_t"));

    m.def(
        "run_config_text",
        [](const std::string& text) { return run_config(parse_config_text(text)); },
        py::arg("text"), "Parse a configuration string and run the analysis it describes.");

    m.def(
        "notched_tension",
        [](double notch_size, int increments, double end_displacement, unsigned seed) {
            const NotchedTensionResult r =
                run_notched_tension(notch_size, increments, end_displacement, seed);
            py::dict d;
            d["elements"] = r.elements;
            d["peak_sigma_N"] = r.peak_sigma_N;
            d["energy_per_area"] = r.energy_per_area;
            d["work"] = r.work;
            return d;
        },
        py::arg("notch_size"), py::arg("increments") = 100,
        py::arg("end_displacement") = 1.6e-4, py::arg("seed") = 1);
}
