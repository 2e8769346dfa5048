#include <CLI11.hpp>
#include <iostream>

#include "dcm/runs.hpp"

namespace {

using namespace dcm;

ProblemConfig load_with_overrides(const std::string& config_path, double mesh_size,
                                  const std::string& out_dir, int snapshot_every,
                                  bool allow_unstable, double magnify) {
    ProblemConfig cfg = load_config(config_path);
    if (mesh_size > 0.0) cfg.size = mesh_size;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (snapshot_every >= 0) cfg.snapshot_every = snapshot_every;
    if (allow_unstable) cfg.allow_unstable = true;
    if (magnify > 0.0) cfg.magnify = magnify;
    return cfg;
}

int cmd_mesh_info(const std::string& config_path, const std::string& preset, double mesh_size,
                  bool dump, const std::string& write_prefix) {
    Triangulation tri;
    double thickness = 1.0;
    Mode mode = Mode::PlaneStrain;
    if (!config_path.empty()) {
        const ProblemConfig cfg = load_config(config_path);
        tri = cfg.preset.empty() ? load_triangulation(cfg.nodes_path, cfg.elements_path)
                                 : preset_mesh(cfg.preset, cfg.size, cfg.mesh_seed);
        thickness = cfg.thickness;
        mode = config_mode(cfg);
    } else if (!preset.empty()) {
        tri = preset_mesh(preset, mesh_size);
    } else {
        std::cerr << "error: mesh-info needs --config or --preset\n";
        return 1;
    }
    if (!write_prefix.empty()) {
        save_triangulation(tri, write_prefix + ".node", write_prefix + ".ele");
        std::cout << "wrote " << write_prefix << ".node / .ele\n";
    }
    const DualComplex raw = build_dual(tri, thickness, mode);
    const DualComplex dc = merge_problem_triangles(raw);
    for (const std::string& w : dc.warnings) std::cerr << "warning: " << w << "\n";
    int quad4 = 0, quad5 = 0;
    for (const Element& el : dc.elements) {
        quad4 += el.kind == ElementKind::Quad4;
        quad5 += el.kind == ElementKind::Quad5;
    }
    std::cout << "nodes:            " << dc.nodes.size() << "\n"
              << "triangles (raw):  " << raw.elements.size() << "\n"
              << "elements:         " << dc.elements.size() << " (" << quad5 << " quad5, " << quad4
              << " quad4)\n"
              << "facets:           " << dc.facets.size() << "\n"
              << "domain area:      " << dc.domain_area << "\n"
              << "min facet ratio:  " << dc.min_facet_ratio() << " (raw " << raw.min_facet_ratio()
              << ")\n";
    if (dump) dump_facet_table(dc, std::cout);
    return 0;
}

int cmd_spectral(const std::string& config_path, bool merge) {
    if (config_path.empty()) {
        const SpectralStudyResult r = run_spectral_study();
        std::cout << "acute triangle nullity:  " << r.acute_nullity << "\n"
                  << "right triangle nullity:  " << r.right_nullity << "\n"
                  << "lambda_min trend (facet/edge ratio -> lambda):\n";
        for (std::size_t i = 0; i < r.ratios.size(); ++i)
            std::cout << "  " << r.ratios[i] << " -> " << r.lambda_min[i] << "\n";
        std::cout << (r.pass ? "PASS" : "FAIL") << " spectral study\n";
        return r.pass ? 0 : 1;
    }
    const ProblemConfig cfg = load_config(config_path);
    Triangulation tri = cfg.preset.empty()
                            ? load_triangulation(cfg.nodes_path, cfg.elements_path)
                            : preset_mesh(cfg.preset, cfg.size, cfg.mesh_seed);
    DualComplex dc = build_dual(tri, cfg.thickness, config_mode(cfg));
    if (merge) dc = merge_problem_triangles(dc);
    const MaterialParams mat = config_material(cfg);
    int defective = 0;
    for (std::size_t e = 0; e < dc.elements.size(); ++e) {
        const SpectralResult sr =
            spectral_check(element_stiffness(dc, static_cast<int>(e), mat.E, mat.nu, true));
        if (sr.defective) {
            ++defective;
            std::cout << "FAIL element " << (e + 1) << ": nullity " << sr.nullity
                      << ", min eigenvalue " << sr.eigenvalues(0) << "\n";
        }
    }
    if (defective == 0) {
        std::cout << "PASS all " << dc.elements.size() << " elements admissible (nullity 3)\n";
        return 0;
    }
    std::cout << "FAIL " << defective << " defective element(s)\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcm2d: discontinuous cell method solver (2D)"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset, write_prefix, benchmark;
    double mesh_size = 0.0, magnify = 0.0;
    int snapshot_every = -1;
    bool allow_unstable = false, dump = false, merge = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "problem configuration file");
        if (needs_config) opt->required();
        cmd->add_option("--mesh-size", mesh_size, "override geometry.size");
        cmd->add_option("--out-dir", out_dir, "override output.dir");
        cmd->add_option("--snapshot-every", snapshot_every, "override output.snapshot_every");
        cmd->add_flag("--allow-unstable-dt", allow_unstable, "run past the stability estimate");
        cmd->add_option("--magnify", magnify, "displacement magnification in snapshots");
    };

    auto* info = app.add_subcommand("mesh-info", "build a mesh and report dual-complex stats");
    info->add_option("--config", config_path, "problem configuration file");
    info->add_option("--preset", preset, "preset geometry name");
    info->add_option("--mesh-size", mesh_size, "target element size");
    info->add_flag("--dump-facets", dump, "print the facet table");
    info->add_option("--write-mesh", write_prefix, "write <prefix>.node/.ele files");

    auto* spectral = app.add_subcommand("spectral", "per-element eigenvalue diagnostics");
    spectral->add_option("--config", config_path, "problem configuration file");
    spectral->add_flag("--merge", merge, "run the merge pass before checking");

    auto* stat = app.add_subcommand("static", "linear static analysis");
    add_common(stat, true);
    auto* qstat = app.add_subcommand("quasi-static", "incremental damage analysis");
    add_common(qstat, false);
    qstat->add_option("--benchmark", benchmark, "canned benchmark: notched-tension");
    auto* dyn = app.add_subcommand("dynamic", "explicit dynamics");
    add_common(dyn, false);
    dyn->add_option("--benchmark", benchmark, "canned benchmark: spalling|kalthoff|branching");

    auto* patch = app.add_subcommand("patch-test", "uniform-field patch test (self-contained)");
    patch->add_option("--mesh-size", mesh_size, "target element size (default 0.15)");
    auto* conv = app.add_subcommand("convergence", "cantilever convergence study (self-contained)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) return cmd_mesh_info(config_path, preset, mesh_size, dump, write_prefix);
        if (spectral->parsed()) return cmd_spectral(config_path, merge);
        if (patch->parsed()) {
            const PatchTestResult r = run_patch_test(mesh_size > 0.0 ? mesh_size : 0.15);
            std::cout << "elements:                 " << r.elements << "\n"
                      << "max |sigma/exact - 1|:    " << r.max_stress_ratio_error << "\n"
                      << "max interior residual:    " << r.max_interior_residual << "\n"
                      << (r.pass ? "PASS" : "FAIL") << " patch test\n";
            return r.pass ? 0 : 1;
        }
        if (conv->parsed()) {
            const ConvergenceResult r = run_cantilever_convergence();
            std::cout << "size  elements  dofs  tip_error  energy_error\n";
            for (const auto& row : r.rows)
                std::cout << row.mesh_size << "  " << row.elements << "  " << row.dofs << "  "
                          << row.tip_error << "  " << row.energy_error << "\n";
            std::cout << "tip displacement rate:  " << r.rate_tip << "\n"
                      << "energy rate:            " << r.rate_energy << "\n"
                      << (r.pass ? "PASS" : "FAIL") << " convergence study\n";
            return r.pass ? 0 : 1;
        }
        if (qstat->parsed() && benchmark == "notched-tension") {
            const NotchedTensionResult r =
                run_notched_tension(mesh_size > 0.0 ? mesh_size : 0.004);
            std::cout << "elements:          " << r.elements << "\n"
                      << "peak sigma_N:      " << r.peak_sigma_N << " Pa\n"
                      << "dissipated/area:   " << r.energy_per_area << " J/m^2\n";
            return 0;
        }
        if (dyn->parsed() && !benchmark.empty()) {
            const std::string snapdir = out_dir.empty() ? "out" : out_dir;
            if (benchmark == "spalling") {
                const SpallingResult r = run_spalling_bar();
                std::cout << "wave speed:     " << r.wave_speed << " m/s\n"
                          << "amplification:  " << r.amplification << "\n"
                          << "spall min x:    " << r.spall_min_x << " m\n";
                return 0;
            }
            if (benchmark == "kalthoff") {
                const KalthoffResult r = run_kalthoff(mesh_size > 0.0 ? mesh_size : 1.0e-3, 2.0e-8,
                                                      56.0e-6, 60.0e-6, 1, snapdir);
                std::cout << "elements:    " << r.elements << "\n"
                          << "crack angle: " << r.angle_deg << " deg\n";
                return 0;
            }
            if (benchmark == "branching") {
                const BranchingResult r =
                    run_branching(mesh_size > 0.0 ? mesh_size : 1.0e-3, 4.0e-8, 6.0e-5, 1, snapdir);
                std::cout << "elements:  " << r.elements << "\n"
                          << "branched:  " << (r.branched ? "yes" : "no") << "\n";
                return 0;
            }
            std::cerr << "error: unknown benchmark '" << benchmark << "'\n";
            return 1;
        }
        // Config-driven analyses.
        ProblemConfig cfg = load_with_overrides(config_path, mesh_size, out_dir, snapshot_every,
                                                allow_unstable, magnify);
        if (stat->parsed()) cfg.analysis = "static";
        if (qstat->parsed()) cfg.analysis = "quasi_static";
        if (dyn->parsed()) cfg.analysis = "dynamic";
        return run_config(cfg);
    } catch (const dcm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
