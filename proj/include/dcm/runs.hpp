#pragma once

#include <string>

#include "dcm/config.hpp"
#include "dcm/presets.hpp"
#include "dcm/snapshot.hpp"
#include "dcm/solver.hpp"

namespace dcm {

// Uniform bi-axial patch test: eps_xx = eps_yy = 0.1 imposed through boundary
// displacements on a unit square; per-facet stresses are reconstructed and
// compared with the exact uniform tensor.
struct PatchTestResult {
    int elements = 0;
    double max_stress_ratio_error = 0.0;  // max |sigma_xx/exact - 1| over facets
    double max_interior_residual = 0.0;   // relative to the boundary force scale
    bool pass = false;
};
PatchTestResult run_patch_test(double mesh_size = 0.15, double E = 1.0e9, double nu = 0.25,
                               double eps = 0.1);

// Spectral study: nullity of an acute triangle, monotonic decay of the
// smallest positive eigenvalue as the triangle degenerates toward right, and
// the singular right-triangle limit.
struct SpectralStudyResult {
    int acute_nullity = 0;
    int right_nullity = 0;
    std::vector<double> ratios;       // facet/edge ratio per sample
    std::vector<double> lambda_min;   // smallest positive eigenvalue per sample
    bool monotonic = false;
    bool pass = false;
};
SpectralStudyResult run_spectral_study(int samples = 11);

// Cantilever 4:1 under parabolic tip shear (plane strain, nu = 0.3) against
// the exact thick-beam solution; errors and fitted convergence rates over a
// mesh refinement ladder.
struct ConvergenceRow {
    double mesh_size = 0.0;
    int elements = 0;
    int dofs = 0;
    double tip_error = 0.0;
    double energy_error = 0.0;
};
struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double rate_tip = 0.0;
    double rate_energy = 0.0;
    bool errors_decreasing = false;
    bool pass = false;
};
ConvergenceResult run_cantilever_convergence(std::vector<double> sizes = {3.0, 2.0, 1.5, 1.0,
                                                                          0.75});

// Exact cantilever fields (plane-strain form) used as the convergence oracle.
struct BeamSpec {
    double L = 48.0, D = 12.0, P = 1000.0, E = 30000.0, nu = 0.3;
};
Eigen::Vector3d beam_exact_displacement(const BeamSpec& b, const Vec2& x);  // (ux, uy, phi)
Eigen::Vector3d beam_exact_stress(const BeamSpec& b, const Vec2& x);        // (sxx, syy, txy)
double beam_exact_energy(const BeamSpec& b);  // per unit thickness, plane strain

// Notched-panel direct tension at one notch-zone mesh size; runs to full
// separation and reports dissipated energy per unit crack area.
struct NotchedTensionResult {
    int elements = 0;
    double peak_sigma_N = 0.0;       // Pa
    double final_sigma_N = 0.0;      // Pa, should be near zero at separation
    double work = 0.0;               // J, area under the P-delta curve
    double dissipated = 0.0;         // J, facet damage bookkeeping
    double energy_per_area = 0.0;    // J/m^2, work / (ligament * thickness)
    std::vector<QuasiStaticRecord> history;
};
NotchedTensionResult run_notched_tension(double notch_size, int increments = 100,
                                         double end_displacement = 1.6e-4, unsigned seed = 1);

// Spalling bar under a sinusoidal end velocity impulse.
struct SpallingResult {
    int elements = 0;
    double wave_speed = 0.0;          // measured pulse speed (m/s)
    double amplification = 0.0;       // free-end velocity peak / input peak
    double eps_ratio_before = 0.0;    // max eps_max/eps_t before reflection
    double eps_ratio_after_end = 0.0; // max eps_max/eps_t in the end region after
    double spall_min_x = 0.0;         // leftmost x of D > 0.9 facets (m)
    double spall_band_height = 0.0;   // y-extent of the largest connected band (m)
    bool has_spall = false;
    std::vector<DynamicsRecord> history;
};
SpallingResult run_spalling_bar(double mesh_size = 1.0e-4, double dt = 4.0e-9,
                                double t_end = 4.6e-6);

// Kalthoff-Winkler half plate under 16 m/s edge velocity.
struct KalthoffResult {
    int elements = 0;
    bool crack_initiated = false;
    double angle_deg = 0.0;  // average propagation angle at the probe time
    int damaged_facets = 0;
    std::vector<DynamicsRecord> history;
};
KalthoffResult run_kalthoff(double mesh_size = 1.0e-3, double dt = 2.0e-8,
                            double probe_time = 56.0e-6, double t_end = 60.0e-6,
                            unsigned seed = 1, const std::string& snapshot_dir = "");

// Crack branching panel under step traction.
struct BranchingResult {
    int elements = 0;
    bool single_path_near_tip = false;
    bool branched = false;       // >= 2 diverging damage paths downstream
    double branch_x = 0.0;       // strip where the split is first seen (m)
    double max_separation = 0.0; // y-separation of the paths at the far end (m)
    std::vector<DynamicsRecord> history;
};
BranchingResult run_branching(double mesh_size = 1.0e-3, double dt = 4.0e-8,
                              double t_end = 6.0e-5, unsigned seed = 1,
                              const std::string& snapshot_dir = "");

// Config-driven analysis used by the CLI; returns the process exit code
// (0 ok, 1 validation failure, 2 numerical failure).
int run_config(const ProblemConfig& cfg);

}  // namespace dcm
