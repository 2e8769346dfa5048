#pragma once

#include <functional>
#include <optional>

#include "dcm/assembly.hpp"
#include "dcm/bc.hpp"

namespace dcm {

// Prescribed-DOF table assembled from the essential BCs at a given time.
// When the same DOF is selected twice the later condition wins.
struct ConstraintSet {
    std::vector<int> dofs;              // sorted
    std::vector<double> values;         // aligned with dofs
    std::vector<char> is_velocity;      // dynamics: velocity- vs displacement-driven
    std::vector<const EssentialBC*> source;
};
ConstraintSet build_constraints(const DualComplex& dc, const BoundaryConditions& bcs, double t);

// External load vector at time t (tractions + nodal forces; unit vectors are
// cached by the callers where performance matters).
VecX external_forces(const DualComplex& dc, const BoundaryConditions& bcs, double t);

struct StaticResult {
    VecX q;
    VecX reactions;  // F_int - F_ext; meaningful on constrained DOFs
    std::vector<FacetState> states;
    double strain_energy = 0.0;
    double solve_residual = 0.0;
};

// K q = F by sparse symmetric factorization with Jacobi scaling; the solution
// is accepted when the relative residual is below 1e-10. Load programs are
// evaluated at t = 1.
StaticResult solve_linear_static(const DualComplex& dc, const MaterialParams& mat,
                                 const BoundaryConditions& bcs);

struct QuasiStaticOptions {
    int increments = 20;
    double t_end = 1.0;       // pseudo-time span of the load programs
    double tolerance = 1e-6;  // relative change of the internal force vector
    int max_iterations = 50;
    int max_halvings = 4;
    NodeSelector reaction_nodes;  // reaction resultant reported in the history
    int reaction_component = 0;
    std::function<double(double)> applied_of;  // history column; defaults to pseudo-time
    std::function<void(int increment, double t, const DualComplex&, const VecX&,
                       const std::vector<FacetState>&)>
        on_increment;
};

struct QuasiStaticRecord {
    double t = 0.0;
    double applied = 0.0;
    double reaction = 0.0;
    double strain_energy = 0.0;
    double dissipated = 0.0;  // accumulated facet damage dissipation
    double work = 0.0;        // accumulated external work on the driven DOFs
    int iterations = 0;
};

struct QuasiStaticResult {
    std::vector<QuasiStaticRecord> history;
    VecX q;
    std::vector<FacetState> states;
};

// Displacement-controlled incremental analysis with secant-stiffness
// iteration; damage is irreversible within and across increments. A
// non-converged increment is retried at half size (up to max_halvings).
QuasiStaticResult solve_quasi_static(const DualComplex& dc, const MaterialParams& mat,
                                     const BoundaryConditions& bcs,
                                     const QuasiStaticOptions& opts);

struct DynamicsOptions {
    double dt = 0.0;
    double t_end = 0.0;
    bool allow_unstable = false;
    bool with_damage = true;
    int history_every = 1;
    NodeSelector reaction_nodes;
    int reaction_component = 0;
    std::function<double(double)> applied_of;
    std::vector<double> probe_times;  // full-state captures for analysis
    int snapshot_every = 0;
    std::function<void(int step, double t, const DualComplex&, const VecX& q, const VecX& v,
                       const std::vector<FacetState>&)>
        on_snapshot;
};

struct DynamicsProbe {
    double t = 0.0;
    VecX q, v;
    std::vector<double> eps_max, damage;
};

struct DynamicsRecord {
    double t = 0.0;
    double applied = 0.0;
    double reaction = 0.0;
    double kinetic = 0.0;
    double strain_energy = 0.0;
    double dissipated = 0.0;
    double work = 0.0;
};

struct DynamicsResult {
    std::vector<DynamicsRecord> history;
    std::vector<DynamicsProbe> probes;
    VecX q, v;
    double t = 0.0;
    std::vector<FacetState> states;
    double dt_critical = 0.0;
    bool aborted = false;  // NaN encountered; q/v hold the last finite state
};

// Critical time step: 0.8 * min over facets of ell_f / sqrt(E_V / rho).
double critical_time_step(const DualComplex& dc, const MaterialParams& mat);

// Central-difference explicit integration with lumped mass, strong velocity/
// displacement enforcement on constrained DOFs and an energy ledger
// (kinetic + strain + dissipated vs external work).
DynamicsResult solve_explicit_dynamics(const DualComplex& dc, const MaterialParams& mat,
                                       const BoundaryConditions& bcs,
                                       const DynamicsOptions& opts);

}  // namespace dcm
