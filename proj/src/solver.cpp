#include "dcm/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <set>

namespace dcm {

ConstraintSet build_constraints(const DualComplex& dc, const BoundaryConditions& bcs, double t) {
    std::vector<double> value(dc.dof_count(), 0.0);
    std::vector<char> vel(dc.dof_count(), 0);
    std::vector<const EssentialBC*> src(dc.dof_count(), nullptr);
    for (const EssentialBC& bc : bcs.essential) {
        const double p = bc.program.value(t);
        for (int n : select_nodes(dc, bc.where)) {
            const Eigen::Vector3d f =
                bc.field ? bc.field(dc.nodes[n].pos) : Eigen::Vector3d::Ones();
            for (int c = 0; c < 3; ++c) {
                if (!bc.comps[c]) continue;
                const int d = dc.nodes[n].dof[c];
                value[d] = f(c) * p;
                vel[d] = bc.is_velocity ? 1 : 0;
                src[d] = &bc;
            }
        }
    }
    // Orphan nodes carry no stiffness or mass; pin them.
    for (const Node& n : dc.nodes) {
        if (!n.orphan) continue;
        for (int c = 0; c < 3; ++c) {
            const int d = n.dof[c];
            value[d] = 0.0;
            vel[d] = 0;
            src[d] = reinterpret_cast<const EssentialBC*>(&dc);  // marker: pinned orphan
        }
    }
    ConstraintSet cs;
    for (int d = 0; d < dc.dof_count(); ++d) {
        if (!src[d]) continue;
        cs.dofs.push_back(d);
        cs.values.push_back(value[d]);
        cs.is_velocity.push_back(vel[d]);
        cs.source.push_back(src[d]);
    }
    return cs;
}

VecX external_forces(const DualComplex& dc, const BoundaryConditions& bcs, double t) {
    VecX F = VecX::Zero(dc.dof_count());
    for (const EdgeTractionBC& bc : bcs.tractions)
        F += bc.program.value(t) * edge_traction_forces(dc, bc.where, bc.traction);
    for (const NodalForceBC& bc : bcs.forces) {
        const double p = bc.program.value(t);
        for (int n : select_nodes(dc, bc.where))
            for (int c = 0; c < 3; ++c) F(dc.nodes[n].dof[c]) += p * bc.force(c);
    }
    return F;
}

namespace {

// Reduced symmetric solve with Jacobi scaling; the constrained DOF set (and
// hence the sparsity pattern) is fixed at construction.
class ReducedSolver {
public:
    ReducedSolver(int n_dofs, const std::vector<int>& constrained) : map_(n_dofs, -1) {
        is_constrained_.assign(n_dofs, 0);
        for (int d : constrained) is_constrained_[d] = 1;
        for (int d = 0; d < n_dofs; ++d)
            if (!is_constrained_[d]) map_[d] = n_free_++;
    }

    int free_count() const { return n_free_; }

    // Solves K q = F with q = values on constrained DOFs; returns the full q.
    VecX solve(const SpMat& K, const VecX& F, const std::vector<int>& cdofs,
               const std::vector<double>& cvalues, double* residual_out) {
        VecX qc = VecX::Zero(K.rows());
        for (std::size_t i = 0; i < cdofs.size(); ++i) qc(cdofs[i]) = cvalues[i];

        std::vector<Eigen::Triplet<double>> trips;
        VecX rhs = VecX::Zero(n_free_);
        for (int d = 0; d < K.rows(); ++d)
            if (!is_constrained_[d]) rhs(map_[d]) = F(d);
        for (int col = 0; col < K.outerSize(); ++col) {
            for (SpMat::InnerIterator it(K, col); it; ++it) {
                const int r = static_cast<int>(it.row());
                const int c = col;
                if (is_constrained_[r]) continue;
                if (is_constrained_[c])
                    rhs(map_[r]) -= it.value() * qc(c);
                else
                    trips.emplace_back(map_[r], map_[c], it.value());
            }
        }
        SpMat Kff(n_free_, n_free_);
        Kff.setFromTriplets(trips.begin(), trips.end());

        // Jacobi scaling to even out the mixed displacement/rotation units.
        VecX scale(n_free_);
        for (int i = 0; i < n_free_; ++i) {
            const double dgn = Kff.coeff(i, i);
            scale(i) = (dgn > 0.0) ? 1.0 / std::sqrt(dgn) : 1.0;
        }
        SpMat Ks = scale.asDiagonal() * Kff * scale.asDiagonal();
        VecX rhss = scale.asDiagonal() * rhs;

        Eigen::SimplicialLDLT<SpMat> ldlt;
        ldlt.compute(Ks);
        if (ldlt.info() != Eigen::Success) throw Error("linear solve: factorization failed");
        VecX ys = ldlt.solve(rhss);
        VecX qf = scale.asDiagonal() * ys;

        const double rnorm = (Kff * qf - rhs).norm();
        const double fnorm = std::max(rhs.norm(), 1e-300);
        if (residual_out) *residual_out = rnorm / fnorm;

        VecX q = qc;
        for (int d = 0; d < K.rows(); ++d)
            if (!is_constrained_[d]) q(d) = qf(map_[d]);
        return q;
    }

private:
    std::vector<int> map_;
    std::vector<char> is_constrained_;
    int n_free_ = 0;
};

std::string free_rigid_mode_report(const DualComplex& dc, const ConstraintSet& cs) {
    bool has_u1 = false, has_u2 = false, has_phi = false;
    std::vector<double> u1_y, u2_x;
    for (std::size_t i = 0; i < cs.dofs.size(); ++i) {
        const int d = cs.dofs[i];
        const int node = d / 3, comp = d % 3;
        if (dc.nodes[node].orphan) continue;
        if (comp == 0) {
            has_u1 = true;
            u1_y.push_back(dc.nodes[node].pos.y());
        } else if (comp == 1) {
            has_u2 = true;
            u2_x.push_back(dc.nodes[node].pos.x());
        } else {
            has_phi = true;
        }
    }
    std::string out;
    if (!has_u1) out += " translation-x";
    if (!has_u2) out += " translation-y";
    auto all_equal = [](const std::vector<double>& v) {
        if (v.empty()) return true;
        for (double x : v)
            if (std::abs(x - v.front()) > 1e-12) return false;
        return true;
    };
    if (!has_phi && all_equal(u1_y) && all_equal(u2_x)) out += " rotation";
    if (out.empty()) out = " (constraints look sufficient; system may be defective)";
    return out;
}

}  // namespace

StaticResult solve_linear_static(const DualComplex& dc, const MaterialParams& mat,
                                 const BoundaryConditions& bcs) {
    const ConstraintSet cs = build_constraints(dc, bcs, 1.0);
    const VecX F = external_forces(dc, bcs, 1.0);
    const SpMat K = global_stiffness(dc, mat);

    ReducedSolver red(dc.dof_count(), cs.dofs);
    StaticResult res;
    try {
        res.q = red.solve(K, F, cs.dofs, cs.values, &res.solve_residual);
    } catch (const Error&) {
        throw Error("static solve failed: unconstrained rigid mode?" +
                    free_rigid_mode_report(dc, cs));
    }
    if (!res.q.allFinite() || res.solve_residual > 1e-10)
        throw Error("static solve did not reach the residual tolerance; free rigid mode?" +
                    free_rigid_mode_report(dc, cs));

    const AssemblyCache cache = build_cache(dc, mat.nu);
    res.states.resize(dc.facets.size());
    update_facet_strains(dc, cache, res.q, res.states);
    update_damage_and_tractions(dc, res.states, mat, false);
    res.reactions = internal_forces(dc, cache, res.states) - F;
    res.strain_energy = strain_energy(cache, res.states);
    return res;
}

namespace {

double reaction_sum(const DualComplex& dc, const VecX& reactions, const NodeSelector& sel,
                    int comp) {
    if (!sel.pred) return 0.0;
    double sum = 0.0;
    for (int n : select_nodes(dc, sel)) sum += reactions(dc.nodes[n].dof[comp]);
    return sum;
}

}  // namespace

QuasiStaticResult solve_quasi_static(const DualComplex& dc, const MaterialParams& mat,
                                     const BoundaryConditions& bcs,
                                     const QuasiStaticOptions& opts) {
    if (opts.increments < 1) throw Error("quasi-static: increments must be >= 1");
    const AssemblyCache cache = build_cache(dc, mat.nu);
    std::vector<FacetState> states = init_facet_states(dc, mat);

    const ConstraintSet cs0 = build_constraints(dc, bcs, opts.t_end);
    ReducedSolver red(dc.dof_count(), cs0.dofs);

    QuasiStaticResult res;
    VecX q = VecX::Zero(dc.dof_count());
    double t = 0.0;
    double work = 0.0, dissipated = 0.0;
    double prev_reaction = 0.0, prev_applied = 0.0;

    const double dt0 = opts.t_end / opts.increments;
    int increment = 0;
    while (t < opts.t_end - 1e-12 * opts.t_end) {
        double dt = std::min(dt0, opts.t_end - t);
        bool committed = false;
        for (int halving = 0; halving <= opts.max_halvings && !committed; ++halving) {
            const double t_target = t + dt;
            const std::vector<FacetState> saved = states;
            const ConstraintSet cs = build_constraints(dc, bcs, t_target);
            const VecX F_ext = external_forces(dc, bcs, t_target);

            VecX F_int_prev = VecX::Zero(dc.dof_count());
            VecX q_trial = q;
            int iter = 0;
            bool converged = false;
            for (iter = 1; iter <= opts.max_iterations; ++iter) {
                const SpMat K = global_secant_stiffness(dc, mat, states);
                q_trial = red.solve(K, F_ext, cs.dofs, cs.values, nullptr);
                update_facet_strains(dc, cache, q_trial, states);
                update_damage_and_tractions(dc, states, mat, true);
                const VecX F_int = internal_forces(dc, cache, states);
                const double change = (F_int - F_int_prev).norm();
                const double scale = std::max(F_int.norm(), 1e-300);
                F_int_prev = F_int;
                if (change / scale <= opts.tolerance) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                states = saved;  // roll back the failed attempt
                dt *= 0.5;
                if (halving == opts.max_halvings)
                    throw Error("quasi-static increment did not converge after " +
                                std::to_string(opts.max_halvings) + " halvings at t = " +
                                std::to_string(t));
                continue;
            }

            // Commit: dissipation from the damage growth over the increment.
            for (std::size_t i = 0; i < states.size(); ++i) {
                const double dD = states[i].damage - saved[i].damage;
                if (dD > 0.0)
                    dissipated += facet_elastic_energy(cache.facet[i], states[i], mat) * dD;
            }
            q = q_trial;
            t = t_target;
            ++increment;
            committed = true;

            const VecX F_int = internal_forces(dc, cache, states);
            const VecX reactions = F_int - F_ext;
            const double reaction =
                reaction_sum(dc, reactions, opts.reaction_nodes, opts.reaction_component);
            const double applied = opts.applied_of ? opts.applied_of(t) : t;
            work += 0.5 * (reaction + prev_reaction) * (applied - prev_applied);
            prev_reaction = reaction;
            prev_applied = applied;

            QuasiStaticRecord rec;
            rec.t = t;
            rec.applied = applied;
            rec.reaction = reaction;
            rec.strain_energy = strain_energy(cache, states);
            rec.dissipated = dissipated;
            rec.work = work;
            rec.iterations = iter;
            res.history.push_back(rec);
            if (opts.on_increment) opts.on_increment(increment, t, dc, q, states);
        }
    }
    res.q = q;
    res.states = std::move(states);
    return res;
}

double critical_time_step(const DualComplex& dc, const MaterialParams& mat) {
    const double cd = std::sqrt(mat.E_V() / mat.rho);
    double ell_min = 1e300;
    for (const Facet& f : dc.facets) ell_min = std::min(ell_min, f.ell);
    return 0.8 * ell_min / cd;
}

DynamicsResult solve_explicit_dynamics(const DualComplex& dc, const MaterialParams& mat,
                                       const BoundaryConditions& bcs,
                                       const DynamicsOptions& opts) {
    if (!(opts.dt > 0.0) || !(opts.t_end > 0.0)) throw Error("dynamics: dt and t_end required");
    if (!(mat.rho > 0.0)) throw Error("dynamics: density must be positive");
    DynamicsResult res;
    res.dt_critical = critical_time_step(dc, mat);
    if (opts.dt > res.dt_critical && !opts.allow_unstable)
        throw Error("dt = " + std::to_string(opts.dt) + " exceeds the stability estimate " +
                    std::to_string(res.dt_critical) + "; pass the override flag to proceed");

    const AssemblyCache cache = build_cache(dc, mat.nu);
    std::vector<FacetState> states =
        opts.with_damage ? init_facet_states(dc, mat) : std::vector<FacetState>(dc.facets.size());

    const VecX mass = lumped_mass_vector(dc, mat.rho);
    VecX inv_mass(mass.size());
    for (int i = 0; i < mass.size(); ++i) inv_mass(i) = (mass(i) > 0.0) ? 1.0 / mass(i) : 0.0;

    // Unit load vectors per natural BC; programs scale them each step.
    std::vector<VecX> traction_units;
    for (const EdgeTractionBC& bc : bcs.tractions)
        traction_units.push_back(edge_traction_forces(dc, bc.where, bc.traction));
    std::vector<VecX> force_units;
    for (const NodalForceBC& bc : bcs.forces) {
        VecX F = VecX::Zero(dc.dof_count());
        for (int n : select_nodes(dc, bc.where))
            for (int c = 0; c < 3; ++c) F(dc.nodes[n].dof[c]) += bc.force(c);
        force_units.push_back(F);
    }
    auto ext_at = [&](double t) {
        VecX F = VecX::Zero(dc.dof_count());
        for (std::size_t i = 0; i < traction_units.size(); ++i)
            F += bcs.tractions[i].program.value(t) * traction_units[i];
        for (std::size_t i = 0; i < force_units.size(); ++i)
            F += bcs.forces[i].program.value(t) * force_units[i];
        return F;
    };

    // Constrained DOF table (selection is time-independent; values vary).
    struct Driven {
        int dof;
        double field;  // spatial factor
        const EssentialBC* bc;
    };
    std::vector<Driven> driven;
    {
        const ConstraintSet cs = build_constraints(dc, bcs, 0.0);
        for (std::size_t i = 0; i < cs.dofs.size(); ++i) {
            const int d = cs.dofs[i];
            const int node = d / 3, comp = d % 3;
            const EssentialBC* bc = cs.source[i];
            if (bc == reinterpret_cast<const EssentialBC*>(&dc)) {  // pinned orphan
                driven.push_back({d, 0.0, nullptr});
                continue;
            }
            const Eigen::Vector3d f =
                bc->field ? bc->field(dc.nodes[node].pos) : Eigen::Vector3d::Ones();
            driven.push_back({d, f(comp), bc});
        }
    }
    auto half_velocity = [&](const Driven& dr, double t_half, double dt) -> double {
        if (!dr.bc) return 0.0;
        if (dr.bc->is_velocity) return dr.field * dr.bc->program.value(t_half);
        const double v1 = dr.bc->program.value(t_half + 0.5 * dt);
        const double v0 = dr.bc->program.value(t_half - 0.5 * dt);
        return dr.field * (v1 - v0) / dt;
    };

    const double dt = opts.dt;
    const int n_steps = static_cast<int>(std::ceil(opts.t_end / dt - 1e-9));
    VecX q = VecX::Zero(dc.dof_count());
    VecX v_half = VecX::Zero(dc.dof_count());
    VecX R_prev = VecX::Zero(dc.dof_count());
    std::vector<double> damage_prev(states.size(), 0.0);

    update_facet_strains(dc, cache, q, states);
    update_damage_and_tractions(dc, states, mat, opts.with_damage);
    VecX F_ext0 = ext_at(0.0);
    VecX F_int = internal_forces(dc, cache, states);
    VecX a = inv_mass.cwiseProduct(F_ext0 - F_int);
    for (const Driven& dr : driven) a(dr.dof) = 0.0;
    v_half = 0.5 * dt * a;
    for (const Driven& dr : driven)
        if (!dr.bc || dr.bc->program.active(0.5 * dt))
            v_half(dr.dof) = half_velocity(dr, 0.5 * dt, dt);

    double work = 0.0, dissipated = 0.0;
    double t = 0.0;
    VecX q_good = q, v_good = v_half;
    std::size_t next_probe = 0;
    std::vector<double> sorted_probes = opts.probe_times;
    std::sort(sorted_probes.begin(), sorted_probes.end());

    auto record = [&](double time, const VecX& vel) {
        DynamicsRecord rec;
        rec.t = time;
        rec.applied = opts.applied_of ? opts.applied_of(time) : 0.0;
        rec.reaction = reaction_sum(dc, R_prev, opts.reaction_nodes, opts.reaction_component);
        rec.kinetic = 0.5 * vel.dot(mass.cwiseProduct(vel));
        rec.strain_energy = strain_energy(cache, states);
        rec.dissipated = dissipated;
        rec.work = work;
        res.history.push_back(rec);
    };
    record(0.0, VecX::Zero(dc.dof_count()));

    for (int step = 0; step < n_steps; ++step) {
        const double t1 = t + dt;
        q += dt * v_half;
        for (const Driven& dr : driven)
            if (dr.bc && !dr.bc->is_velocity && dr.bc->program.active(t1))
                q(dr.dof) = dr.field * dr.bc->program.value(t1);

        update_facet_strains(dc, cache, q, states);
        update_damage_and_tractions(dc, states, mat, opts.with_damage);
        F_int = internal_forces(dc, cache, states);
        const VecX F_ext1 = ext_at(t1);

        VecX a_new = inv_mass.cwiseProduct(F_ext1 - F_int);
        VecX v_next = v_half + dt * a_new;
        for (const Driven& dr : driven) {
            if (!dr.bc) {
                v_next(dr.dof) = 0.0;
                continue;
            }
            if (dr.bc->program.active(t1 + 0.5 * dt))
                v_next(dr.dof) = half_velocity(dr, t1 + 0.5 * dt, dt);
        }

        // Constraint reactions and the energy ledger.
        VecX R = VecX::Zero(dc.dof_count());
        for (const Driven& dr : driven) {
            const int d = dr.dof;
            const double acc = (v_next(d) - v_half(d)) / dt;
            R(d) = mass(d) * acc - (F_ext1(d) - F_int(d));
        }
        work += 0.5 * (F_ext0 + F_ext1).dot(dt * v_half);
        for (const Driven& dr : driven)
            work += 0.5 * (R_prev(dr.dof) + R(dr.dof)) * dt * v_half(dr.dof);

        if (opts.with_damage) {
            for (std::size_t i = 0; i < states.size(); ++i) {
                const double dD = states[i].damage - damage_prev[i];
                if (dD > 0.0)
                    dissipated += facet_elastic_energy(cache.facet[i], states[i], mat) * dD;
                damage_prev[i] = states[i].damage;
            }
        }

        const VecX v_mid = 0.5 * (v_half + v_next);
        R_prev = R;
        F_ext0 = F_ext1;
        v_half = v_next;
        t = t1;

        if ((step + 1) % 50 == 0 || step + 1 == n_steps) {
            if (!q.allFinite() || !v_half.allFinite()) {
                res.aborted = true;
                res.q = q_good;
                res.v = v_good;
                res.t = t;
                res.states = std::move(states);
                return res;
            }
            q_good = q;
            v_good = v_mid;
        }

        if ((step + 1) % std::max(1, opts.history_every) == 0 || step + 1 == n_steps)
            record(t, v_mid);

        while (next_probe < sorted_probes.size() && sorted_probes[next_probe] <= t + 1e-15) {
            DynamicsProbe probe;
            probe.t = t;
            probe.q = q;
            probe.v = v_mid;
            probe.eps_max.resize(states.size());
            probe.damage.resize(states.size());
            for (std::size_t i = 0; i < states.size(); ++i) {
                probe.eps_max[i] = states[i].eps_max;
                probe.damage[i] = states[i].damage;
            }
            res.probes.push_back(std::move(probe));
            ++next_probe;
        }

        if (opts.snapshot_every > 0 && opts.on_snapshot &&
            ((step + 1) % opts.snapshot_every == 0 || step + 1 == n_steps))
            opts.on_snapshot(step + 1, t, dc, q, v_mid, states);
    }

    res.q = q;
    res.v = v_half;
    res.t = t;
    res.states = std::move(states);
    return res;
}

}  // namespace dcm
