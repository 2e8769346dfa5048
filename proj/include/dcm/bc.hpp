#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "dcm/mesh.hpp"

namespace dcm {

// Geometric node/segment selection; `spec` keeps the textual predicate so
// configurations survive a parse -> serialize round trip.
struct NodeSelector {
    std::function<bool(const Vec2&)> pred;
    std::string spec;

    bool operator()(const Vec2& p) const { return pred(p); }
};

struct LoadProgram {
    enum class Shape { Ramp, SinePulse, Step, Table };
    Shape shape = Shape::Step;
    double a = 0.0;  // Ramp: rate; SinePulse: peak; Step: value
    double b = 0.0;  // SinePulse: duration
    std::vector<double> table_t, table_v;

    double value(double t) const;
    // A sine pulse releases its DOFs once the pulse is over.
    bool active(double t) const;

    static LoadProgram ramp(double rate) { return {Shape::Ramp, rate, 0.0, {}, {}}; }
    static LoadProgram step(double v) { return {Shape::Step, v, 0.0, {}, {}}; }
    static LoadProgram sine_pulse(double peak, double duration) {
        return {Shape::SinePulse, peak, duration, {}, {}};
    }
    static LoadProgram table(std::vector<double> t, std::vector<double> v) {
        return {Shape::Table, 0.0, 0.0, std::move(t), std::move(v)};
    }
};

// Prescribed DOF values u_i(x, t) = field(x)[i] * program(t) on selected
// nodes. In dynamics `is_velocity` switches the prescription to velocities.
struct EssentialBC {
    NodeSelector where;
    std::array<bool, 3> comps{false, false, false};
    std::function<Eigen::Vector3d(const Vec2&)> field;  // defaults to (1,1,1)
    LoadProgram program = LoadProgram::step(0.0);
    bool is_velocity = false;
};

// Traction field (Pa) integrated over the selected cell boundary segments;
// produces forces plus moments about each cell node.
struct EdgeTractionBC {
    NodeSelector where;  // selects segments whose endpoints both satisfy it
    std::function<Vec2(const Vec2&)> traction;
    LoadProgram program = LoadProgram::step(1.0);
};

struct NodalForceBC {
    NodeSelector where;
    Eigen::Vector3d force = Eigen::Vector3d::Zero();  // (F1, F2, moment)
    LoadProgram program = LoadProgram::step(1.0);
};

struct BoundaryConditions {
    std::vector<EssentialBC> essential;
    std::vector<EdgeTractionBC> tractions;
    std::vector<NodalForceBC> forces;
};

std::vector<int> select_nodes(const DualComplex& dc, const NodeSelector& sel);

// Consistent nodal loads from a traction field over the selected boundary
// segments (unit program). Throws if the selector matches no boundary
// segment.
Eigen::VectorXd edge_traction_forces(const DualComplex& dc, const NodeSelector& where,
                                     const std::function<Vec2(const Vec2&)>& traction);

// Textual geometric predicates:
//   all | x < v | x > v | y < v | y > v | box x0 y0 x1 y1 |
//   circle cx cy r | near x y tol, combinable with '&'.
NodeSelector parse_selector(const std::string& spec);

}  // namespace dcm
