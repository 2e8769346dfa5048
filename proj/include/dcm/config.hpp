#pragma once

#include <string>
#include <vector>

#include "dcm/bc.hpp"
#include "dcm/material.hpp"

namespace dcm {

// One [bc] block of the configuration file.
struct BCConfig {
    std::string kind;  // essential | traction | force
    std::string select = "all";
    std::array<bool, 3> comps{false, false, false};  // essential: u1 u2 phi
    bool velocity = false;                           // essential: prescribe velocity
    LoadProgram program = LoadProgram::step(1.0);
    Vec2 traction = Vec2::Zero();       // traction kind: vector scaled by program
    Eigen::Vector3d force = Eigen::Vector3d::Zero();  // force kind
};

// Key/value text configuration: [geometry], [material], [analysis], repeated
// [bc] blocks and [output]. SI units throughout.
struct ProblemConfig {
    // geometry
    std::string preset;
    double size = 0.0;
    std::string nodes_path, elements_path;  // alternative to preset
    std::string mode = "plane_strain";
    double thickness = 1.0;
    unsigned mesh_seed = 1;
    // material
    double E = 0.0, nu = 0.0, rho = 0.0, sigma_t = 0.0, ell_t = 0.0, G_t = 0.0;
    // analysis
    std::string analysis = "static";  // static | quasi_static | dynamic
    int increments = 20;
    double t_end = 1.0;
    double dt = 0.0;
    bool allow_unstable = false;
    bool damage = true;
    // bcs
    std::vector<BCConfig> bcs;
    // output
    std::string out_dir = "out";
    std::string history = "history.csv";
    int snapshot_every = 0;
    double magnify = 1.0;
};

ProblemConfig parse_config_text(const std::string& text);
ProblemConfig load_config(const std::string& path);
std::string serialize_config(const ProblemConfig& cfg);

// Validation + conversion into solver inputs.
MaterialParams config_material(const ProblemConfig& cfg);
Mode config_mode(const ProblemConfig& cfg);
BoundaryConditions config_bcs(const ProblemConfig& cfg);

}  // namespace dcm
