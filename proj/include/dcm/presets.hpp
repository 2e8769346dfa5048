#pragma once

#include <string>

#include "dcm/meshgen.hpp"

namespace dcm {

// Benchmark geometries with their reference dimensions (meters). `size` is
// the target element size in the zone of interest (notch zone for the
// notched/cracked presets); plain rectangles mesh uniformly.
//
//   rectangle        unit square
//   cantilever41     48 x 12 beam (length-to-depth 4)
//   notched_panel    300 x 120 panel, 12-wide 40-deep edge notch,
//                    semicircular tip (all mm)
//   spalling_bar     10 x 1 mm bar
//   kalthoff_half    100 x 100 mm half plate, 1.5 mm notch slot at y = 25
//   branching_panel  100 x 40 mm panel, 2 mm slot at mid-height
Triangulation preset_mesh(const std::string& name, double size, unsigned seed = 1);

bool is_structured_preset(const std::string& name);

// Reference dimensions a runner needs to place BCs and normalize outputs.
struct PresetDims {
    double width = 0.0, height = 0.0;
    Vec2 notch_tip = Vec2::Zero();
    double notch_halfwidth = 0.0;
    double ligament = 0.0;  // uncracked depth ahead of the notch
};
PresetDims preset_dims(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace dcm
