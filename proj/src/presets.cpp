#include "dcm/presets.hpp"

#include <cmath>

namespace dcm {

namespace {

// Semicircular arc around `center` from angle a0 to a1 (radians), at least 8
// segments; endpoints excluded/included so polylines chain cleanly.
void append_arc(std::vector<Vec2>& poly, const Vec2& center, double r, double a0, double a1,
                int segments) {
    for (int k = 1; k <= segments; ++k) {
        const double a = a0 + (a1 - a0) * k / segments;
        poly.push_back(center + r * Vec2(std::cos(a), std::sin(a)));
    }
}

// Rectangle with a slot of the given half-width entering from one edge and
// capped by a semicircular tip. The slot runs from `mouth` to `tip` along an
// axis direction.
MeshDomain slotted_rectangle(double w, double h, const Vec2& mouth, const Vec2& tip,
                             double half_width, int tip_segments) {
    MeshDomain d;
    auto& b = d.boundary;
    if (std::abs(mouth.y()) < 1e-12 && std::abs(tip.x() - mouth.x()) < 1e-12) {
        // Slot entering from the bottom edge, pointing up.
        const double xc = mouth.x();
        b.emplace_back(0.0, 0.0);
        b.emplace_back(xc - half_width, 0.0);
        b.emplace_back(xc - half_width, tip.y() - half_width);
        append_arc(b, Vec2(xc, tip.y() - half_width), half_width, M_PI, 0.0, tip_segments);
        b.emplace_back(xc + half_width, 0.0);
        b.emplace_back(w, 0.0);
        b.emplace_back(w, h);
        b.emplace_back(0.0, h);
        return d;
    }
    // Slot entering from the left edge, pointing right.
    const double yc = mouth.y();
    b.emplace_back(0.0, 0.0);
    b.emplace_back(w, 0.0);
    b.emplace_back(w, h);
    b.emplace_back(0.0, h);
    b.emplace_back(0.0, yc + half_width);
    b.emplace_back(tip.x() - half_width, yc + half_width);
    append_arc(b, Vec2(tip.x() - half_width, yc), half_width, M_PI / 2.0, -M_PI / 2.0,
               tip_segments);
    b.emplace_back(0.0, yc - half_width);
    return d;
}

SizeField graded_size(double fine, double coarse, Vec2 band_lo, Vec2 band_hi, double growth) {
    return [=](const Vec2& p) {
        const Vec2 c = p.cwiseMax(band_lo).cwiseMin(band_hi);
        const double dist = (p - c).norm();
        return std::min(coarse, fine + growth * dist);
    };
}

}  // namespace

bool is_structured_preset(const std::string& name) {
    return name == "rectangle" || name == "cantilever41" || name == "spalling_bar";
}

PresetDims preset_dims(const std::string& name) {
    PresetDims d;
    if (name == "rectangle") {
        d.width = 1.0;
        d.height = 1.0;
    } else if (name == "cantilever41") {
        d.width = 48.0;
        d.height = 12.0;
    } else if (name == "notched_panel") {
        d.width = 0.300;
        d.height = 0.120;
        d.notch_tip = Vec2(0.150, 0.040);
        d.notch_halfwidth = 0.006;
        d.ligament = 0.080;
    } else if (name == "spalling_bar") {
        d.width = 0.010;
        d.height = 0.001;
    } else if (name == "kalthoff_half") {
        d.width = 0.100;
        d.height = 0.100;
        d.notch_tip = Vec2(0.050, 0.025);
        d.notch_halfwidth = 0.00075;
        d.ligament = 0.050;
    } else if (name == "branching_panel") {
        d.width = 0.100;
        d.height = 0.040;
        d.notch_tip = Vec2(0.050, 0.020);
        d.notch_halfwidth = 0.001;
        d.ligament = 0.050;
    } else {
        throw Error("unknown preset '" + name + "'");
    }
    return d;
}

std::vector<std::string> preset_names() {
    return {"rectangle",    "cantilever41",  "notched_panel",
            "spalling_bar", "kalthoff_half", "branching_panel"};
}

Triangulation preset_mesh(const std::string& name, double size, unsigned seed) {
    if (!(size > 0.0)) throw Error("preset mesh size must be positive");
    const PresetDims d = preset_dims(name);

    if (name == "rectangle" || name == "cantilever41" || name == "spalling_bar")
        return structured_rectangle(d.width, d.height, size);

    if (name == "notched_panel") {
        if (size > d.notch_halfwidth)
            throw Error("element size exceeds the notch half-width; refine");
        const MeshDomain dom = slotted_rectangle(
            d.width, d.height, Vec2(d.notch_tip.x(), 0.0), d.notch_tip, d.notch_halfwidth, 10);
        // Fine band along the expected crack plane above the notch.
        const SizeField field =
            graded_size(size, 4.0 * size, Vec2(d.notch_tip.x() - 0.020, 0.0),
                        Vec2(d.notch_tip.x() + 0.020, d.height), 0.25);
        return unstructured_mesh(dom, field, seed);
    }
    if (name == "kalthoff_half") {
        const MeshDomain dom = slotted_rectangle(d.width, d.height, Vec2(0.0, d.notch_tip.y()),
                                                 d.notch_tip, d.notch_halfwidth, 8);
        // Keep boundary sampling finer than the slot width so the
        // triangulation cannot bridge the notch faces.
        const double slot_cap = 0.9 * 2.0 * d.notch_halfwidth;
        const SizeField field = [=](const Vec2& p) {
            const double dist =
                point_segment_distance(p, Vec2(0.0, d.notch_tip.y()), d.notch_tip);
            const double near_slot = std::min(size, slot_cap + 0.3 * dist);
            return std::min(size, std::max(near_slot, 0.4 * size));
        };
        return unstructured_mesh(dom, field, seed);
    }
    if (name == "branching_panel") {
        const MeshDomain dom = slotted_rectangle(d.width, d.height, Vec2(0.0, d.notch_tip.y()),
                                                 d.notch_tip, d.notch_halfwidth, 8);
        const double slot_cap = 0.9 * 2.0 * d.notch_halfwidth;
        const SizeField field = [=](const Vec2& p) {
            const double dist =
                point_segment_distance(p, Vec2(0.0, d.notch_tip.y()), d.notch_tip);
            const double near_slot = std::min(size, slot_cap + 0.3 * dist);
            return std::min(size, std::max(near_slot, 0.4 * size));
        };
        return unstructured_mesh(dom, field, seed);
    }
    throw Error("unknown preset '" + name + "'");
}

}  // namespace dcm
