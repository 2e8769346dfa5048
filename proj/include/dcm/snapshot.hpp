#pragma once

#include <string>
#include <vector>

#include "dcm/assembly.hpp"
#include "dcm/solver.hpp"

namespace dcm {

// Legacy-VTK unstructured snapshot. Every facet contributes two sub-polygons
// (one per adjacent cell), each displaced with its own cell's rigid motion so
// cracks open visibly. Cell data: damage, eps_max/eps_t, sigma_xx/sigma_t,
// t_N, t_M; point data: displacement, rotation and (when given) velocity.
// `magnify` scales displacements at output time only.
void write_field_snapshot(const DualComplex& dc, const VecX& q,
                          const std::vector<FacetState>& states, const MaterialParams& mat,
                          const std::string& path, double magnify = 1.0,
                          const VecX* velocity = nullptr);

// Minimal re-parser used to validate the snapshot structure.
struct SnapshotSummary {
    int points = 0;
    int cells = 0;
    std::vector<std::string> cell_arrays;
    std::vector<std::string> point_arrays;
    double damage_min = 0.0, damage_max = 0.0;
};
SnapshotSummary read_snapshot_summary(const std::string& path);

void write_history_csv(const std::vector<QuasiStaticRecord>& rows, double sigma_n_scale,
                       const std::string& path);
void write_history_csv(const std::vector<DynamicsRecord>& rows, double sigma_n_scale,
                       const std::string& path);

}  // namespace dcm
