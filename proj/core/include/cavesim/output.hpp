#pragma once

#include <string>

#include "cavesim/evolution.hpp"
#include "cavesim/fem.hpp"
#include "cavesim/mesh.hpp"

namespace cavesim {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Legacy ASCII VTK unstructured grid: all nodes as POINTS, active triangles
/// as CELLS, damage as a point scalar and displacement as a point vector.
/// Byte output is deterministic for fixed inputs.
void write_vtk(const Mesh& mesh, const NodalField& alpha, const NodalField& u,
               const std::string& path);

/// Per-step energy trace, one row per loading step. Column layout is fixed:
/// step, am_iterations, elastic_energy, local_dissipation,
/// gradient_dissipation, external_work, total_energy, max_alpha,
/// damaged_area_fraction.
std::string trace_csv_string(const Trajectory& trajectory);
void write_trace_csv(const Trajectory& trajectory, const std::string& path);

/// Plain-text state checkpoint (step index plus nodal alpha, bound and
/// displacement); mesh geometry is rebuilt from the config on load.
void write_checkpoint(const State& state, const std::string& path);

struct CheckpointData {
  int step = 0;
  NodalField alpha;
  NodalField alpha_prev;
  NodalField u;
};

CheckpointData load_checkpoint(const std::string& path);

}  // namespace cavesim
