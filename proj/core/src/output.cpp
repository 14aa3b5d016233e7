#include "cavesim/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace cavesim {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content,
                const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError(std::string("cannot open ") + what + " '" + path + "'");
  out << content;
  if (!out) throw OutputError(std::string("write failed for ") + what + " '" + path + "'");
}

}  // namespace

void write_vtk(const Mesh& mesh, const NodalField& alpha, const NodalField& u,
               const std::string& path) {
  if (alpha.size() != mesh.node_count() || u.size() != 2 * mesh.node_count()) {
    throw OutputError("write_vtk: field size mismatch for '" + path + "'");
  }
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n";
  out << "cavesim damage and displacement fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  const int n_points = mesh.node_count();
  out << "POINTS " << n_points << " double\n";
  for (int n = 0; n < n_points; ++n) {
    out << fmt(mesh.nodes[n].x) << " " << fmt(mesh.nodes[n].y) << " 0\n";
  }

  const int n_cells = mesh.active_tri_count();
  out << "CELLS " << n_cells << " " << 4 * n_cells << "\n";
  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (!mesh.tri_active[t]) continue;
    const auto& tri = mesh.tris[t];
    out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  out << "CELL_TYPES " << n_cells << "\n";
  for (int t = 0; t < n_cells; ++t) out << "5\n";

  out << "POINT_DATA " << n_points << "\n";
  out << "SCALARS damage double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int n = 0; n < n_points; ++n) out << fmt(alpha[n]) << "\n";
  out << "VECTORS displacement double\n";
  for (int n = 0; n < n_points; ++n) {
    out << fmt(u[2 * n]) << " " << fmt(u[2 * n + 1]) << " 0\n";
  }

  write_file(path, out.str(), "vtk file");
}

std::string trace_csv_string(const Trajectory& trajectory) {
  std::ostringstream out;
  out << "step,am_iterations,elastic_energy,local_dissipation,"
         "gradient_dissipation,external_work,total_energy,max_alpha,"
         "damaged_area_fraction\n";
  for (const StepSnapshot& s : trajectory.steps) {
    out << s.state.step << "," << s.am.iterations << ","
        << fmt_e(s.energy.elastic) << "," << fmt_e(s.energy.local_dissipation) << ","
        << fmt_e(s.energy.gradient_dissipation) << "," << fmt_e(s.energy.external_work)
        << "," << fmt_e(s.energy.total) << "," << fmt_e(s.max_alpha) << ","
        << fmt_e(s.damaged_area_fraction) << "\n";
  }
  return out.str();
}

void write_trace_csv(const Trajectory& trajectory, const std::string& path) {
  if (trajectory.steps.empty()) {
    throw OutputError("write_trace_csv: empty trajectory for '" + path + "'");
  }
  write_file(path, trace_csv_string(trajectory), "trace csv");
}

void write_checkpoint(const State& state, const std::string& path) {
  std::ostringstream out;
  out << "cavesim-checkpoint 1\n";
  out << "step " << state.step << "\n";
  out << "nodes " << state.mesh.node_count() << "\n";
  for (int n = 0; n < state.mesh.node_count(); ++n) {
    out << fmt(state.alpha[n]) << " " << fmt(state.alpha_prev[n]) << " "
        << fmt(state.u[2 * n]) << " " << fmt(state.u[2 * n + 1]) << "\n";
  }
  write_file(path, out.str(), "checkpoint");
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open checkpoint '" + path + "'");
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "cavesim-checkpoint" || version != 1) {
    throw OutputError("not a cavesim checkpoint: '" + path + "'");
  }
  std::string key;
  CheckpointData data;
  int nodes = 0;
  in >> key >> data.step;
  if (!in || key != "step") throw OutputError("malformed checkpoint '" + path + "'");
  in >> key >> nodes;
  if (!in || key != "nodes" || nodes <= 0) {
    throw OutputError("malformed checkpoint '" + path + "'");
  }
  data.alpha.resize(nodes);
  data.alpha_prev.resize(nodes);
  data.u.resize(2 * nodes);
  for (int n = 0; n < nodes; ++n) {
    in >> data.alpha[n] >> data.alpha_prev[n] >> data.u[2 * n] >> data.u[2 * n + 1];
  }
  if (!in) throw OutputError("truncated checkpoint '" + path + "'");
  return data;
}

}  // namespace cavesim
