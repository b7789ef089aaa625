#include "vem/quality.hpp"

#include "vem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vem {

MeshQualityReport quality_report(const PolygonalMesh2& mesh) {
  MeshQualityReport r;
  r.tau_max = 0.0;
  r.rho_min = INFINITY;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry2 g = cell_geometry(mesh, c);
    r.cell_tau.push_back(g.tau());
    r.cell_rho.push_back(g.rho());
    r.tau_max = std::max(r.tau_max, g.tau());
    r.rho_min = std::min(r.rho_min, g.rho());
  }
  r.alpha_h = std::log1p(r.tau_max);
  return r;
}

MeshQualityReport quality_report(const PolyhedralMesh3& mesh) {
  MeshQualityReport r;
  r.tau_max = 0.0;
  r.face_tau_max = 0.0;
  r.rho_min = INFINITY;
  const auto& verts = mesh.vertices();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& loop = mesh.face(f);
    double mn = INFINITY;
    double mx = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const double len = (verts[loop[(i + 1) % loop.size()]] - verts[loop[i]]).norm();
      mn = std::min(mn, len);
      mx = std::max(mx, len);
    }
    r.face_tau.push_back(mx / mn);
    r.face_tau_max = std::max(r.face_tau_max, mx / mn);
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry3 g = cell_geometry(mesh, c);
    double mn = INFINITY;
    double mx = 0.0;
    for (int e : mesh.cell_edge_ids(c)) {
      const auto& ev = mesh.edges()[e];
      const double len = (verts[ev[1]] - verts[ev[0]]).norm();
      mn = std::min(mn, len);
      mx = std::max(mx, len);
    }
    r.cell_tau.push_back(mx / mn);
    r.cell_rho.push_back(g.rho());
    r.tau_max = std::max(r.tau_max, mx / mn);
    r.rho_min = std::min(r.rho_min, g.rho());
  }
  r.alpha_h = std::log1p(r.tau_max);
  r.beta_h = std::log1p(r.face_tau_max);
  return r;
}

}  // namespace vem
