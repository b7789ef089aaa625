#pragma once

#include "vem/mesh.hpp"

#include <vector>

namespace vem {

/// Shape-regularity diagnostics. tau is the longest-to-shortest edge ratio;
/// rho is the kernel in-radius over the diameter.
struct MeshQualityReport {
  std::vector<double> cell_tau;
  std::vector<double> cell_rho;
  std::vector<double> face_tau;  // 3D only
  double tau_max = 1.0;          // max over cells
  double face_tau_max = 1.0;     // max over faces (3D)
  double rho_min = 0.5;
  double alpha_h = 0.0;  // ln(1 + max cell tau)
  double beta_h = 0.0;   // ln(1 + max face tau), 3D only
};

MeshQualityReport quality_report(const PolygonalMesh2& mesh);
MeshQualityReport quality_report(const PolyhedralMesh3& mesh);

}  // namespace vem
