#include "vem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vem {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

template <int Dim>
void choose_subsets(int n, int start, std::vector<int>& current,
                    const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(current.size()) == Dim + 1) {
    visit(current);
    return;
  }
  for (int i = start; i < n; ++i) {
    current.push_back(i);
    choose_subsets<Dim>(n, i + 1, current, visit);
    current.pop_back();
  }
}

}  // namespace

template <int Dim>
std::pair<Point<Dim>, double> chebyshev_center(std::span<const HalfSpace<Dim>> constraints) {
  // Unknowns (x, r): n_i . x + r <= b_i, maximise r. Optimal vertices have
  // Dim + 1 active constraints.
  const int m = static_cast<int>(constraints.size());
  Point<Dim> best_x = Point<Dim>::Zero();
  double best_r = -1.0;
  double scale = 0.0;
  for (const auto& c : constraints) scale = std::max(scale, std::abs(c.offset));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  std::vector<int> current;
  choose_subsets<Dim>(m, 0, current, [&](const std::vector<int>& idx) {
    Eigen::Matrix<double, Dim + 1, Dim + 1> A;
    Eigen::Matrix<double, Dim + 1, 1> b;
    for (int r = 0; r <= Dim; ++r) {
      A.row(r).template head<Dim>() = constraints[idx[r]].normal.transpose();
      A(r, Dim) = 1.0;
      b[r] = constraints[idx[r]].offset;
    }
    const auto lu = A.fullPivLu();
    if (!lu.isInvertible() || std::abs(A.determinant()) < 1e-12) return;
    const Eigen::Matrix<double, Dim + 1, 1> sol = lu.solve(b);
    const Point<Dim> x = sol.template head<Dim>();
    const double r = sol[Dim];
    if (!(r > best_r)) return;
    for (const auto& c : constraints)
      if (c.normal.dot(x) + r > c.offset + tol) return;
    best_r = r;
    best_x = x;
  });
  return {best_x, best_r};
}

template std::pair<Point<2>, double> chebyshev_center<2>(std::span<const HalfSpace<2>>);
template std::pair<Point<3>, double> chebyshev_center<3>(std::span<const HalfSpace<3>>);

double CellGeometry2::tau() const {
  const auto [mn, mx] = std::minmax_element(edge_lengths.begin(), edge_lengths.end());
  return *mx / *mn;
}

CellGeometry2 polygon_geometry(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  CellGeometry2 g;
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    const double w = cross2(p, q);
    a2 += w;
    c += w * (p + q);
    const double len = (q - p).norm();
    g.edge_lengths.push_back(len);
    g.perimeter += len;
    for (std::size_t j = i + 1; j < n; ++j) g.diameter = std::max(g.diameter, (polygon[j] - p).norm());
  }
  g.area = 0.5 * a2;
  g.centroid = c / (3.0 * a2);

  // Kernel: intersection of the left half-planes of all edges.
  std::vector<HalfSpace<2>> hs;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2 d = polygon[(i + 1) % n] - p;
    const Vec2 outward = Vec2(d.y(), -d.x()) / d.norm();
    hs.push_back({outward, outward.dot(p)});
  }
  const auto [center, radius] = chebyshev_center<2>(hs);
  if (!(radius > 1e-14 * g.diameter))
    throw KernelEmpty("polygon is not star-shaped with respect to any disc");
  g.kernel_center = center;
  g.kernel_radius = radius;
  double min_dist = INFINITY;
  for (const auto& h : hs) min_dist = std::min(min_dist, h.offset - h.normal.dot(g.centroid));
  g.star_center = (min_dist > 1e-12 * g.diameter) ? g.centroid : center;
  return g;
}

CellGeometry2 cell_geometry(const PolygonalMesh2& mesh, int cell) {
  if (cell < 0 || cell >= mesh.num_cells()) throw InvalidArgument("cell_geometry: invalid cell id");
  const auto poly = mesh.cell_polygon(cell);
  return polygon_geometry(poly);
}

FaceFrame face_frame(std::span<const Vec3> loop) {
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < loop.size(); ++i) n += loop[i].cross(loop[(i + 1) % loop.size()]);
  FaceFrame f;
  f.normal = n.normalized();
  f.axis1 = (loop[1] - loop[0]).normalized();
  f.axis2 = f.normal.cross(f.axis1);
  // Area centroid of the fan from the vertex mean.
  Vec3 mean = Vec3::Zero();
  for (const auto& p : loop) mean += p;
  mean /= static_cast<double>(loop.size());
  Vec3 c = Vec3::Zero();
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& p = loop[i];
    const Vec3& q = loop[(i + 1) % loop.size()];
    const double w = (p - mean).cross(q - mean).dot(f.normal);
    a += w;
    c += w * (mean + p + q) / 3.0;
  }
  f.origin = c / a;
  return f;
}

FaceGeometry face_geometry(std::span<const Vec3> loop) {
  FaceGeometry g;
  g.frame = face_frame(loop);
  for (const auto& p : loop) g.local_polygon.push_back(g.frame.to_local(p));
  g.planar = polygon_geometry(g.local_polygon);
  return g;
}

FaceGeometry face_geometry(const PolyhedralMesh3& mesh, int face) {
  std::vector<Vec3> loop;
  for (int v : mesh.face(face)) loop.push_back(mesh.vertices()[v]);
  return face_geometry(loop);
}

CellGeometry3 polyhedron_geometry(std::span<const Vec3> vertices, const std::vector<std::vector<int>>& faces,
                                  std::span<const int> signs) {
  CellGeometry3 g;
  std::vector<char> used(vertices.size(), 0);
  for (const auto& f : faces)
    for (int v : f) used[v] = 1;
  std::vector<int> vids;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (used[v]) vids.push_back(static_cast<int>(v));
  for (std::size_t i = 0; i < vids.size(); ++i)
    for (std::size_t j = i + 1; j < vids.size(); ++j)
      g.diameter = std::max(g.diameter, (vertices[vids[i]] - vertices[vids[j]]).norm());

  Vec3 ref = Vec3::Zero();
  for (int v : vids) ref += vertices[v];
  ref /= static_cast<double>(vids.size());

  std::vector<HalfSpace<3>> hs;
  Vec3 moment = Vec3::Zero();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& loop = faces[fi];
    std::vector<Vec3> pts;
    for (int v : loop) pts.push_back(vertices[v]);
    const FaceGeometry fg = face_geometry(pts);
    g.face_areas.push_back(fg.area());
    g.face_diameters.push_back(fg.diameter());
    g.surface_area += fg.area();
    const Vec3 outward = signs[fi] * fg.frame.normal;
    const Vec3 fc = fg.centroid();
    hs.push_back({outward, outward.dot(fc)});
    // Tetrahedral fan (ref, face centroid, edge) gives volume and first moments.
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec3& a = pts[i];
      const Vec3& b = pts[(i + 1) % pts.size()];
      const double vol = signs[fi] * (a - fc).cross(b - fc).dot(fc - ref) / 6.0;
      g.volume += vol;
      moment += vol * (ref + fc + a + b) / 4.0;
    }
  }
  g.centroid = moment / g.volume;
  const auto [center, radius] = chebyshev_center<3>(hs);
  if (!(radius > 1e-14 * g.diameter))
    throw KernelEmpty("polyhedron is not star-shaped with respect to any ball");
  g.kernel_center = center;
  g.kernel_radius = radius;
  double min_dist = INFINITY;
  for (const auto& h : hs) min_dist = std::min(min_dist, h.offset - h.normal.dot(g.centroid));
  g.star_center = (min_dist > 1e-12 * g.diameter) ? g.centroid : center;
  return g;
}

CellGeometry3 cell_geometry(const PolyhedralMesh3& mesh, int cell) {
  if (cell < 0 || cell >= mesh.num_cells()) throw InvalidArgument("cell_geometry: invalid cell id");
  std::vector<std::vector<int>> faces;
  std::vector<int> signs;
  for (const FaceRef& fr : mesh.cell(cell)) {
    faces.push_back(mesh.face(fr.face));
    signs.push_back(fr.sign);
  }
  return polyhedron_geometry(mesh.vertices(), faces, signs);
}

}  // namespace vem
