#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace vem {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); };
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

// Empty string when the loop is simple.
std::string polygon_defect(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return "fewer than 3 vertices";
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if ((b - a).norm() == 0.0) return "zero-length edge";
    // Consecutive edges must not fold back onto each other.
    const Vec2& c = poly[(i + 2) % n];
    if (cross2(b - a, c - b) == 0.0 && (b - a).dot(c - b) < 0.0) return "edge folds back";
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return "self-intersecting";
    }
  }
  if (!(signed_area(poly) > 0.0)) return "not counter-clockwise";
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// PolygonalMesh2

PolygonalMesh2::PolygonalMesh2(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  std::vector<int> used(nv, 0);
  std::map<std::pair<int, int>, int> edge_ids;
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    const auto& loop = cells_[c];
    std::set<int> seen;
    for (int v : loop) {
      if (v < 0 || v >= nv)
        throw InvalidMesh("cell " + std::to_string(c) + ": vertex index out of range");
      if (!seen.insert(v).second)
        throw InvalidMesh("cell " + std::to_string(c) + ": repeated vertex");
      used[v] = 1;
    }
    const std::string defect = polygon_defect(cell_polygon(c));
    if (!defect.empty()) throw InvalidMesh("cell " + std::to_string(c) + ": " + defect);

    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        edges_.push_back(MeshEdge{{key.first, key.second}, {c, -1}});
      } else {
        MeshEdge& e = edges_[it->second];
        if (e.cells[1] >= 0)
          throw InvalidMesh("edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") shared by more than two cells");
        // The neighbour must traverse the edge in the opposite direction.
        const auto& other = cells_[e.cells[0]];
        const auto pos = std::find(other.begin(), other.end(), a) - other.begin();
        if (other[(pos + 1) % other.size()] == b)
          throw InvalidMesh("cells " + std::to_string(e.cells[0]) + " and " + std::to_string(c) +
                            " have inconsistent orientation");
        e.cells[1] = c;
      }
      cell_edges_[c].push_back(it->second);
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw InvalidMesh("vertex " + std::to_string(v) + " is not used by any cell");

  boundary_vertex_.assign(nv, 0);
  for (const auto& e : edges_)
    if (e.boundary()) boundary_vertex_[e.vertices[0]] = boundary_vertex_[e.vertices[1]] = 1;
}

std::vector<bool> PolygonalMesh2::boundary_edge_flags() const {
  std::vector<bool> flags(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) flags[i] = edges_[i].boundary();
  return flags;
}

std::vector<Vec2> PolygonalMesh2::cell_polygon(int c) const {
  std::vector<Vec2> poly;
  poly.reserve(cells_[c].size());
  for (int v : cells_[c]) poly.push_back(vertices_[v]);
  return poly;
}

// ---------------------------------------------------------------------------
// PolyhedralMesh3

PolyhedralMesh3::PolyhedralMesh3(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces,
                                 std::vector<std::vector<FaceRef>> cells)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  std::map<std::pair<int, int>, int> edge_ids;
  face_edges_.resize(faces_.size());
  std::vector<Vec3> face_normal(faces_.size());   // area-weighted
  std::vector<Vec3> face_centroid(faces_.size());
  for (int f = 0; f < num_faces(); ++f) {
    const auto& loop = faces_[f];
    const std::string tag = "face " + std::to_string(f) + ": ";
    if (loop.size() < 3) throw InvalidMesh(tag + "fewer than 3 vertices");
    std::set<int> seen;
    for (int v : loop) {
      if (v < 0 || v >= nv) throw InvalidMesh(tag + "vertex index out of range");
      if (!seen.insert(v).second) throw InvalidMesh(tag + "repeated vertex");
    }
    // Newell normal, plane, planarity and simplicity in the face plane.
    Vec3 n = Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = vertices_[loop[i]];
      const Vec3& b = vertices_[loop[(i + 1) % loop.size()]];
      n += a.cross(b);
      mean += a;
    }
    mean /= static_cast<double>(loop.size());
    const double twice_area = n.norm();
    if (!(twice_area > 0.0)) throw InvalidMesh(tag + "zero area");
    const Vec3 unit = n / twice_area;
    double diameter = 0.0;
    for (int a : loop)
      for (int b : loop) diameter = std::max(diameter, (vertices_[a] - vertices_[b]).norm());
    for (int v : loop)
      if (std::abs(unit.dot(vertices_[v] - mean)) > 1e-12 * diameter)
        throw InvalidMesh(tag + "not planar");
    const Vec3 e1 = (vertices_[loop[1]] - vertices_[loop[0]]).normalized();
    const Vec3 e2 = unit.cross(e1);
    std::vector<Vec2> local;
    for (int v : loop) local.emplace_back((vertices_[v] - mean).dot(e1), (vertices_[v] - mean).dot(e2));
    const std::string defect = polygon_defect(local);
    if (!defect.empty()) throw InvalidMesh(tag + defect);
    face_normal[f] = 0.5 * n;
    Vec3 centroid = Vec3::Zero();
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = vertices_[loop[i]];
      const Vec3& b = vertices_[loop[(i + 1) % loop.size()]];
      const double w = (a - mean).cross(b - mean).dot(unit);
      centroid += w * (mean + a + b) / 3.0;
    }
    face_centroid[f] = centroid / twice_area;

    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, num_edges());
      if (inserted) edges_.push_back({key.first, key.second});
      face_edges_[f].push_back(it->second);
    }
  }

  face_cells_.assign(faces_.size(), {-1, -1});
  std::vector<int> face_sign(faces_.size(), 0);
  std::vector<int> vertex_used(nv, 0);
  for (int c = 0; c < num_cells(); ++c) {
    const std::string tag = "cell " + std::to_string(c) + ": ";
    if (cells_[c].size() < 4) throw InvalidMesh(tag + "fewer than 4 faces");
    std::map<std::pair<int, int>, int> half_edges;
    double volume_div = 0.0;
    for (const FaceRef& fr : cells_[c]) {
      if (fr.face < 0 || fr.face >= num_faces()) throw InvalidMesh(tag + "face index out of range");
      if (fr.sign != 1 && fr.sign != -1) throw InvalidMesh(tag + "face sign must be +1 or -1");
      auto& fc = face_cells_[fr.face];
      if (fc[0] < 0) {
        fc[0] = c;
        face_sign[fr.face] = fr.sign;
      } else if (fc[1] < 0) {
        if (face_sign[fr.face] == fr.sign)
          throw InvalidMesh(tag + "face " + std::to_string(fr.face) +
                            " has the same orientation in both adjacent cells");
        fc[1] = c;
      } else {
        throw InvalidMesh("face " + std::to_string(fr.face) + " shared by more than two cells");
      }
      const auto& loop = faces_[fr.face];
      for (std::size_t i = 0; i < loop.size(); ++i) {
        int a = loop[i];
        int b = loop[(i + 1) % loop.size()];
        vertex_used[a] = 1;
        if (fr.sign < 0) std::swap(a, b);
        if (++half_edges[{a, b}] > 1) throw InvalidMesh(tag + "faces are not consistently oriented");
      }
      volume_div += fr.sign * face_normal[fr.face].dot(face_centroid[fr.face]) / 3.0;
    }
    for (const auto& [he, count] : half_edges) {
      if (!half_edges.count({he.second, he.first}))
        throw InvalidMesh(tag + "surface is not closed");
    }
    // Second route: tetrahedral fan from the vertex mean over fanned faces.
    Vec3 ref = Vec3::Zero();
    int count = 0;
    for (const FaceRef& fr : cells_[c])
      for (int v : faces_[fr.face]) {
        ref += vertices_[v];
        ++count;
      }
    ref /= count;
    double volume_fan = 0.0;
    for (const FaceRef& fr : cells_[c]) {
      const auto& loop = faces_[fr.face];
      const Vec3& fc = face_centroid[fr.face];
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec3& a = vertices_[loop[i]];
        const Vec3& b = vertices_[loop[(i + 1) % loop.size()]];
        volume_fan += fr.sign * (a - fc).cross(b - fc).dot(fc - ref) / 6.0;
      }
    }
    if (!(volume_div > 0.0)) throw InvalidMesh(tag + "non-positive volume (faces point inward?)");
    if (std::abs(volume_div - volume_fan) > 1e-10 * volume_div)
      throw InvalidMesh(tag + "divergence and fan volumes disagree");
  }
  for (int f = 0; f < num_faces(); ++f)
    if (face_cells_[f][0] < 0) throw InvalidMesh("face " + std::to_string(f) + " belongs to no cell");
  for (int v = 0; v < nv; ++v)
    if (!vertex_used[v]) throw InvalidMesh("vertex " + std::to_string(v) + " is not used by any cell");

  boundary_edge_.assign(edges_.size(), 0);
  boundary_vertex_.assign(nv, 0);
  for (int f = 0; f < num_faces(); ++f) {
    if (!boundary_face(f)) continue;
    for (int e : face_edges_[f]) boundary_edge_[e] = 1;
    for (int v : faces_[f]) boundary_vertex_[v] = 1;
  }
}

std::vector<int> PolyhedralMesh3::cell_vertices(int c) const {
  std::set<int> vs;
  for (const FaceRef& fr : cells_[c])
    for (int v : faces_[fr.face]) vs.insert(v);
  return {vs.begin(), vs.end()};
}

std::vector<int> PolyhedralMesh3::cell_edge_ids(int c) const {
  std::set<int> es;
  for (const FaceRef& fr : cells_[c])
    for (int e : face_edges_[fr.face]) es.insert(e);
  return {es.begin(), es.end()};
}

// ---------------------------------------------------------------------------
// Families

SquareFamily SquareFamily::parse(const std::string& text) {
  SquareFamily f;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") {
    f.kind = Kind::Uniform;
  } else if (kind == "smalledge") {
    f.kind = Kind::SmallEdge;
    if (arg == "h2") {
      f.epsilon_h2 = true;
    } else {
      if (arg.empty()) throw InvalidArgument("smalledge family needs ':EPS' or ':h2'");
      f.epsilon = std::stod(arg);
    }
  } else if (kind == "hanging") {
    f.kind = Kind::Hanging;
  } else if (kind == "distorted") {
    f.kind = Kind::Distorted;
    f.seed = arg.empty() ? 0 : std::stoull(arg);
  } else {
    throw InvalidArgument("unknown square mesh family '" + text + "'");
  }
  return f;
}

std::string SquareFamily::name() const {
  switch (kind) {
    case Kind::Uniform: return "uniform";
    case Kind::SmallEdge: {
      if (epsilon_h2) return "smalledge:h2";
      std::ostringstream os;
      os << "smalledge:" << epsilon;
      return os.str();
    }
    case Kind::Hanging: return "hanging";
    case Kind::Distorted: return "distorted:" + std::to_string(seed);
  }
  return "?";
}

CubeFamily CubeFamily::parse(const std::string& text) {
  CubeFamily f;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "uniform") {
    f.kind = Kind::Uniform;
  } else if (kind == "facesplit") {
    if (colon == std::string::npos) throw InvalidArgument("facesplit family needs ':EPS'");
    f.kind = Kind::FaceSplit;
    f.epsilon = std::stod(text.substr(colon + 1));
  } else {
    throw InvalidArgument("unknown cube mesh family '" + text + "'");
  }
  return f;
}

std::string CubeFamily::name() const {
  if (kind == Kind::Uniform) return "uniform";
  std::ostringstream os;
  os << "facesplit:" << epsilon;
  return os.str();
}

namespace {

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw InvalidArgument("epsilon must lie in (0, 1/2]");
}

PolygonalMesh2 uniform_square(int n) {
  std::vector<Vec2> verts;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolygonalMesh2(std::move(verts), std::move(cells));
}

// Columns are paired (0,1), (2,3), ...; the vertical edge shared by a pair
// gets an extra vertex at relative height eps, so every cell owns exactly one
// split edge. With odd n the last column splits its right boundary edge.
PolygonalMesh2 smalledge_square(int n, double eps) {
  std::vector<Vec2> verts;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  // split_x[i][j]: extra vertex on the vertical edge x = i*h, y in [j*h, (j+1)*h].
  std::map<std::pair<int, int>, int> split;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; i += 2) {
      const int x = (i + 1 < n) ? i + 1 : n;
      split[{x, j}] = static_cast<int>(verts.size());
      verts.emplace_back(x * h, j * h + eps * h);
    }
  }
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> loop{id(i, j), id(i + 1, j)};
      if (auto it = split.find({i + 1, j}); it != split.end()) loop.push_back(it->second);
      loop.push_back(id(i + 1, j + 1));
      loop.push_back(id(i, j + 1));
      if (auto it = split.find({i, j}); it != split.end()) loop.push_back(it->second);
      cells.push_back(std::move(loop));
    }
  }
  return PolygonalMesh2(std::move(verts), std::move(cells));
}

// Columns >= n - n/2 are refined 2x2; coarse cells on the interface carry the
// hanging midpoint in their right edge.
PolygonalMesh2 hanging_square(int n) {
  const int first_fine = n - n / 2;
  const double hf = 0.5 / n;
  std::map<std::pair<int, int>, int> lattice;  // fine-lattice coordinates
  std::vector<Vec2> verts;
  auto id = [&](int I, int J) {
    auto [it, inserted] = lattice.try_emplace({I, J}, static_cast<int>(verts.size()));
    if (inserted) verts.emplace_back(I * hf, J * hf);
    return it->second;
  };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i < first_fine) {
        std::vector<int> loop{id(2 * i, 2 * j), id(2 * i + 2, 2 * j)};
        if (i + 1 == first_fine && first_fine < n) loop.push_back(id(2 * i + 2, 2 * j + 1));
        loop.push_back(id(2 * i + 2, 2 * j + 2));
        loop.push_back(id(2 * i, 2 * j + 2));
        cells.push_back(std::move(loop));
      } else {
        for (int b = 0; b < 2; ++b)
          for (int a = 0; a < 2; ++a) {
            const int I = 2 * i + a;
            const int J = 2 * j + b;
            cells.push_back({id(I, J), id(I + 1, J), id(I + 1, J + 1), id(I, J + 1)});
          }
      }
    }
  }
  return PolygonalMesh2(std::move(verts), std::move(cells));
}

PolygonalMesh2 distorted_square(int n, std::uint64_t seed) {
  PolygonalMesh2 base = uniform_square(n);
  std::vector<Vec2> verts = base.vertices();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.2 / n;
  for (int v = 0; v < base.num_vertices(); ++v) {
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * 3.14159265358979323846 * unit(rng);
    if (base.boundary_vertex(v)) continue;
    verts[v] += Vec2(r * std::cos(theta), r * std::sin(theta));
  }
  return PolygonalMesh2(std::move(verts), base.cells());
}

}  // namespace

PolygonalMesh2 generate_square_mesh(int n, const SquareFamily& family) {
  if (n < 1) throw InvalidArgument("generate_square_mesh: n must be >= 1");
  switch (family.kind) {
    case SquareFamily::Kind::Uniform: return uniform_square(n);
    case SquareFamily::Kind::SmallEdge: {
      const double eps = family.epsilon_h2 ? 1.0 / (double(n) * n) : family.epsilon;
      check_epsilon(eps);
      return smalledge_square(n, eps);
    }
    case SquareFamily::Kind::Hanging: return hanging_square(n);
    case SquareFamily::Kind::Distorted: return distorted_square(n, family.seed);
  }
  throw InvalidArgument("generate_square_mesh: unknown family");
}

// x-directed edges at lattice (j, l) with j + l even are split at relative
// position eps; every y- and z-normal face then has exactly one split edge.
PolyhedralMesh3 generate_cube_mesh(int n, const CubeFamily& family) {
  if (n < 1) throw InvalidArgument("generate_cube_mesh: n must be >= 1");
  const bool split = family.kind == CubeFamily::Kind::FaceSplit;
  if (split) check_epsilon(family.epsilon);
  const double h = 1.0 / n;
  std::vector<Vec3> verts;
  auto id = [n](int i, int j, int l) { return (l * (n + 1) + j) * (n + 1) + i; };
  for (int l = 0; l <= n; ++l)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h, l * h);
  std::map<std::array<int, 3>, int> split_vertex;  // keyed by lower lattice end of the x-edge
  if (split) {
    for (int l = 0; l <= n; ++l)
      for (int j = 0; j <= n; ++j) {
        if ((j + l) % 2 != 0) continue;
        for (int i = 0; i < n; ++i) {
          split_vertex[{i, j, l}] = static_cast<int>(verts.size());
          verts.emplace_back((i + family.epsilon) * h, j * h, l * h);
        }
      }
  }
  // Corners as lattice triples; split x-edges gain their extra vertex.
  auto make_loop = [&](const std::vector<std::array<int, 3>>& corners) {
    std::vector<int> loop;
    for (std::size_t c = 0; c < corners.size(); ++c) {
      const auto& a = corners[c];
      const auto& b = corners[(c + 1) % corners.size()];
      loop.push_back(id(a[0], a[1], a[2]));
      if (a[0] != b[0]) {
        auto it = split_vertex.find({std::min(a[0], b[0]), a[1], a[2]});
        if (it != split_vertex.end()) loop.push_back(it->second);
      }
    }
    return loop;
  };
  std::vector<std::vector<int>> faces;
  std::map<std::array<int, 4>, int> face_id;  // (axis, i, j, l)
  for (int l = 0; l <= n; ++l)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        if (j < n && l < n) {
          face_id[{0, i, j, l}] = static_cast<int>(faces.size());
          faces.push_back(make_loop({{i, j, l}, {i, j + 1, l}, {i, j + 1, l + 1}, {i, j, l + 1}}));
        }
        if (i < n && l < n) {
          face_id[{1, i, j, l}] = static_cast<int>(faces.size());
          faces.push_back(make_loop({{i, j, l}, {i, j, l + 1}, {i + 1, j, l + 1}, {i + 1, j, l}}));
        }
        if (i < n && j < n) {
          face_id[{2, i, j, l}] = static_cast<int>(faces.size());
          faces.push_back(make_loop({{i, j, l}, {i + 1, j, l}, {i + 1, j + 1, l}, {i, j + 1, l}}));
        }
      }
  std::vector<std::vector<FaceRef>> cells;
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        cells.push_back({{face_id.at({0, i, j, l}), -1},
                         {face_id.at({0, i + 1, j, l}), 1},
                         {face_id.at({1, i, j, l}), -1},
                         {face_id.at({1, i, j + 1, l}), 1},
                         {face_id.at({2, i, j, l}), -1},
                         {face_id.at({2, i, j, l + 1}), 1}});
      }
  return PolyhedralMesh3(std::move(verts), std::move(faces), std::move(cells));
}

}  // namespace vem
