#include "vem/system.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <memory>

namespace vem {

namespace {

template <class F>
auto with_cell(int c, F&& f) -> decltype(f()) {
  const std::string where = "cell " + std::to_string(c) + ": ";
  try {
    return f();
  } catch (const KernelEmpty& e) {
    throw KernelEmpty(where + e.what());
  } catch (const SingularG& e) {
    throw SingularG(where + e.what());
  } catch (const NotSPD& e) {
    throw NotSPD(where + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + e.what());
  }
}

}  // namespace

GlobalDofMap::GlobalDofMap(const PolygonalMesh2& mesh, int k) {
  if (k < 1) throw InvalidArgument("GlobalDofMap: order must be >= 1");
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nm = poly_dim(2, k - 2);
  const int edge_base = nv;
  const int cell_base = edge_base + ne * (k - 1);
  boundary_.assign(cell_base + mesh.num_cells() * nm, 0);
  for (int v = 0; v < nv; ++v) boundary_[v] = mesh.boundary_vertex(v);
  for (int e = 0; e < ne; ++e)
    for (int j = 0; j + 1 < k; ++j) boundary_[edge_base + e * (k - 1) + j] = mesh.edges()[e].boundary();

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& loop = mesh.cell(c);
    const auto& ce = mesh.cell_edges(c);
    const int n = static_cast<int>(loop.size());
    const DofLayout2 layout(n, k);
    std::vector<int> map(layout.size());
    for (int j = 0; j < n; ++j) {
      map[layout.vertex_dof(j)] = loop[j];
      const bool forward = loop[j] < loop[(j + 1) % n];
      for (int t = 0; t + 1 < k; ++t)
        map[layout.edge_dof(j, t)] = edge_base + ce[j] * (k - 1) + (forward ? t : k - 2 - t);
    }
    for (int a = 0; a < nm; ++a) map[layout.moment_dof(a)] = cell_base + c * nm + a;
    cell_dofs_.push_back(std::move(map));
  }
  finish();
}

GlobalDofMap::GlobalDofMap(const PolyhedralMesh3& mesh, int k) {
  if (k < 1) throw InvalidArgument("GlobalDofMap: order must be >= 1");
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nf = mesh.num_faces();
  const int sf = poly_dim(2, k - 2);
  const int nm = poly_dim(3, k - 2);
  const int edge_base = nv;
  const int face_base = edge_base + ne * (k - 1);
  const int cell_base = face_base + nf * sf;
  boundary_.assign(cell_base + mesh.num_cells() * nm, 0);
  for (int v = 0; v < nv; ++v) boundary_[v] = mesh.boundary_vertex(v);
  for (int e = 0; e < ne; ++e)
    for (int j = 0; j + 1 < k; ++j) boundary_[edge_base + e * (k - 1) + j] = mesh.boundary_edge(e);
  for (int f = 0; f < nf; ++f)
    for (int a = 0; a < sf; ++a) boundary_[face_base + f * sf + a] = mesh.boundary_face(f);

  std::map<std::array<int, 2>, int> edge_id;
  for (int e = 0; e < ne; ++e) edge_id[mesh.edges()[e]] = e;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto vids = mesh.cell_vertices(c);
    const auto eids = mesh.cell_edge_ids(c);
    // Same local numbering as Element3: vertices by global id, edges sorted by vertex pair.
    std::vector<std::array<int, 2>> pairs;
    for (int e : eids) pairs.push_back(mesh.edges()[e]);
    std::sort(pairs.begin(), pairs.end());
    const int nfc = static_cast<int>(mesh.cell(c).size());
    const DofLayout3 layout(static_cast<int>(vids.size()), static_cast<int>(pairs.size()), nfc, k);
    std::vector<int> map(layout.size());
    for (std::size_t v = 0; v < vids.size(); ++v) map[layout.vertex_dof(static_cast<int>(v))] = vids[v];
    for (std::size_t e = 0; e < pairs.size(); ++e)
      for (int t = 0; t + 1 < k; ++t)
        map[layout.edge_dof(static_cast<int>(e), t)] = edge_base + edge_id.at(pairs[e]) * (k - 1) + t;
    for (int f = 0; f < nfc; ++f)
      for (int a = 0; a < sf; ++a) map[layout.face_dof(f, a)] = face_base + mesh.cell(c)[f].face * sf + a;
    for (int a = 0; a < nm; ++a) map[layout.moment_dof(a)] = cell_base + c * nm + a;
    cell_dofs_.push_back(std::move(map));
  }
  finish();
}

void GlobalDofMap::finish() {
  free_index_.assign(boundary_.size(), -1);
  for (std::size_t g = 0; g < boundary_.size(); ++g)
    if (!boundary_[g]) {
      free_index_[g] = static_cast<int>(free_.size());
      free_.push_back(static_cast<int>(g));
    }
}

template <int Dim>
Discretization<Dim>::Discretization(const Mesh& mesh, int k, Stabilization stab, ElementOptions options)
    : mesh_(&mesh), k_(k), stab_(stab), dofs_(mesh, k) {
  elements_.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    with_cell(c, [&] {
      if constexpr (Dim == 2)
        elements_.emplace_back(mesh.cell_polygon(c), k, options);
      else
        elements_.emplace_back(mesh_polyhedron(mesh, c), k, options);
      stiffness_.push_back(elements_.back().local_stiffness(stab));
      if (kernel_dimension(stiffness_.back()) != 1)
        throw NotSPD("local stiffness kernel is not exactly the constants");
      return 0;
    });
  }
}

template <int Dim>
GlobalSystem Discretization<Dim>::assemble(const Field& f, const Eigen::VectorXd* lifting) const {
  const int nf = dofs_.num_free();
  GlobalSystem sys;
  sys.b = Eigen::VectorXd::Zero(nf);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < static_cast<int>(elements_.size()); ++c) {
    const auto& map = dofs_.cell_dofs(c);
    const Eigen::MatrixXd& K = stiffness_[c];
    const Eigen::VectorXd F = elements_[c].local_load(f);
    const int n = static_cast<int>(map.size());
    for (int i = 0; i < n; ++i) {
      const int gi = dofs_.free_index(map[i]);
      if (gi < 0) continue;
      sys.b[gi] += F[i];
      for (int j = 0; j < n; ++j) {
        const int gj = dofs_.free_index(map[j]);
        if (gj >= 0)
          triplets.emplace_back(gi, gj, K(i, j));
        else if (lifting)
          sys.b[gi] -= K(i, j) * (*lifting)[map[j]];
      }
    }
  }
  sys.A.resize(nf, nf);
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

template <int Dim>
Eigen::SparseMatrix<double> Discretization<Dim>::assemble_full() const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < static_cast<int>(elements_.size()); ++c) {
    const auto& map = dofs_.cell_dofs(c);
    for (std::size_t i = 0; i < map.size(); ++i)
      for (std::size_t j = 0; j < map.size(); ++j) triplets.emplace_back(map[i], map[j], stiffness_[c](i, j));
  }
  Eigen::SparseMatrix<double> A(dofs_.size(), dofs_.size());
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

template <int Dim>
Eigen::VectorXd Discretization<Dim>::interpolate(const Field& zeta) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dofs_.size());
  for (int c = 0; c < static_cast<int>(elements_.size()); ++c) {
    const Eigen::VectorXd local = elements_[c].interpolate(zeta);
    const auto& map = dofs_.cell_dofs(c);
    for (std::size_t i = 0; i < map.size(); ++i) v[map[i]] = local[i];
  }
  return v;
}

template <int Dim>
Eigen::VectorXd Discretization<Dim>::expand(const Eigen::VectorXd& free_values, const Eigen::VectorXd* lifting) const {
  Eigen::VectorXd v = lifting ? *lifting : Eigen::VectorXd::Zero(dofs_.size());
  for (int i = 0; i < dofs_.num_free(); ++i) v[dofs_.free_dofs()[i]] = free_values[i];
  return v;
}

template <int Dim>
Eigen::VectorXd Discretization<Dim>::cell_values(const Eigen::VectorXd& global, int c) const {
  const auto& map = dofs_.cell_dofs(c);
  Eigen::VectorXd v(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) v[i] = global[map[i]];
  return v;
}

template class Discretization<2>;
template class Discretization<3>;

SolveResult solve(const GlobalSystem& system, const SolveOptions& options) {
  SolveResult r;
  const int n = static_cast<int>(system.b.size());
  r.x = Eigen::VectorXd::Zero(n);
  if (n <= options.direct_limit) {
    r.solver = "cholesky";
    if (n == 0) return r;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.A);
    if (llt.info() != Eigen::Success) throw NotSPD("solve: Cholesky factorisation failed");
    r.x = llt.solve(system.b);
  } else {
    r.solver = "cg";
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(system.A);
    cg.setTolerance(options.tolerance);
    cg.setMaxIterations(std::max(1000, 10 * n));
    r.x = cg.solve(system.b);
    r.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success) throw NotConverged(r.iterations, cg.error());
  }
  const double bn = system.b.norm();
  r.residual = bn > 0.0 ? (system.b - system.A * r.x).norm() / bn : 0.0;
  return r;
}

void write_matrix_market(const std::filesystem::path& path, const Eigen::SparseMatrix<double>& A) {
  std::unique_ptr<FILE, int (*)(FILE*)> out(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  long nnz = 0;
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  std::fprintf(out.get(), "%%%%MatrixMarket matrix coordinate real symmetric\n");
  std::fprintf(out.get(), "%ld %ld %ld\n", static_cast<long>(A.rows()), static_cast<long>(A.cols()), nnz);
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
      if (it.row() >= it.col())
        std::fprintf(out.get(), "%d %d %.17g\n", static_cast<int>(it.row()) + 1, static_cast<int>(it.col()) + 1,
                     it.value());
}

}  // namespace vem
