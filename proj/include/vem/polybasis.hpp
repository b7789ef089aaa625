#pragma once

#include "vem/quadrature.hpp"
#include "vem/types.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace vem {

/// dim P_k in `dim` variables; zero for k < 0.
constexpr int poly_dim(int dim, int k) {
  if (k < 0) return 0;
  if (dim == 1) return k + 1;
  if (dim == 2) return (k + 1) * (k + 2) / 2;
  return (k + 1) * (k + 2) * (k + 3) / 6;
}

template <int Dim>
using Exponent = std::array<int, Dim>;

/// Multi-indices of total degree <= k, graded, and inside a degree
/// lexicographically descending in the leading variable: 1, x, y, x^2, xy, y^2, ...
/// The degree <= j block is always a prefix of the degree <= k list.
template <int Dim>
std::vector<Exponent<Dim>> graded_exponents(int k) {
  std::vector<Exponent<Dim>> out;
  for (int d = 0; d <= k; ++d) {
    if constexpr (Dim == 1) {
      out.push_back({d});
    } else if constexpr (Dim == 2) {
      for (int a = d; a >= 0; --a) out.push_back({a, d - a});
    } else {
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
    }
  }
  return out;
}

template <int Dim>
int exponent_index(const Exponent<Dim>& e) {
  int d = 0;
  for (int v : e) d += v;
  const int before = poly_dim(Dim, d - 1);
  if constexpr (Dim == 1) {
    return before;
  } else if constexpr (Dim == 2) {
    return before + (d - e[0]);
  } else {
    // Within degree d, blocks for a = d, d-1, ..., each of size d-a+1.
    const int a = e[0];
    int offset = 0;
    for (int aa = d; aa > a; --aa) offset += d - aa + 1;
    return before + offset + (d - a - e[1]);
  }
}

/// m_alpha(x) = ((x - center) / scale)^alpha for |alpha| <= degree.
template <int Dim>
class ScaledMonomials {
 public:
  using PointT = Point<Dim>;

  ScaledMonomials() = default;
  ScaledMonomials(const PointT& center, double scale, int degree)
      : center_(center), scale_(scale), degree_(degree), exps_(graded_exponents<Dim>(degree)) {
    if (degree < 0) throw InvalidArgument("ScaledMonomials: negative degree");
    if (!(scale > 0.0)) throw InvalidArgument("ScaledMonomials: scale must be positive");
  }

  const PointT& center() const { return center_; }
  double scale() const { return scale_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::vector<Exponent<Dim>>& exponents() const { return exps_; }

  /// Number of monomials of degree <= j (a prefix of the basis).
  static int size_for(int j) { return poly_dim(Dim, j); }

  PointT local(const PointT& x) const { return (x - center_) / scale_; }

  Eigen::VectorXd values(const PointT& x) const {
    const PointT y = local(x);
    const auto powers = power_table(y);
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i) {
      double p = 1.0;
      for (int d = 0; d < Dim; ++d) p *= powers[d][exps_[i][d]];
      v[i] = p;
    }
    return v;
  }

  /// Column i holds the gradient of m_i.
  Eigen::Matrix<double, Dim, Eigen::Dynamic> gradients(const PointT& x) const {
    const PointT y = local(x);
    const auto powers = power_table(y);
    Eigen::Matrix<double, Dim, Eigen::Dynamic> g(Dim, size());
    for (int i = 0; i < size(); ++i) {
      for (int c = 0; c < Dim; ++c) {
        const int ec = exps_[i][c];
        if (ec == 0) {
          g(c, i) = 0.0;
          continue;
        }
        double p = ec / scale_;
        for (int d = 0; d < Dim; ++d) p *= (d == c) ? powers[d][ec - 1] : powers[d][exps_[i][d]];
        g(c, i) = p;
      }
    }
    return g;
  }

  /// Matrix of d/dx_c: column alpha holds the coefficients of d m_alpha / dx_c
  /// in the degree-(k-1) prefix.
  Eigen::MatrixXd derivative_matrix(int c) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_for(degree_ - 1), size());
    for (int i = 0; i < size(); ++i) {
      if (exps_[i][c] == 0) continue;
      Exponent<Dim> e = exps_[i];
      e[c] -= 1;
      m(exponent_index<Dim>(e), i) = exps_[i][c] / scale_;
    }
    return m;
  }

  /// Column alpha holds the coefficients of Laplacian(m_alpha) in the
  /// degree-(k-2) prefix.
  Eigen::MatrixXd laplacian_matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_for(degree_ - 2), size());
    const double h2 = scale_ * scale_;
    for (int i = 0; i < size(); ++i) {
      for (int c = 0; c < Dim; ++c) {
        const int ec = exps_[i][c];
        if (ec < 2) continue;
        Exponent<Dim> e = exps_[i];
        e[c] -= 2;
        m(exponent_index<Dim>(e), i) += ec * (ec - 1) / h2;
      }
    }
    return m;
  }

  /// Evaluate a polynomial given by coefficients in this basis (prefix allowed).
  double evaluate(const Eigen::VectorXd& coeffs, const PointT& x) const {
    const Eigen::VectorXd v = values(x);
    return v.head(coeffs.size()).dot(coeffs);
  }

 private:
  std::array<std::vector<double>, Dim> power_table(const PointT& y) const {
    std::array<std::vector<double>, Dim> pw;
    for (int d = 0; d < Dim; ++d) {
      pw[d].resize(degree_ + 1);
      pw[d][0] = 1.0;
      for (int j = 1; j <= degree_; ++j) pw[d][j] = pw[d][j - 1] * y[d];
    }
    return pw;
  }

  PointT center_ = PointT::Zero();
  double scale_ = 1.0;
  int degree_ = 0;
  std::vector<Exponent<Dim>> exps_;
};

/// H_{ab} = \int m_a m_b over the region the rule covers.
template <int Dim>
Eigen::MatrixXd mass_matrix(const ScaledMonomials<Dim>& basis, const QuadratureRule<Dim>& rule) {
  const int n = basis.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = basis.values(rule.points[q]);
    h.noalias() += rule.weights[q] * v * v.transpose();
  }
  return 0.5 * (h + h.transpose());
}

/// G_{ab} = \int grad m_a . grad m_b.
template <int Dim>
Eigen::MatrixXd stiffness_matrix(const ScaledMonomials<Dim>& basis,
                                 const QuadratureRule<Dim>& rule) {
  const int n = basis.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto grads = basis.gradients(rule.points[q]);
    g.noalias() += rule.weights[q] * grads.transpose() * grads;
  }
  return 0.5 * (g + g.transpose());
}

/// Trace of the basis along the affine map x = origin + A y, y in R^TDim.
/// Returns T with m_alpha(origin + A y) = sum_beta T(beta, alpha) y^beta,
/// where y^beta are plain monomials of degree <= basis.degree() in graded order.
template <int Dim, int TDim>
Eigen::MatrixXd affine_trace(const ScaledMonomials<Dim>& basis, const Point<Dim>& origin,
                             const Eigen::Matrix<double, Dim, TDim>& A) {
  const int k = basis.degree();
  const int nt = poly_dim(TDim, k);
  const auto texps = graded_exponents<TDim>(k);
  // Local scaled coordinate c: p_c + sum_j q_cj y_j.
  const Point<Dim> p = basis.local(origin);
  const Eigen::Matrix<double, Dim, TDim> qm = A / basis.scale();

  // powers[c][e] = coefficients of (p_c + q_c . y)^e.
  std::vector<std::vector<Eigen::VectorXd>> powers(Dim);
  for (int c = 0; c < Dim; ++c) {
    powers[c].resize(k + 1);
    powers[c][0] = Eigen::VectorXd::Zero(nt);
    powers[c][0][0] = 1.0;
    for (int e = 1; e <= k; ++e) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(nt);
      const Eigen::VectorXd& prev = powers[c][e - 1];
      for (int i = 0; i < nt; ++i) {
        if (prev[i] == 0.0) continue;
        next[i] += p[c] * prev[i];
        for (int j = 0; j < TDim; ++j) {
          Exponent<TDim> ex = texps[i];
          ex[j] += 1;
          int deg = 0;
          for (int v : ex) deg += v;
          if (deg > k) continue;
          next[exponent_index<TDim>(ex)] += qm(c, j) * prev[i];
        }
      }
      powers[c][e] = next;
    }
  }

  auto multiply = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nt);
    for (int i = 0; i < nt; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < nt; ++j) {
        if (b[j] == 0.0) continue;
        Exponent<TDim> ex;
        int deg = 0;
        for (int d = 0; d < TDim; ++d) {
          ex[d] = texps[i][d] + texps[j][d];
          deg += ex[d];
        }
        if (deg > k) continue;
        r[exponent_index<TDim>(ex)] += a[i] * b[j];
      }
    }
    return r;
  };

  Eigen::MatrixXd T(nt, basis.size());
  for (int a = 0; a < basis.size(); ++a) {
    const auto& e = basis.exponents()[a];
    Eigen::VectorXd acc = powers[0][e[0]];
    for (int c = 1; c < Dim; ++c) acc = multiply(acc, powers[c][e[c]]);
    T.col(a) = acc;
  }
  return T;
}

/// Edge trace: m_alpha(a + t (b - a)) as a polynomial in t on [0, 1].
template <int Dim>
Eigen::MatrixXd edge_trace(const ScaledMonomials<Dim>& basis, const Point<Dim>& a,
                           const Point<Dim>& b) {
  Eigen::Matrix<double, Dim, 1> dir = b - a;
  return affine_trace<Dim, 1>(basis, a, dir);
}

/// Coefficients of n . grad m_alpha, as polynomials in t on the edge [a, b].
/// Column alpha is the trace; rows are powers t^0..t^k (degree <= k-1 used).
template <int Dim>
Eigen::MatrixXd normal_derivative_trace(const ScaledMonomials<Dim>& basis, const Point<Dim>& a,
                                        const Point<Dim>& b, const Point<Dim>& normal) {
  Eigen::MatrixXd nd = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int c = 0; c < Dim; ++c) {
    const Eigen::MatrixXd dc = basis.derivative_matrix(c);
    nd.topRows(dc.rows()) += normal[c] * dc;
  }
  return edge_trace(basis, a, b) * nd;
}

/// Lagrange basis on a fixed node set in [0, 1].
class Lagrange1D {
 public:
  Lagrange1D() = default;
  explicit Lagrange1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {}

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }

  double value(int a, double t) const {
    double v = 1.0;
    for (int b = 0; b < size(); ++b)
      if (b != a) v *= (t - nodes_[b]) / (nodes_[a] - nodes_[b]);
    return v;
  }

  double derivative(int a, double t) const {
    double s = 0.0;
    for (int c = 0; c < size(); ++c) {
      if (c == a) continue;
      double v = 1.0 / (nodes_[a] - nodes_[c]);
      for (int b = 0; b < size(); ++b)
        if (b != a && b != c) v *= (t - nodes_[b]) / (nodes_[a] - nodes_[b]);
      s += v;
    }
    return s;
  }

 private:
  std::vector<double> nodes_;
};

/// Gram-Schmidt (Cholesky form) of the basis with respect to a Gram matrix H:
/// Q is lower triangular with Q H Q^T = I, so the rows of Q give
/// orthonormal combinations of the original basis.
struct Orthonormalization {
  Eigen::MatrixXd Q;
  double condition_before = 0.0;  // cond_2(H)
  double condition_after = 0.0;   // cond_2(Q H Q^T)
};

Orthonormalization orthonormalize(const Eigen::MatrixXd& gram);

/// Solves G X = B with row and column equilibration. Throws SingularG when the
/// equilibrated matrix has reciprocal condition number below 1e-14.
Eigen::MatrixXd solve_equilibrated(const Eigen::MatrixXd& G, const Eigen::MatrixXd& B,
                                   const std::string& who);

double condition_number(const Eigen::MatrixXd& spd);

}  // namespace vem
