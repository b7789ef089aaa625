#include "vem/polybasis.hpp"

#include <Eigen/Eigenvalues>

namespace vem {

double condition_number(const Eigen::MatrixXd& spd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spd, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

Orthonormalization orthonormalize(const Eigen::MatrixXd& gram) {
  const int n = static_cast<int>(gram.rows());
  Orthonormalization out;
  out.condition_before = condition_number(gram);
  // Modified Gram-Schmidt in the H inner product; row i of Q holds the
  // coefficients of the i-th orthonormal polynomial.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double proj = Q.row(i).dot(gram * Q.row(j).transpose());
      Q.row(i) -= proj * Q.row(j);
    }
    const double nrm2 = Q.row(i).dot(gram * Q.row(i).transpose());
    if (!(nrm2 > 0.0)) throw NotSPD("orthonormalize: Gram matrix is not positive definite");
    Q.row(i) /= std::sqrt(nrm2);
  }
  out.Q = Q;
  out.condition_after = condition_number(Q * gram * Q.transpose());
  return out;
}

Eigen::MatrixXd solve_equilibrated(const Eigen::MatrixXd& G, const Eigen::MatrixXd& B,
                                   const std::string& who) {
  const Eigen::VectorXd r = G.cwiseAbs().rowwise().maxCoeff().cwiseInverse();
  const Eigen::MatrixXd Gr = r.asDiagonal() * G;
  const Eigen::VectorXd c = Gr.cwiseAbs().colwise().maxCoeff().transpose().cwiseInverse();
  if (!r.allFinite() || !c.allFinite()) throw SingularG(who + ": constrained energy matrix is singular");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(Gr * c.asDiagonal());
  if (lu.rcond() < 1e-14) throw SingularG(who + ": constrained energy matrix is singular");
  return c.asDiagonal() * lu.solve(r.asDiagonal() * B);
}

}  // namespace vem
