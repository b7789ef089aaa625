#pragma once

#include "vem/cases.hpp"
#include "vem/system.hpp"

namespace vem {

/// Errors of the two cell-wise polynomial reconstructions of u_h.
struct ProjectedErrors {
  double nabla = 0.0;  // u - Pi^nabla u_h
  double zero = 0.0;   // u - Pi^0 u_h
};

struct EnergyError {
  double norm = 0.0;    // ||I_h u - u_h||_h
  double energy = 0.0;  // a_h(d, d) with d = I_h u - u_h
};

struct ErrorNorms {
  double energy = 0.0;
  double h1_nabla = 0.0;
  double h1_zero = 0.0;
  double l2_zero = 0.0;
  double l2_nabla = 0.0;
  double linf_edge = 0.0;
};

// All functions take u_h as a full-length global dof vector. A negative
// `degree` selects cell quadrature exact to degree 2k+6; a negative `points`
// selects 4k+1 Chebyshev points per edge.

/// Broken H^1 seminorms.
template <int Dim>
ProjectedErrors error_h1_projected(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                                   const ManufacturedCase<Dim>& c, int degree = -1);

template <int Dim>
ProjectedErrors error_l2_projected(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                                   const ManufacturedCase<Dim>& c, int degree = -1);

/// max over mesh edges of |u - u_h| sampled at Chebyshev points plus the endpoints.
template <int Dim>
double error_linf_edges(const Discretization<Dim>& disc, const Eigen::VectorXd& uh, const ManufacturedCase<Dim>& c,
                        int points = -1);

/// Discrete energy of the difference to the interpolant of u.
template <int Dim>
EnergyError energy_norm_error(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                              const ManufacturedCase<Dim>& c);

template <int Dim>
ErrorNorms error_norms(const Discretization<Dim>& disc, const Eigen::VectorXd& uh, const ManufacturedCase<Dim>& c);

}  // namespace vem
