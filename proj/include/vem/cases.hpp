#pragma once

#include "vem/types.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace vem {

/// Closed-form solution of -Laplace u = f on the unit square or cube.
template <int Dim>
struct ManufacturedCase {
  using PointT = Point<Dim>;

  std::string name;
  std::function<double(const PointT&)> u;
  std::function<PointT(const PointT&)> grad;
  std::function<double(const PointT&)> f;
  double smoothness = 0.0;   // u in H^s for all s below this (infinity when smooth)
  bool homogeneous = true;   // u = 0 on the boundary; otherwise solved with boundary lifting
  bool rate_case = true;     // included in rate assertions
};

using Case2 = ManufacturedCase<2>;
using Case3 = ManufacturedCase<3>;

/// "sine", "corner" (2D only), "poly" or "poly:SEED" (random polynomial of
/// degree k, non-zero on the boundary).
template <int Dim>
ManufacturedCase<Dim> make_case(const std::string& name, int k);

/// Random polynomial of total degree k with coefficients in [-1, 1].
template <int Dim>
ManufacturedCase<Dim> polynomial_case(int k, std::uint64_t seed);

/// Largest finite-difference mismatch of f + Laplace u and of grad u at `points`
/// random points of [0.2, 0.8]^Dim, relative to max(1, |f|) and max(1, |grad u|).
template <int Dim>
double finite_difference_residual(const ManufacturedCase<Dim>& c, int points = 100, std::uint64_t seed = 5);

}  // namespace vem
