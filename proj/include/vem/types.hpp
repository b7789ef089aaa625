#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vem {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

template <int Dim>
using Point = Eigen::Matrix<double, Dim, 1>;

using ScalarField2 = std::function<double(const Vec2&)>;
using ScalarField3 = std::function<double(const Vec3&)>;

// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidMesh : public Error {
 public:
  using Error::Error;
};

// The cell is not star-shaped with respect to any point.
class KernelEmpty : public Error {
 public:
  using Error::Error;
};

// The constrained energy Gram matrix could not be inverted.
class SingularG : public Error {
 public:
  using Error::Error;
};

class NotSPD : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(int iterations, double residual)
      : Error("iterative solver did not converge after " + std::to_string(iterations) +
              " iterations (relative residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

enum class Stabilization {
  S1,       // boundary node values
  S2,       // h_D-weighted tangential derivatives
  S2Tilde,  // h_e-weighted tangential derivatives
  Face3D,   // face moments plus face node values (3D only)
};

Stabilization parse_stabilization(std::string_view name);
std::string_view to_string(Stabilization s);

}  // namespace vem
