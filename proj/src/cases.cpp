#include "vem/cases.hpp"

#include "vem/polybasis.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string_view>

namespace vem {

namespace {

constexpr double pi = std::numbers::pi;

template <int Dim>
ManufacturedCase<Dim> sine_case() {
  using P = Point<Dim>;
  ManufacturedCase<Dim> c;
  c.name = "sine";
  c.smoothness = std::numeric_limits<double>::infinity();
  c.u = [](const P& x) {
    double v = 1.0;
    for (int d = 0; d < Dim; ++d) v *= std::sin(pi * x[d]);
    return v;
  };
  c.grad = [](const P& x) {
    P g;
    for (int d = 0; d < Dim; ++d) {
      g[d] = pi * std::cos(pi * x[d]);
      for (int e = 0; e < Dim; ++e)
        if (e != d) g[d] *= std::sin(pi * x[e]);
    }
    return g;
  };
  c.f = [u = c.u](const P& x) { return Dim * pi * pi * u(x); };
  return c;
}

// u = r^{2/3} sin(2 theta) (1 - x)(1 - y): singular gradient at the origin.
Case2 corner_case() {
  Case2 c;
  c.name = "corner";
  c.smoothness = 5.0 / 3.0;
  c.rate_case = false;
  auto g = [](const Vec2& x) { return 2.0 * x.x() * x.y() * std::pow(x.squaredNorm(), -2.0 / 3.0); };
  auto grad_g = [](const Vec2& x) {
    const double r2 = x.squaredNorm();
    const double s = 2.0 * std::pow(r2, -2.0 / 3.0);
    return Vec2(s * x.y() * (1.0 - 4.0 / 3.0 * x.x() * x.x() / r2), s * x.x() * (1.0 - 4.0 / 3.0 * x.y() * x.y() / r2));
  };
  c.u = [g](const Vec2& x) { return x.squaredNorm() == 0.0 ? 0.0 : g(x) * (1.0 - x.x()) * (1.0 - x.y()); };
  c.grad = [g, grad_g](const Vec2& x) {
    if (x.squaredNorm() == 0.0) return Vec2(0.0, 0.0);
    const double w = (1.0 - x.x()) * (1.0 - x.y());
    return Vec2(w * grad_g(x) + g(x) * Vec2(x.y() - 1.0, x.x() - 1.0));
  };
  c.f = [grad_g](const Vec2& x) {
    if (x.squaredNorm() == 0.0) return 0.0;
    const double w = (1.0 - x.x()) * (1.0 - x.y());
    const double lap_g = -32.0 / 9.0 * 2.0 * x.x() * x.y() * std::pow(x.squaredNorm(), -5.0 / 3.0);
    return -(w * lap_g + 2.0 * grad_g(x).dot(Vec2(x.y() - 1.0, x.x() - 1.0)));
  };
  return c;
}

double ipow(double x, int p) {
  double v = 1.0;
  for (int i = 0; i < p; ++i) v *= x;
  return v;
}

}  // namespace

template <int Dim>
ManufacturedCase<Dim> polynomial_case(int k, std::uint64_t seed) {
  using P = Point<Dim>;
  struct Term {
    Exponent<Dim> e;
    double c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& e : graded_exponents<Dim>(k)) terms->push_back({e, U(rng)});

  auto monomial = [](const Exponent<Dim>& e, const P& x) {
    double v = 1.0;
    for (int d = 0; d < Dim; ++d) v *= ipow(x[d], e[d]);
    return v;
  };
  ManufacturedCase<Dim> c;
  c.name = "poly:" + std::to_string(seed);
  c.smoothness = std::numeric_limits<double>::infinity();
  c.homogeneous = false;
  c.u = [terms, monomial](const P& x) {
    double v = 0.0;
    for (const auto& t : *terms) v += t.c * monomial(t.e, x);
    return v;
  };
  c.grad = [terms, monomial](const P& x) {
    P g = P::Zero();
    for (const auto& t : *terms)
      for (int d = 0; d < Dim; ++d) {
        if (t.e[d] == 0) continue;
        Exponent<Dim> e = t.e;
        --e[d];
        g[d] += t.c * t.e[d] * monomial(e, x);
      }
    return g;
  };
  c.f = [terms, monomial](const P& x) {
    double v = 0.0;
    for (const auto& t : *terms)
      for (int d = 0; d < Dim; ++d) {
        if (t.e[d] < 2) continue;
        Exponent<Dim> e = t.e;
        e[d] -= 2;
        v -= t.c * t.e[d] * (t.e[d] - 1) * monomial(e, x);
      }
    return v;
  };
  return c;
}

template <int Dim>
ManufacturedCase<Dim> make_case(const std::string& name, int k) {
  if (name == "sine") return sine_case<Dim>();
  if (name == "corner") {
    if constexpr (Dim == 2) return corner_case();
    throw InvalidArgument("case 'corner' is only defined in 2D");
  }
  if (name == "poly") return polynomial_case<Dim>(k, 1);
  if (name.starts_with("poly:")) {
    try {
      return polynomial_case<Dim>(k, std::stoull(name.substr(5)));
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad polynomial seed in case name '" + name + "'");
    }
  }
  throw InvalidArgument("unknown case '" + name + "' (expected sine, corner, poly or poly:SEED)");
}

template <int Dim>
double finite_difference_residual(const ManufacturedCase<Dim>& c, int points, std::uint64_t seed) {
  using P = Point<Dim>;
  const double h = 1e-3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.2, 0.8);
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    P x;
    for (int d = 0; d < Dim; ++d) x[d] = U(rng);
    const double u0 = c.u(x);
    double lap = 0.0;
    P grad;
    for (int d = 0; d < Dim; ++d) {
      auto at = [&](double s) {
        P y = x;
        y[d] += s * h;
        return c.u(y);
      };
      const double m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2);
      lap += (-p2 + 16.0 * p1 - 30.0 * u0 + 16.0 * m1 - m2) / (12.0 * h * h);
      grad[d] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    }
    const double f = c.f(x);
    const P g = c.grad(x);
    worst = std::max(worst, std::abs(f + lap) / std::max(1.0, std::abs(f)));
    worst = std::max(worst, (grad - g).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

template ManufacturedCase<2> make_case<2>(const std::string&, int);
template ManufacturedCase<3> make_case<3>(const std::string&, int);
template ManufacturedCase<2> polynomial_case<2>(int, std::uint64_t);
template ManufacturedCase<3> polynomial_case<3>(int, std::uint64_t);
template double finite_difference_residual<2>(const ManufacturedCase<2>&, int, std::uint64_t);
template double finite_difference_residual<3>(const ManufacturedCase<3>&, int, std::uint64_t);

}  // namespace vem
