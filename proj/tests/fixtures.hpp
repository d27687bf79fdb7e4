#pragma once

#include <random>
#include <string>
#include <vector>

#include "ccopt/ccopt.hpp"

namespace fixtures {

using ccopt::CompositeProblem;
using ccopt::ConvexOuter;
using ccopt::ConvexRegularizer;
using ccopt::Matrix;
using ccopt::SmoothMap;
using ccopt::Vector;
using ccopt::detail::vec;

/// One-dimensional problem h(c(x)) + g(x) from scalar callbacks.
template <typename C, typename DC>
CompositeProblem scalar_problem(C c, DC dc, ConvexOuter h, ConvexRegularizer g = ConvexRegularizer::zero()) {
  SmoothMap map(
      1, 1, [c](const Vector& x) { return Vector::Constant(1, c(x[0])); },
      [dc](const Vector& x) { return Matrix::Constant(1, 1, dc(x[0])); });
  return CompositeProblem(std::move(map), std::move(h), std::move(g), "scalar");
}

/// f(x) = x^2 / 2 + g(x).
inline CompositeProblem half_square(ConvexRegularizer g = ConvexRegularizer::zero()) {
  return scalar_problem([](double x) { return 0.5 * x * x; }, [](double x) { return x; }, ConvexOuter::identity(),
                        std::move(g));
}

/// f(x) = x.
inline CompositeProblem linear() {
  return scalar_problem([](double x) { return x; }, [](double) { return 1.0; }, ConvexOuter::identity());
}

inline Vector one(double v) { return Vector::Constant(1, v); }

enum class OuterKind { L1, L2, LInf, Max, Identity };
enum class RegKind { Zero, WeightedL1, Box, Ball };

inline const char* name(OuterKind k) {
  switch (k) {
    case OuterKind::L1: return "l1";
    case OuterKind::L2: return "l2";
    case OuterKind::LInf: return "linf";
    case OuterKind::Max: return "max";
    case OuterKind::Identity: return "identity";
  }
  return "?";
}

inline const char* name(RegKind k) {
  switch (k) {
    case RegKind::Zero: return "zero";
    case RegKind::WeightedL1: return "weighted_l1";
    case RegKind::Box: return "box";
    case RegKind::Ball: return "ball";
  }
  return "?";
}

/// A random instance with its base point x inside dom g.
struct Instance {
  CompositeProblem problem;
  Vector x;
  std::string label;
};

/// c(x) = A x + b + s * sin(B x), a genuinely nonlinear smooth map.
inline SmoothMap random_map(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(m, n), b(m, n);
  Vector off(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    off[i] = gauss(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = gauss(rng);
      b(i, j) = gauss(rng);
    }
  }
  const double s = 0.3;
  return SmoothMap(
      n, m, [a, b, off, s](const Vector& x) -> Vector { return a * x + off + s * (b * x).array().sin().matrix(); },
      [a, b, s](const Vector& x) -> Matrix { return a + s * (b * x).array().cos().matrix().asDiagonal() * b; });
}

inline ConvexOuter make_outer(OuterKind k, double scale) {
  switch (k) {
    case OuterKind::L1: return ConvexOuter::l1(scale);
    case OuterKind::L2: return ConvexOuter::l2(scale);
    case OuterKind::LInf: return ConvexOuter::linf(scale);
    case OuterKind::Max: return ConvexOuter::max_coordinate(scale);
    case OuterKind::Identity: return ConvexOuter::identity(scale);
  }
  return ConvexOuter::l1(scale);
}

/// Random regularizer whose domain contains x.
inline ConvexRegularizer make_reg(RegKind k, std::mt19937_64& rng, const Vector& x) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const auto n = x.size();
  switch (k) {
    case RegKind::Zero: return ConvexRegularizer::zero();
    case RegKind::WeightedL1: {
      Vector w(n);
      for (auto& wi : w) wi = u(rng);
      return ConvexRegularizer::weighted_l1(w);
    }
    case RegKind::Box: {
      Vector lo(n), hi(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        lo[i] = x[i] - u(rng);
        hi[i] = x[i] + u(rng);
      }
      return ConvexRegularizer::box(lo, hi);
    }
    case RegKind::Ball: {
      Vector center = x;
      for (auto& ci : center) ci += 0.3 * (u(rng) - 0.55);
      const double radius = (x - center).norm() + u(rng);
      return ConvexRegularizer::ball(center, radius, ccopt::NormKind::L2);
    }
  }
  return ConvexRegularizer::zero();
}

inline Instance random_instance(std::mt19937_64& rng, Eigen::Index n, OuterKind hk, RegKind gk) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const Eigen::Index m = hk == OuterKind::Identity ? 1 : 2 + static_cast<Eigen::Index>(rng() % 2);
  Vector x(n);
  for (auto& xi : x) xi = gauss(rng);
  SmoothMap c = random_map(rng, n, m);
  ConvexRegularizer g = make_reg(gk, rng, x);
  std::string label = std::string(name(hk)) + "/" + name(gk);
  return {CompositeProblem(std::move(c), make_outer(hk, u(rng)), std::move(g), label), x, label};
}

inline const std::vector<OuterKind>& all_outer() {
  static const std::vector<OuterKind> v{OuterKind::L1, OuterKind::L2, OuterKind::LInf, OuterKind::Max,
                                        OuterKind::Identity};
  return v;
}

inline const std::vector<RegKind>& all_reg() {
  static const std::vector<RegKind> v{RegKind::Zero, RegKind::WeightedL1, RegKind::Box, RegKind::Ball};
  return v;
}

/// Direction of random length; about a quarter of the draws leave dom g for
/// the indicator kinds.
inline Vector random_direction(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> len(0.01, 2.0);
  Vector d(n);
  for (auto& di : d) di = gauss(rng);
  return len(rng) * d.normalized();
}

/// Lipschitz constant of d -> Delta f(x; d) in the l2 norm, for the catalog
/// kinds of h and g (indicators contribute nothing on their domain).
inline double delta_f_lipschitz(const ccopt::ModelState& model) {
  const auto& h = model.problem().h();
  const auto& g = model.problem().g();
  const double m = static_cast<double>(model.cx().size());
  double lh = h.scale();
  if (h.kind() == ConvexOuter::Kind::L1) lh *= std::sqrt(m);
  double lg = 0.0;
  if (g.kind() == ConvexRegularizer::Kind::WeightedL1) lg = g.weights().norm();
  return lh * ccopt::detail::spectral_norm(model.jacobian()) * 1.01 + lg;
}

/// Distance from any point of the trust region to the nearest grid node of an
/// N-per-axis grid, times the Lipschitz constant: an a-priori bound on how far
/// the grid minimum can sit above the true minimum.
inline double grid_error(const ccopt::SubproblemSpec& spec, int grid_per_axis) {
  const double r = ccopt::effective_radius(spec.radius, spec.model.x());
  const double cell = 2.0 * r / (grid_per_axis - 1);
  const double n = static_cast<double>(spec.model.dim());
  return delta_f_lipschitz(spec.model) * cell * std::sqrt(n);
}

}  // namespace fixtures
