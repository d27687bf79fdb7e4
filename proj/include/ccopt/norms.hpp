#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ccopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NormKind { L1, L2, LInf };

inline NormKind dual_norm(NormKind k) {
  switch (k) {
    case NormKind::L1: return NormKind::LInf;
    case NormKind::L2: return NormKind::L2;
    case NormKind::LInf: return NormKind::L1;
  }
  return NormKind::L2;
}

inline double norm(const Vector& v, NormKind k) {
  if (v.size() == 0) return 0.0;
  switch (k) {
    case NormKind::L1: return v.lpNorm<1>();
    case NormKind::L2: return v.norm();
    case NormKind::LInf: return v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

namespace detail {

// Euclidean projection onto {y >= 0, sum(y) = total}, sort-based.
inline Vector project_simplex(const Vector& v, double total) {
  const auto n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double shift = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += u[static_cast<std::size_t>(i)];
    const double candidate = (cumsum - total) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - candidate > 0) shift = candidate;
  }
  return (v.array() - shift).max(0.0).matrix();
}

}  // namespace detail

/// Euclidean projection onto {y : ||y - center||_k <= radius}.
inline Vector project_ball(const Vector& v, NormKind k, double radius) {
  switch (k) {
    case NormKind::LInf:
      return v.cwiseMax(-radius).cwiseMin(radius);
    case NormKind::L2: {
      const double nv = v.norm();
      if (nv <= radius) return v;
      return v * (radius / nv);
    }
    case NormKind::L1: {
      if (v.lpNorm<1>() <= radius) return v;
      if (radius <= 0) return Vector::Zero(v.size());
      const Vector mag = detail::project_simplex(v.cwiseAbs(), radius);
      return mag.cwiseProduct(v.unaryExpr([](double a) { return a < 0 ? -1.0 : 1.0; }));
    }
  }
  return v;
}

inline Vector project_ball(const Vector& v, const Vector& center, NormKind k, double radius) {
  const Vector offset = project_ball(v - center, k, radius);
  Vector p = center + offset;
  // Adding the center back can round the point just outside the ball.
  double shrink = 1.0;
  for (double step = std::numeric_limits<double>::epsilon(); norm(p - center, k) > radius && shrink > 0.0; step *= 2.0) {
    shrink = std::max(shrink - step, 0.0);
    p = center + shrink * offset;
  }
  return p;
}

/// Point of the ball of the given radius that minimizes <w, d>; its value is
/// -radius * ||w||_dual.
inline Vector ball_linear_minimizer(const Vector& w, NormKind k, double radius) {
  Vector d = Vector::Zero(w.size());
  if (w.size() == 0) return d;
  switch (k) {
    case NormKind::L2: {
      const double nw = w.norm();
      if (nw > 0) d = -radius * w / nw;
      break;
    }
    case NormKind::LInf:
      for (Eigen::Index i = 0; i < w.size(); ++i) d[i] = w[i] > 0 ? -radius : (w[i] < 0 ? radius : 0.0);
      break;
    case NormKind::L1: {
      Eigen::Index i = 0;
      w.cwiseAbs().maxCoeff(&i);
      if (w[i] != 0) d[i] = w[i] > 0 ? -radius : radius;
      break;
    }
  }
  return d;
}

}  // namespace ccopt
