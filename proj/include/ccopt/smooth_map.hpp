#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "ccopt/error.hpp"
#include "ccopt/norms.hpp"

namespace ccopt {

/// A C^1 map c: R^n -> R^m with an analytic Jacobian. Callbacks must be
/// deterministic and reentrant.
class SmoothMap {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  SmoothMap(Eigen::Index n, Eigen::Index m, EvalFn eval, JacobianFn jacobian)
      : n_(n), m_(m), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
    detail::require(n >= 1 && m >= 1, ErrorCode::InvalidArgument, "smooth map dimensions must be positive");
    detail::require(eval_ && jacobian_, ErrorCode::InvalidArgument, "smooth map callbacks must be set");
  }

  Eigen::Index input_dim() const noexcept { return n_; }
  Eigen::Index output_dim() const noexcept { return m_; }

  Vector eval(const Vector& x) const {
    check_input(x);
    Vector cx = eval_(x);
    detail::require(cx.size() == m_, ErrorCode::DimensionMismatch, "c(x) has wrong length");
    detail::require(!cx.hasNaN(), ErrorCode::NotANumber, "c(x) produced NaN");
    return cx;
  }

  Matrix jacobian(const Vector& x) const {
    check_input(x);
    Matrix jx = jacobian_(x);
    detail::require(jx.rows() == m_ && jx.cols() == n_, ErrorCode::DimensionMismatch, "Jacobian has wrong shape");
    detail::require(!jx.hasNaN(), ErrorCode::NotANumber, "Jacobian produced NaN");
    return jx;
  }

 private:
  void check_input(const Vector& x) const {
    detail::require(x.size() == n_, ErrorCode::DimensionMismatch,
                    "expected point of length " + std::to_string(n_) + ", got " + std::to_string(x.size()));
    detail::require(!x.hasNaN(), ErrorCode::NotANumber, "point contains NaN");
  }

  Eigen::Index n_;
  Eigen::Index m_;
  EvalFn eval_;
  JacobianFn jacobian_;
};

/// Maximum elementwise relative error |J_fd - J| / max(1, |J|) between the
/// callback Jacobian and central differences with the given step.
///
/// The step actually taken is (x + h) - (x - h) as represented in floating
/// point, so maps that are linear in x are differenced exactly.
inline double check_jacobian_fd(const SmoothMap& map, const Vector& x, double step = 1e-5) {
  detail::require(step > 0 && std::isfinite(step), ErrorCode::InvalidArgument, "finite-difference step must be > 0");
  const Matrix jx = map.jacobian(x);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < map.input_dim(); ++j) {
    Vector xp = x;
    Vector xm = x;
    xp[j] += step;
    xm[j] -= step;
    const double taken = xp[j] - xm[j];
    const Vector column = (map.eval(xp) - map.eval(xm)) / taken;
    for (Eigen::Index i = 0; i < map.output_dim(); ++i) {
      const double err = std::abs(column[i] - jx(i, j)) / std::max(1.0, std::abs(jx(i, j)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace ccopt
