#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>

#include "ccopt/convex_outer.hpp"
#include "ccopt/convex_regularizer.hpp"
#include "ccopt/extended_real.hpp"
#include "ccopt/smooth_map.hpp"

namespace ccopt {

/// f(x) = h(c(x)) + g(x). Immutable; copies share the underlying parts.
class CompositeProblem {
 public:
  CompositeProblem(SmoothMap c, ConvexOuter h, ConvexRegularizer g, std::string name = "problem")
      : parts_(std::make_shared<const Parts>(Parts{std::move(c), std::move(h), std::move(g), std::move(name)})) {
    detail::require(parts_->h.accepts_dimension(parts_->c.output_dim()), ErrorCode::DimensionMismatch,
                    "outer function " + parts_->h.name() + " cannot consume R^" +
                        std::to_string(parts_->c.output_dim()));
    detail::require(parts_->g.accepts_dimension(parts_->c.input_dim()), ErrorCode::DimensionMismatch,
                    "regularizer " + parts_->g.name() + " does not match R^" + std::to_string(parts_->c.input_dim()));
  }

  const SmoothMap& c() const noexcept { return parts_->c; }
  const ConvexOuter& h() const noexcept { return parts_->h; }
  const ConvexRegularizer& g() const noexcept { return parts_->g; }
  const std::string& name() const noexcept { return parts_->name; }
  Eigen::Index dim() const noexcept { return parts_->c.input_dim(); }

 private:
  struct Parts {
    SmoothMap c;
    ConvexOuter h;
    ConvexRegularizer g;
    std::string name;
  };
  std::shared_ptr<const Parts> parts_;
};

/// f(x); +inf exactly when x is outside dom g.
inline ExtendedReal eval_f(const CompositeProblem& problem, const Vector& x) {
  const Vector cx = problem.c().eval(x);
  return ExtendedReal(problem.h().eval(cx)) + problem.g().eval(x);
}

/// Linearization of f at a point of dom g: c(x), its Jacobian, and the split
/// f(x) = h(c(x)) + g(x). Evaluates Delta f(x; .).
class ModelState {
 public:
  const CompositeProblem& problem() const noexcept { return problem_; }
  const Vector& x() const noexcept { return x_; }
  const Vector& cx() const noexcept { return cx_; }
  const Matrix& jacobian() const noexcept { return jx_; }
  double fx() const noexcept { return hx_ + gx_; }
  double hx() const noexcept { return hx_; }
  double gx() const noexcept { return gx_; }
  Eigen::Index dim() const noexcept { return x_.size(); }

  /// h(c + J d) + g(x + d) - h(c) - g(x).
  ExtendedReal delta_f(const Vector& d) const {
    detail::require(d.size() == x_.size(), ErrorCode::DimensionMismatch, "direction length");
    const ExtendedReal gnew = problem_.g().eval(x_ + d);
    if (gnew.is_infinite()) return ExtendedReal::infinity();
    const double hnew = problem_.h().eval(cx_ + jx_ * d);
    return ExtendedReal((hnew - hx_) + (gnew.value() - gx_));
  }

  /// h(c + J d) alone, the linearized outer term.
  double linearized_outer(const Vector& d) const { return problem_.h().eval(cx_ + jx_ * d); }

 private:
  friend ModelState linearize(const CompositeProblem&, const Vector&);

  ModelState(CompositeProblem problem, Vector x, Vector cx, Matrix jx, double hx, double gx)
      : problem_(std::move(problem)), x_(std::move(x)), cx_(std::move(cx)), jx_(std::move(jx)), hx_(hx), gx_(gx) {}

  CompositeProblem problem_;
  Vector x_;
  Vector cx_;
  Matrix jx_;
  double hx_;
  double gx_;
};

/// Throws ErrorCode::OutsideDomain when x is not in dom g.
inline ModelState linearize(const CompositeProblem& problem, const Vector& x) {
  Vector cx = problem.c().eval(x);
  const ExtendedReal gx = problem.g().eval(x);
  detail::require(gx.is_finite(), ErrorCode::OutsideDomain, "cannot linearize outside dom g");
  Matrix jx = problem.c().jacobian(x);
  const double hx = problem.h().eval(cx);
  detail::require(std::isfinite(hx), ErrorCode::NotANumber, "h(c(x)) is not finite");
  return ModelState(problem, x, std::move(cx), std::move(jx), hx, gx.value());
}

inline ExtendedReal delta_f(const ModelState& model, const Vector& d) { return model.delta_f(d); }

struct DirectionalEstimate {
  double estimate;  ///< min over the grid of Delta f(x; t d) / t
  bool monotone;    ///< quotients nonincreasing along the decreasing grid
};

/// Estimates f'(x; d) = inf_{t>0} Delta f(x; t d)/t from a decreasing grid of
/// positive t. Infinite quotients (t d leaving dom g) are skipped.
inline DirectionalEstimate directional_derivative_estimate(const ModelState& model, const Vector& d,
                                                           std::span<const double> t_grid) {
  detail::require(!t_grid.empty(), ErrorCode::InvalidArgument, "empty t grid");
  bool monotone = true;
  bool any_finite = false;
  double best = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double prev_t = std::numeric_limits<double>::infinity();
  for (const double t : t_grid) {
    detail::require(t > 0 && t < prev_t, ErrorCode::InvalidArgument, "t grid must be positive and decreasing");
    prev_t = t;
    const ExtendedReal df = model.delta_f(t * d);
    if (df.is_infinite()) {
      // once finite, a smaller t must stay finite (dom g is convex and contains x)
      if (any_finite) monotone = false;
      continue;
    }
    const double q = df.value() / t;
    if (q > prev + 1e-10 * (1.0 + std::abs(prev))) monotone = false;
    prev = q;
    best = any_finite ? std::min(best, q) : q;
    any_finite = true;
  }
  detail::require(any_finite, ErrorCode::OutsideDomain, "direction leaves dom g at every grid point");
  return {best, monotone};
}

}  // namespace ccopt
