#pragma once

#include <memory>
#include <string>

#include "ccopt/error.hpp"
#include "ccopt/extended_real.hpp"
#include "ccopt/norms.hpp"

namespace ccopt {

/// User-supplied finite convex h. The subproblem solver needs the prox of h
/// and the value of its Fenchel conjugate to certify lower bounds.
class OuterExtension {
 public:
  virtual ~OuterExtension() = default;
  virtual std::string name() const = 0;
  virtual double eval(const Vector& u) const = 0;
  /// argmin_z t*h(z) + 0.5*||z - v||^2
  virtual Vector prox(const Vector& v, double t) const = 0;
  /// h*(y) = sup_u <y,u> - h(u); +inf outside the conjugate domain.
  virtual ExtendedReal conjugate(const Vector& y) const = 0;
  /// Any map into dom h*; used to make dual iterates feasible.
  virtual Vector project_conjugate_domain(const Vector& y) const = 0;
};

/// The outer function h of f = h(c(x)) + g(x): a scaled member of a small
/// catalog of finite convex functions, all positively homogeneous, so that
/// h* is the indicator of a closed convex set C and h(u) = sup_{y in C} <y,u>.
///
///   L1            s*||u||_1        C = {||y||_inf <= s}
///   L2            s*||u||_2        C = {||y||_2 <= s}
///   LInf          s*||u||_inf      C = {||y||_1 <= s}
///   MaxCoordinate s*max_i u_i      C = {y >= 0, sum y = s}
///   Identity      s*u  (m = 1)     C = {s}
class ConvexOuter {
 public:
  enum class Kind { L1, L2, LInf, MaxCoordinate, Identity, Custom };

  static ConvexOuter l1(double scale = 1.0) { return ConvexOuter(Kind::L1, scale); }
  static ConvexOuter l2(double scale = 1.0) { return ConvexOuter(Kind::L2, scale); }
  static ConvexOuter linf(double scale = 1.0) { return ConvexOuter(Kind::LInf, scale); }
  static ConvexOuter max_coordinate(double scale = 1.0) { return ConvexOuter(Kind::MaxCoordinate, scale); }
  static ConvexOuter identity(double scale = 1.0) { return ConvexOuter(Kind::Identity, scale); }
  static ConvexOuter custom(std::shared_ptr<const OuterExtension> ext) {
    detail::require(ext != nullptr, ErrorCode::InvalidArgument, "null outer extension");
    ConvexOuter h(Kind::Custom, 1.0);
    h.ext_ = std::move(ext);
    return h;
  }

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }

  std::string name() const {
    switch (kind_) {
      case Kind::L1: return "l1";
      case Kind::L2: return "l2";
      case Kind::LInf: return "linf";
      case Kind::MaxCoordinate: return "max";
      case Kind::Identity: return "identity";
      case Kind::Custom: return ext_->name();
    }
    return "?";
  }

  bool accepts_dimension(Eigen::Index m) const noexcept {
    return kind_ == Kind::Identity ? m == 1 : m >= 1;
  }

  double eval(const Vector& u) const {
    switch (kind_) {
      case Kind::L1: return scale_ * u.lpNorm<1>();
      case Kind::L2: return scale_ * u.norm();
      case Kind::LInf: return scale_ * u.lpNorm<Eigen::Infinity>();
      case Kind::MaxCoordinate: return scale_ * u.maxCoeff();
      case Kind::Identity: return scale_ * u[0];
      case Kind::Custom: return ext_->eval(u);
    }
    return 0.0;
  }

  /// Euclidean projection onto dom h*.
  Vector project_conjugate_domain(const Vector& y) const {
    switch (kind_) {
      case Kind::L1: return project_ball(y, NormKind::LInf, scale_);
      case Kind::L2: return project_ball(y, NormKind::L2, scale_);
      case Kind::LInf: return project_ball(y, NormKind::L1, scale_);
      case Kind::MaxCoordinate: return detail::project_simplex(y, scale_);
      case Kind::Identity: return Vector::Constant(1, scale_);
      case Kind::Custom: return ext_->project_conjugate_domain(y);
    }
    return y;
  }

  /// h*(y). For the catalog kinds this is 0 on C and +inf elsewhere; points
  /// produced by project_conjugate_domain are treated as members of C.
  ExtendedReal conjugate(const Vector& y) const {
    if (kind_ == Kind::Custom) return ext_->conjugate(y);
    const double tol = 1e-12 * (1.0 + scale_);
    bool inside = true;
    switch (kind_) {
      case Kind::L1: inside = y.lpNorm<Eigen::Infinity>() <= scale_ + tol; break;
      case Kind::L2: inside = y.norm() <= scale_ + tol; break;
      case Kind::LInf: inside = y.lpNorm<1>() <= scale_ + tol; break;
      case Kind::MaxCoordinate:
        inside = y.minCoeff() >= -tol && std::abs(y.sum() - scale_) <= tol * static_cast<double>(y.size());
        break;
      case Kind::Identity: inside = y.size() == 1 && std::abs(y[0] - scale_) <= tol; break;
      case Kind::Custom: break;
    }
    return inside ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }

  /// prox of t*h at v.
  Vector prox(const Vector& v, double t) const {
    if (kind_ == Kind::Custom) return ext_->prox(v, t);
    // Moreau: prox_{t h}(v) = v - t * P_C(v / t).
    return v - t * project_conjugate_domain(v / t);
  }

  /// prox of t*h* at v.
  Vector prox_conjugate(const Vector& v, double t) const {
    if (kind_ == Kind::Custom) return v - t * ext_->prox(v / t, 1.0 / t);
    return project_conjugate_domain(v);
  }

 private:
  ConvexOuter(Kind kind, double scale) : kind_(kind), scale_(scale) {
    detail::require(scale > 0 && std::isfinite(scale), ErrorCode::InvalidArgument,
                    "outer scale must be positive and finite");
  }

  Kind kind_;
  double scale_;
  std::shared_ptr<const OuterExtension> ext_;
};

}  // namespace ccopt
