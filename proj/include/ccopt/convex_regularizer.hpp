#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "ccopt/error.hpp"
#include "ccopt/extended_real.hpp"
#include "ccopt/norms.hpp"

namespace ccopt {

/// User-supplied closed proper convex g.
class RegularizerExtension {
 public:
  virtual ~RegularizerExtension() = default;
  virtual std::string name() const = 0;
  virtual ExtendedReal eval(const Vector& x) const = 0;
  /// argmin_z t*g(z) + 0.5*||z - v||^2
  virtual Vector prox(const Vector& v, double t) const = 0;
  /// g*(z); may be +inf.
  virtual ExtendedReal conjugate(const Vector& z) const = 0;
};

/// Result of minimizing a linear function plus g over some set of steps.
struct LinearMin {
  double value;
  Vector step;
};

/// The regularizer g of f = h(c(x)) + g(x).
class ConvexRegularizer {
 public:
  enum class Kind { Zero, WeightedL1, Box, Ball, Custom };

  static ConvexRegularizer zero() { return ConvexRegularizer(Kind::Zero); }

  static ConvexRegularizer weighted_l1(Vector weights) {
    detail::require((weights.array() >= 0).all() && weights.allFinite(), ErrorCode::InvalidArgument,
                    "l1 weights must be finite and nonnegative");
    ConvexRegularizer g(Kind::WeightedL1);
    g.a_ = std::move(weights);
    return g;
  }

  /// Indicator of {lo <= x <= hi}; bounds may be infinite.
  static ConvexRegularizer box(Vector lo, Vector hi) {
    detail::require(lo.size() == hi.size(), ErrorCode::DimensionMismatch, "box bounds");
    detail::require(!lo.hasNaN() && !hi.hasNaN() && (lo.array() <= hi.array()).all(),
                    ErrorCode::InvalidArgument, "box requires lo <= hi");
    ConvexRegularizer g(Kind::Box);
    g.a_ = std::move(lo);
    g.b_ = std::move(hi);
    return g;
  }

  /// Indicator of {||x - center||_norm <= radius}.
  static ConvexRegularizer ball(Vector center, double radius, NormKind norm) {
    detail::require(radius >= 0 && std::isfinite(radius) && center.allFinite(), ErrorCode::InvalidArgument,
                    "ball needs finite center and radius >= 0");
    ConvexRegularizer g(Kind::Ball);
    g.a_ = std::move(center);
    g.radius_ = radius;
    g.norm_ = norm;
    return g;
  }

  static ConvexRegularizer custom(std::shared_ptr<const RegularizerExtension> ext) {
    detail::require(ext != nullptr, ErrorCode::InvalidArgument, "null regularizer extension");
    ConvexRegularizer g(Kind::Custom);
    g.ext_ = std::move(ext);
    return g;
  }

  Kind kind() const noexcept { return kind_; }
  const Vector& weights() const noexcept { return a_; }
  const Vector& lower() const noexcept { return a_; }
  const Vector& upper() const noexcept { return b_; }
  const Vector& center() const noexcept { return a_; }
  double radius() const noexcept { return radius_; }
  NormKind ball_norm() const noexcept { return norm_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Zero: return "zero";
      case Kind::WeightedL1: return "weighted_l1";
      case Kind::Box: return "box";
      case Kind::Ball: return "ball";
      case Kind::Custom: return ext_->name();
    }
    return "?";
  }

  /// Parameter vectors, when present, must match the problem dimension.
  bool accepts_dimension(Eigen::Index n) const noexcept {
    switch (kind_) {
      case Kind::Zero:
      case Kind::Custom: return true;
      default: return a_.size() == n;
    }
  }

  /// Coordinatewise g(x) = sum_i g_i(x_i).
  bool separable() const noexcept {
    return kind_ == Kind::Zero || kind_ == Kind::WeightedL1 || kind_ == Kind::Box;
  }

  bool in_domain(const Vector& x) const {
    switch (kind_) {
      case Kind::Zero:
      case Kind::WeightedL1: return true;
      case Kind::Box: return (x.array() >= a_.array()).all() && (x.array() <= b_.array()).all();
      case Kind::Ball: return ccopt::norm(x - a_, norm_) <= radius_;
      case Kind::Custom: return ext_->eval(x).is_finite();
    }
    return false;
  }

  ExtendedReal eval(const Vector& x) const {
    switch (kind_) {
      case Kind::Zero: return 0.0;
      case Kind::WeightedL1: return a_.dot(x.cwiseAbs());
      case Kind::Box:
      case Kind::Ball: return in_domain(x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
      case Kind::Custom: return ext_->eval(x);
    }
    return 0.0;
  }

  /// prox of t*g at v. Always lands in dom g.
  Vector prox(const Vector& v, double t) const {
    switch (kind_) {
      case Kind::Zero: return v;
      case Kind::WeightedL1: {
        Vector out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          const double shrink = std::max(std::abs(v[i]) - t * a_[i], 0.0);
          out[i] = v[i] < 0 ? -shrink : shrink;
        }
        return out;
      }
      case Kind::Box: return v.cwiseMax(a_).cwiseMin(b_);
      case Kind::Ball: return project_ball(v, a_, norm_, radius_);
      case Kind::Custom: return ext_->prox(v, t);
    }
    return v;
  }

  /// g*(z) for the catalog kinds, computed in closed form.
  ExtendedReal conjugate(const Vector& z) const {
    switch (kind_) {
      case Kind::Zero:
        return z.isZero(0.0) ? ExtendedReal(0.0) : ExtendedReal::infinity();
      case Kind::WeightedL1:
        return (z.cwiseAbs().array() <= a_.array()).all() ? ExtendedReal(0.0) : ExtendedReal::infinity();
      case Kind::Box: {
        double s = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
          if (z[i] > 0) {
            if (!std::isfinite(b_[i])) return ExtendedReal::infinity();
            s += z[i] * b_[i];
          } else if (z[i] < 0) {
            if (!std::isfinite(a_[i])) return ExtendedReal::infinity();
            s += z[i] * a_[i];
          }
        }
        return s;
      }
      case Kind::Ball: return z.dot(a_) + radius_ * ccopt::norm(z, dual_norm(norm_));
      case Kind::Custom: return ext_->conjugate(z);
    }
    return ExtendedReal::infinity();
  }

  /// min_d <w,d> + g(x+d) with no constraint on d. Empty when unbounded
  /// below. For Custom only the value is exact (step is left at zero).
  std::optional<LinearMin> linear_min(const Vector& w, const Vector& x) const {
    const auto n = w.size();
    switch (kind_) {
      case Kind::Zero:
        if (!w.isZero(0.0)) return std::nullopt;
        return LinearMin{0.0, Vector::Zero(n)};
      case Kind::WeightedL1: {
        if ((w.cwiseAbs().array() > a_.array()).any()) return std::nullopt;
        return LinearMin{-w.dot(x), -x};
      }
      case Kind::Box: {
        Vector d = Vector::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (w[i] > 0) {
            if (!std::isfinite(a_[i])) return std::nullopt;
            d[i] = a_[i] - x[i];
          } else if (w[i] < 0) {
            if (!std::isfinite(b_[i])) return std::nullopt;
            d[i] = b_[i] - x[i];
          }
        }
        return LinearMin{w.dot(d), d};
      }
      case Kind::Ball: {
        const Vector d = a_ - x + ball_linear_minimizer(w, norm_, radius_);
        return LinearMin{w.dot(d), d};
      }
      case Kind::Custom: {
        const ExtendedReal conj = ext_->conjugate(-w);
        if (conj.is_infinite()) return std::nullopt;
        return LinearMin{-w.dot(x) - conj.value(), Vector::Zero(n)};
      }
    }
    return std::nullopt;
  }

  /// Exact coordinatewise min of <w,d> + g(x+d) over d_i in
  /// [lo_i, hi_i] (finite interval containing 0). Separable kinds only.
  LinearMin linear_min_in_box(const Vector& w, const Vector& x, const Vector& lo, const Vector& hi) const {
    detail::require(separable(), ErrorCode::InvalidArgument, "linear_min_in_box needs a separable regularizer");
    const auto n = w.size();
    Vector d(n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double l = lo[i];
      double h = hi[i];
      if (kind_ == Kind::Box) {
        l = std::max(l, a_[i] - x[i]);
        h = std::min(h, b_[i] - x[i]);
      }
      auto piece = [&](double di) {
        double v = w[i] * di;
        if (kind_ == Kind::WeightedL1) v += a_[i] * std::abs(x[i] + di);
        return v;
      };
      double best = l;
      double best_v = piece(l);
      auto consider = [&](double di) {
        const double v = piece(di);
        if (v < best_v) {
          best = di;
          best_v = v;
        }
      };
      consider(h);
      if (kind_ == Kind::WeightedL1 && -x[i] > l && -x[i] < h) consider(-x[i]);
      d[i] = best;
      total += best_v;
    }
    return {total, d};
  }

 private:
  explicit ConvexRegularizer(Kind kind) : kind_(kind) {}

  Kind kind_;
  Vector a_;
  Vector b_;
  double radius_ = 0.0;
  NormKind norm_ = NormKind::L2;
  std::shared_ptr<const RegularizerExtension> ext_;
};

}  // namespace ccopt
