#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ccopt/composite.hpp"

namespace ccopt {

/// Trust-region norm with its equivalence constant sigma: ||d||_2 <= sigma*||d||.
struct NormChoice {
  NormKind kind = NormKind::L2;
  double sigma = 1.0;

  static NormChoice l2() { return {NormKind::L2, 1.0}; }
  static NormChoice linf(Eigen::Index n) { return {NormKind::LInf, std::sqrt(static_cast<double>(n))}; }
  static NormChoice make(NormKind kind, Eigen::Index n) {
    detail::require(kind != NormKind::L1, ErrorCode::InvalidArgument, "trust norm must be l2 or linf");
    return kind == NormKind::L2 ? l2() : linf(n);
  }
};

/// minimize Delta f(x; d) subject to ||d|| <= radius, solved to the sandwich
/// test value <= beta * lower_bound, or until lower_bound >= -stationarity_tol.
struct SubproblemSpec {
  ModelState model;
  double radius = std::numeric_limits<double>::infinity();
  NormChoice norm = NormChoice::l2();
  double beta = 0.1;
  double stationarity_tol = 1e-8;
  int max_inner_iters = 5000;
  bool record_history = false;
};

struct DualCertificate {
  double lower_bound = -std::numeric_limits<double>::infinity();
  Vector dual_point;
  int inner_iters = 0;
  /// Running lower bound after each inner iteration (only if requested).
  std::vector<double> history;
};

enum class SubproblemStatus { SandwichSatisfied, StationaryDetected, InnerIterLimit };

inline const char* to_string(SubproblemStatus s) {
  switch (s) {
    case SubproblemStatus::SandwichSatisfied: return "sandwich_satisfied";
    case SubproblemStatus::StationaryDetected: return "stationary_detected";
    case SubproblemStatus::InnerIterLimit: return "inner_iter_limit";
  }
  return "?";
}

struct SubproblemResult {
  Vector d;
  double value = 0.0;  ///< Delta f(x; d), always finite
  DualCertificate certificate;
  SubproblemStatus status = SubproblemStatus::InnerIterLimit;
  double radius = 0.0;       ///< radius actually used (finite)
  bool ball_active = false;  ///< d lies on the boundary of the ball
};

/// Radius used when the caller asks for an unbounded subproblem.
inline double effective_radius(double radius, const Vector& x) {
  if (std::isfinite(radius)) return radius;
  return 1e6 * (1.0 + x.norm());
}

namespace detail {

/// Largest singular value of J by power iteration on J^T J.
inline double spectral_norm(const Matrix& jac, int max_iters = 50, double tol = 1e-8) {
  const auto n = jac.cols();
  if (jac.size() == 0 || jac.isZero(0.0)) return 0.0;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector u = jac.transpose() * (jac * v);
    const double next = u.norm();
    if (next == 0.0) break;
    v = u / next;
    const bool done = std::abs(next - lambda) <= tol * next;
    lambda = next;
    if (done) break;
  }
  return std::sqrt(lambda);
}

/// The set {d : ||d|| <= radius, x + d in dom g} together with the shifted
/// regularizer d -> g(x + d). Provides the two oracles the splitting needs.
class TrustSet {
 public:
  TrustSet(const ModelState& model, double radius, NormKind norm)
      : g_(model.problem().g()), x_(model.x()), radius_(radius), norm_(norm) {
    require(norm != NormKind::LInf || g_.separable() || g_.kind() == ConvexRegularizer::Kind::Ball,
            ErrorCode::InvalidArgument, "linf trust region needs a separable or ball regularizer");
  }

  double radius() const noexcept { return radius_; }

  /// argmin_d 0.5*||d - v||^2 + t*g(x + d) subject to ||d|| <= radius.
  Vector prox(const Vector& v, double t) const {
    if (norm_ == NormKind::LInf) {
      if (g_.separable()) return shifted_prox(v, t).cwiseMax(-radius_).cwiseMin(radius_);
      return intersect_projection(v);
    }
    if (g_.kind() == ConvexRegularizer::Kind::Zero) return project_ball(v, NormKind::L2, radius_);
    Vector d = shifted_prox(v, t);
    if (d.norm() <= radius_) return d;
    // ||d(mu)|| is nonincreasing in the multiplier mu of the ball constraint.
    auto at = [&](double mu) { return shifted_prox(v / (1.0 + mu), t / (1.0 + mu)); };
    double lo = 0.0;
    double hi = 1.0;
    Vector d_hi = at(hi);
    for (int i = 0; i < 200 && d_hi.norm() > radius_; ++i) {
      lo = hi;
      hi *= 2.0;
      d_hi = at(hi);
    }
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      Vector d_mid = at(mid);
      if (d_mid.norm() <= radius_) {
        hi = mid;
        d_hi = std::move(d_mid);
        if (d_hi.norm() >= radius_ * (1.0 - 1e-13)) break;
      } else {
        lo = mid;
      }
    }
    return scale_into_ball(std::move(d_hi));
  }

  /// Lower bound on min_{||d|| <= radius} <w,d> + g(x+d), with a feasible d
  /// whose objective is at least that bound. Exact for the separable kinds
  /// under linf and for every kind under l2 up to bisection accuracy.
  LinearMin linear_min(const Vector& w) const {
    LinearMin out = linear_min_unsnapped(w);
    out.step = snap(std::move(out.step));
    return out;
  }

  /// Feasible version of an arbitrary step: the regularizer's projection,
  /// then scaled into the ball.
  Vector make_feasible(const Vector& d) const {
    if (norm_ == NormKind::LInf && !g_.separable()) return intersect_projection(d);
    return scale_into_ball(shifted_prox(d, 0.0));
  }

 private:
  LinearMin linear_min_unsnapped(const Vector& w) const {
    const auto n = w.size();
    if (norm_ == NormKind::LInf) {
      if (g_.separable()) return g_.linear_min_in_box(w, x_, Vector::Constant(n, -radius_), Vector::Constant(n, radius_));
      // ball regularizer inside an linf trust region: weak bound, feasible step
      double lower = -radius_ * w.lpNorm<1>();
      if (auto free = g_.linear_min(w, x_)) {
        if (free->step.lpNorm<Eigen::Infinity>() <= radius_) return *free;
        lower = std::max(lower, free->value);
      }
      const Vector d = intersect_projection(ball_linear_minimizer(w, NormKind::LInf, radius_));
      return {lower, d};
    }
    if (g_.kind() == ConvexRegularizer::Kind::Zero) {
      return {-radius_ * w.norm(), ball_linear_minimizer(w, NormKind::L2, radius_)};
    }
    if (g_.kind() != ConvexRegularizer::Kind::Custom) {
      if (auto free = g_.linear_min(w, x_); free && free->step.norm() <= radius_) return *free;
    }
    // Lagrangian relaxation of the ball: q(nu) <= optimum for every nu > 0.
    auto at = [&](double nu) { return shifted_prox(-w / nu, 1.0 / nu); };
    auto q = [&](double nu, const Vector& d) {
      const ExtendedReal gv = g_.eval(x_ + d);
      if (gv.is_infinite()) return -std::numeric_limits<double>::infinity();
      return w.dot(d) + gv.value() + 0.5 * nu * (d.squaredNorm() - radius_ * radius_);
    };
    double best = -std::numeric_limits<double>::infinity();
    double hi = std::max(w.norm() / radius_, 1e-300);
    Vector d_hi = at(hi);
    for (int i = 0; i < 2000 && d_hi.norm() > radius_; ++i) {
      hi *= 2.0;
      d_hi = at(hi);
    }
    best = std::max(best, q(hi, d_hi));
    double lo = hi;
    for (int i = 0; i < 200; ++i) {
      lo *= 0.5;
      const Vector d_lo = at(lo);
      best = std::max(best, q(lo, d_lo));
      if (d_lo.norm() > radius_) break;
      hi = lo;
      d_hi = d_lo;
    }
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      Vector d_mid = at(mid);
      best = std::max(best, q(mid, d_mid));
      if (d_mid.norm() <= radius_) {
        hi = mid;
        d_hi = std::move(d_mid);
      } else {
        lo = mid;
      }
      if (std::abs(d_hi.norm() - radius_) <= 1e-13 * radius_) break;
    }
    return {best, scale_into_ball(std::move(d_hi))};
  }

  Vector shifted_prox(const Vector& v, double t) const { return snap(g_.prox(x_ + v, t) - x_); }

  // x + (p - x) can round to a point just outside dom g; shrink toward 0.
  Vector snap(Vector d) const {
    if (g_.separable() && g_.kind() != ConvexRegularizer::Kind::Box) return d;
    double shrink = 1e-15;
    for (int i = 0; i < 64 && !g_.in_domain(x_ + d); ++i) {
      d *= 1.0 - shrink;
      shrink = std::min(2.0 * shrink, 0.5);
    }
    return d;
  }

  Vector scale_into_ball(Vector d) const {
    const double nd = norm(d, norm_);
    if (nd > radius_) d *= radius_ / nd;
    return d;
  }

  // Dykstra projection onto (ball regularizer - x) intersected with the linf
  // trust box; the result is pulled back toward 0 so that it is feasible.
  Vector intersect_projection(const Vector& v) const {
    Vector y = v;
    Vector p = Vector::Zero(v.size());
    Vector q = Vector::Zero(v.size());
    Vector a = y;
    for (int it = 0; it < 500; ++it) {
      a = shifted_prox(y + p, 0.0);
      p = y + p - a;
      Vector b = (a + q).cwiseMax(-radius_).cwiseMin(radius_);
      q = a + q - b;
      const double change = (b - y).lpNorm<Eigen::Infinity>();
      y = std::move(b);
      if (change <= 1e-14 * (1.0 + radius_)) break;
    }
    a = shifted_prox(y, 0.0);
    return scale_into_ball(std::move(a));
  }

  const ConvexRegularizer& g_;
  const Vector& x_;
  double radius_;
  NormKind norm_;
};

}  // namespace detail

/// Approximately solves the trust-constrained Gauss-Newton subproblem with a
/// primal-dual splitting (Chambolle-Pock) on
///
///   min_d max_y <y, c + J d> - h*(y) + g(x + d) + indicator(||d|| <= radius).
///
/// Every dual iterate y lies in dom h*, so Fenchel-Young gives the bound
///
///   Delta-bar f >= <y, c> - h*(y) + min_{||d||<=radius} [<J^T y, d> + g(x+d)] - h(c) - g(x),
///
/// whose running maximum is the certificate. Primal iterates are feasible by
/// construction and the best one is returned.
inline SubproblemResult solve_subproblem(const SubproblemSpec& spec) {
  const ModelState& model = spec.model;
  const ConvexOuter& h = model.problem().h();
  detail::require(spec.radius > 0, ErrorCode::InvalidArgument, "radius must be positive");
  detail::require(spec.beta > 0 && spec.beta < 1, ErrorCode::InvalidArgument, "beta must lie in (0,1)");
  detail::require(spec.stationarity_tol >= 0, ErrorCode::InvalidArgument, "stationarity tolerance must be >= 0");
  detail::require(spec.max_inner_iters > 0, ErrorCode::InvalidArgument, "max_inner_iters must be positive");

  const double radius = effective_radius(spec.radius, model.x());
  const detail::TrustSet trust(model, radius, spec.norm.kind);
  const Matrix& jac = model.jacobian();
  const Vector& cx = model.cx();
  const double base = model.hx() + model.gx();

  SubproblemResult res;
  res.radius = radius;
  res.d = Vector::Zero(model.dim());
  res.value = 0.0;
  DualCertificate& cert = res.certificate;

  auto offer_primal = [&](const Vector& d) {
    const ExtendedReal v = model.delta_f(d);
    if (v.is_finite() && v.value() < res.value) {
      res.value = v.value();
      res.d = d;
    }
  };
  auto offer_dual = [&](const Vector& y) {
    const ExtendedReal conj = h.conjugate(y);
    if (conj.is_infinite()) return;
    const LinearMin lm = trust.linear_min(jac.transpose() * y);
    offer_primal(lm.step);
    const double bound = y.dot(cx) - conj.value() + lm.value - base;
    if (bound > cert.lower_bound) {
      cert.lower_bound = bound;
      cert.dual_point = y;
    }
  };
  auto certified = [&]() -> std::optional<SubproblemStatus> {
    if (cert.lower_bound >= -spec.stationarity_tol) return SubproblemStatus::StationaryDetected;
    if (res.value < 0 && res.value <= spec.beta * cert.lower_bound) return SubproblemStatus::SandwichSatisfied;
    return std::nullopt;
  };
  auto finish = [&](SubproblemStatus status) {
    res.status = status;
    res.ball_active = norm(res.d, spec.norm.kind) >= radius * (1.0 - 1e-9);
    return res;
  };

  Vector y = h.project_conjugate_domain(Vector::Zero(cx.size()));
  Vector d = Vector::Zero(model.dim());
  offer_dual(y);
  if (spec.record_history) cert.history.push_back(cert.lower_bound);
  if (auto s = certified()) return finish(*s);

  const double lip = std::max(detail::spectral_norm(jac), 1e-12);
  // tau*sigma*||J||^2 < 1 is kept fixed; their ratio adapts to balance the
  // primal and dual residuals.
  const double product = 0.95 / (lip * lip);
  double ratio = 1.0;
  double adapt = 0.5;
  double tau = std::sqrt(product) * ratio;
  double sig = std::sqrt(product) / ratio;

  Vector d_bar = d;
  Vector d_sum = Vector::Zero(d.size());
  Vector y_sum = Vector::Zero(y.size());
  double weight = 0.0;

  for (int k = 1; k <= spec.max_inner_iters; ++k) {
    const Vector y_next = h.prox_conjugate(y + sig * (jac * d_bar + cx), sig);
    const Vector d_next = trust.prox(d - tau * (jac.transpose() * y_next), tau);

    const Vector dy = y - y_next;
    const Vector dd = d - d_next;
    const double primal_res = (dd / tau - jac.transpose() * dy).norm();
    const double dual_res = (dy / sig - jac * dd).norm();

    d_bar = 2.0 * d_next - d;
    d = d_next;
    y = y_next;
    d_sum += tau * d;
    y_sum += tau * y;
    weight += tau;

    offer_primal(d);
    offer_dual(y);
    const Vector d_avg = d_sum / weight;
    offer_primal(d_avg);
    offer_dual(h.project_conjugate_domain(y_sum / weight));
    cert.inner_iters = k;
    if (spec.record_history) cert.history.push_back(cert.lower_bound);
    if (auto s = certified()) return finish(*s);

    if (adapt > 1e-3) {
      if (primal_res > 1.5 * dual_res) {
        tau /= (1.0 - adapt);
        sig *= (1.0 - adapt);
        adapt *= 0.95;
        d_bar = d;
      } else if (dual_res > 1.5 * primal_res) {
        tau *= (1.0 - adapt);
        sig /= (1.0 - adapt);
        adapt *= 0.95;
        d_bar = d;
      }
    }
  }
  return finish(SubproblemStatus::InnerIterLimit);
}

struct GridMinimum {
  Vector d;
  double value;
};

/// Exhaustive minimum of Delta f over a uniform grid on [-r, r]^n restricted
/// to the trust ball and dom g. Each refinement re-grids a window of +/-2
/// cells around the incumbent with the same resolution. Test oracle; n <= 3.
inline GridMinimum brute_force_subproblem(const SubproblemSpec& spec, int grid_per_axis, int refinements = 0) {
  const ModelState& model = spec.model;
  const auto n = model.dim();
  detail::require(n <= 3, ErrorCode::DimensionTooLarge, "grid oracle supports n <= 3");
  detail::require(grid_per_axis >= 2, ErrorCode::InvalidArgument, "need at least 2 grid points per axis");
  const double radius = effective_radius(spec.radius, model.x());
  const NormKind nk = spec.norm.kind;

  std::optional<GridMinimum> best;
  Vector center = Vector::Zero(n);
  double half = radius;
  for (int level = 0; level <= refinements; ++level) {
    const double cell = 2.0 * half / (grid_per_axis - 1);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    Vector d(n);
    while (true) {
      for (Eigen::Index i = 0; i < n; ++i) d[i] = center[i] - half + cell * idx[static_cast<std::size_t>(i)];
      if (norm(d, nk) <= radius) {
        const ExtendedReal v = model.delta_f(d);
        if (v.is_finite() && (!best || v.value() < best->value)) best = GridMinimum{d, v.value()};
      }
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == grid_per_axis) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
    if (!best) throw Error(ErrorCode::InfeasibleGrid, "no grid point lies in the ball and dom g");
    center = best->d;
    half = 2.0 * cell;
  }
  return *best;
}

struct StationarityReport {
  double measure;  ///< |midpoint of [value, lower_bound]|
  SubproblemResult result;
};

/// |Delta^C_1 f(x)| = |inf_{||d||<=1} Delta f(x;d)| bracketed by the unit-ball
/// subproblem. A beta close to 1 makes the bracket tight.
inline StationarityReport stationarity_report(const CompositeProblem& problem, const Vector& x, double tol = 1e-8,
                                              NormChoice norm_choice = NormChoice::l2(), double beta = 0.9,
                                              int max_inner_iters = 20000) {
  SubproblemSpec spec{linearize(problem, x)};
  spec.radius = 1.0;
  spec.norm = norm_choice;
  spec.beta = beta;
  spec.stationarity_tol = tol;
  spec.max_inner_iters = max_inner_iters;
  SubproblemResult res = solve_subproblem(spec);
  double measure = std::abs(0.5 * (res.value + std::min(res.certificate.lower_bound, res.value)));
  // keep "measure <= tol" equivalent to a stationary certificate
  if (res.status != SubproblemStatus::StationaryDetected)
    measure = std::max(measure, std::nextafter(tol, std::numeric_limits<double>::infinity()));
  return {measure, std::move(res)};
}

inline double stationarity_measure(const CompositeProblem& problem, const Vector& x, double tol = 1e-8) {
  return stationarity_report(problem, x, tol).measure;
}

}  // namespace ccopt
