#pragma once

#include <cmath>
#include <limits>

#include "ccopt/composite.hpp"

namespace ccopt {

struct BacktrackConfig {
  double sigma1 = 1e-4;
  double theta = 0.5;
  int max_halvings = 60;

  void validate() const {
    detail::require(sigma1 > 0 && sigma1 < 1, ErrorCode::InvalidArgument, "sigma1 must lie in (0,1)");
    detail::require(theta > 0 && theta < 1, ErrorCode::InvalidArgument, "theta must lie in (0,1)");
    detail::require(max_halvings > 0, ErrorCode::InvalidArgument, "max_halvings must be positive");
  }
};

struct WolfeConfig {
  double sigma1 = 1e-4;
  double sigma2 = 0.9;
  double mu = 0.5;
  int max_doublings = 60;
  int max_bisections = 100;

  void validate() const {
    detail::require(sigma1 > 0 && sigma1 < sigma2 && sigma2 < 1, ErrorCode::InvalidArgument,
                    "weak Wolfe needs 0 < sigma1 < sigma2 < 1");
    detail::require(mu > 0 && mu < 1, ErrorCode::InvalidArgument, "mu must lie in (0,1)");
    detail::require(max_doublings > 0 && max_bisections > 0, ErrorCode::InvalidArgument,
                    "doubling and bisection caps must be positive");
  }
};

enum class LineSearchStatus { Accepted, UnboundedBelow, IterLimit };

inline const char* to_string(LineSearchStatus s) {
  switch (s) {
    case LineSearchStatus::Accepted: return "Accepted";
    case LineSearchStatus::UnboundedBelow: return "UnboundedBelow";
    case LineSearchStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

struct LineSearchOutcome {
  LineSearchStatus status = LineSearchStatus::IterLimit;
  double t = 0.0;                                 ///< accepted step, or last trial
  ExtendedReal f_new = ExtendedReal::infinity();  ///< f(x + t d) at that step
  int evaluations = 0;                            ///< f evaluations
};

namespace detail {

inline double require_descent(const ModelState& model, const Vector& d) {
  const ExtendedReal df = model.delta_f(d);
  require(df.is_finite() && df.value() < 0, ErrorCode::DescentRequired,
          "line search needs Delta f(x;d) < 0, got " + std::to_string(df.to_double()));
  return df.value();
}

// f(x+td) <= f(x) + sigma1 * t * Delta f(x;d); false when x+td leaves dom g
inline bool sufficient_decrease(ExtendedReal f_new, double fx, double t, double delta, double sigma1) {
  return f_new <= ExtendedReal(fx + sigma1 * t * delta);
}

}  // namespace detail

/// Condition WWI at step t.
inline bool armijo_holds(const ModelState& model, const Vector& d, double t, double sigma1) {
  const ExtendedReal delta = model.delta_f(d);
  detail::require(delta.is_finite(), ErrorCode::DescentRequired, "Delta f(x;d) must be finite");
  const ExtendedReal f_new = eval_f(model.problem(), model.x() + t * d);
  return detail::sufficient_decrease(f_new, model.fx(), t, delta.value(), sigma1);
}

/// Condition WWII at x_new = x + t d: sigma2 * Delta f(x;d) <= Delta f(x_new; mu d) / mu.
/// The right side uses a fresh linearization at x_new and is +inf when
/// x_new + mu d leaves dom g.
inline bool curvature_holds(const CompositeProblem& problem, const Vector& x_new, const Vector& d, double mu,
                            double sigma2, double delta_f_at_x) {
  // A probe that rounds back onto x_new cannot resolve the slope.
  if (x_new + mu * d == x_new) return false;
  const ModelState at_new = linearize(problem, x_new);
  const ExtendedReal rhs = at_new.delta_f(mu * d);
  if (rhs.is_infinite()) return true;
  return sigma2 * delta_f_at_x <= rhs.value() / mu;
}

/// Tries t = 1, theta, theta^2, ... until WWI holds.
inline LineSearchOutcome backtrack(const ModelState& model, const Vector& d, const BacktrackConfig& cfg) {
  cfg.validate();
  const double delta = detail::require_descent(model, d);
  LineSearchOutcome out;
  double t = 1.0;
  for (int j = 0; j <= cfg.max_halvings; ++j) {
    out.t = t;
    out.f_new = eval_f(model.problem(), model.x() + t * d);
    ++out.evaluations;
    if (detail::sufficient_decrease(out.f_new, model.fx(), t, delta, cfg.sigma1)) {
      out.status = LineSearchStatus::Accepted;
      return out;
    }
    t *= cfg.theta;
  }
  out.status = LineSearchStatus::IterLimit;
  return out;
}

/// Bracketing search for a step satisfying WWI and WWII. The bracket
/// [alpha, beta] starts at [0, inf]; a WWI failure sets beta = t, a WWII
/// failure sets alpha = t. The trial doubles while beta is infinite and is
/// bisected afterwards.
///
/// Reaching max_doublings with beta still infinite is reported as
/// UnboundedBelow: WWI held at every trial, so f decreased along the ray
/// without the curvature condition ever being met.
inline LineSearchOutcome wolfe_bisect(const ModelState& model, const Vector& d, const WolfeConfig& cfg) {
  cfg.validate();
  const double delta = detail::require_descent(model, d);
  const CompositeProblem& problem = model.problem();

  LineSearchOutcome out;
  double alpha = 0.0;
  double beta = std::numeric_limits<double>::infinity();
  double t = 1.0;
  int doublings = 0;
  int bisections = 0;
  while (true) {
    const Vector x_new = model.x() + t * d;
    out.t = t;
    out.f_new = eval_f(problem, x_new);
    ++out.evaluations;
    if (!detail::sufficient_decrease(out.f_new, model.fx(), t, delta, cfg.sigma1)) {
      beta = t;
    } else if (!curvature_holds(problem, x_new, d, cfg.mu, cfg.sigma2, delta)) {
      alpha = t;
    } else {
      out.status = LineSearchStatus::Accepted;
      return out;
    }

    if (std::isinf(beta)) {
      if (doublings == cfg.max_doublings) {
        out.status = LineSearchStatus::UnboundedBelow;
        return out;
      }
      ++doublings;
      t *= 2.0;
    } else {
      if (bisections == cfg.max_bisections) {
        out.status = LineSearchStatus::IterLimit;
        return out;
      }
      ++bisections;
      t = 0.5 * (alpha + beta);
    }
  }
}

/// Re-evaluates WWI and WWII at (x, d, t) from scratch.
inline bool weak_wolfe_holds(const CompositeProblem& problem, const Vector& x, const Vector& d, double t,
                             const WolfeConfig& cfg) {
  const ModelState model = linearize(problem, x);
  const ExtendedReal delta = model.delta_f(d);
  if (!delta.is_finite() || delta.value() >= 0) return false;
  if (!armijo_holds(model, d, t, cfg.sigma1)) return false;
  return curvature_holds(problem, x + t * d, d, cfg.mu, cfg.sigma2, delta.value());
}

}  // namespace ccopt
