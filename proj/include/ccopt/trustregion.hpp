#pragma once

#include <Eigen/Eigenvalues>
#include <chrono>
#include <functional>

#include "ccopt/lipschitz.hpp"
#include "ccopt/trace.hpp"

namespace ccopt {

struct TRConfig {
  double gamma1 = 0.25;
  double gamma2 = 0.5;
  double gamma3 = 2.0;
  double beta1 = 0.01;
  double beta2 = 0.25;
  double beta3 = 0.75;
  double delta0 = 1.0;
  double radius_floor = 1e-14;

  void validate() const {
    detail::require(gamma1 > 0 && gamma1 <= gamma2 && gamma2 < 1 && 1 <= gamma3, ErrorCode::InvalidArgument,
                    "trust region needs 0 < gamma1 <= gamma2 < 1 <= gamma3");
    detail::require(beta1 > 0 && beta1 <= beta2 && beta2 < beta3 && beta3 < 1, ErrorCode::InvalidArgument,
                    "trust region needs 0 < beta1 <= beta2 < beta3 < 1");
    detail::require(delta0 > 0 && std::isfinite(delta0), ErrorCode::InvalidArgument, "delta0 must be positive");
    detail::require(radius_floor >= 0, ErrorCode::InvalidArgument, "radius floor must be >= 0");
  }
};

/// The symmetric matrices H_k added to the model as 0.5 d^T H_k d.
class HessianModel {
 public:
  enum class Policy { Zero, ScaledIdentity, Callback };
  using CallbackFn = std::function<Matrix(const Vector&)>;

  static HessianModel zero(Eigen::Index n) { return HessianModel(Policy::Zero, Matrix::Zero(n, n)); }
  static HessianModel scaled_identity(Eigen::Index n, double c) {
    detail::require(c >= 0 && std::isfinite(c), ErrorCode::InvalidArgument, "identity scale must be >= 0");
    HessianModel hm(Policy::ScaledIdentity, c * Matrix::Identity(n, n));
    hm.scale_ = c;
    return hm;
  }
  /// The callback is evaluated at x0 and at every accepted iterate.
  static HessianModel callback(CallbackFn fn, const Vector& x0) {
    detail::require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "null Hessian callback");
    HessianModel hm(Policy::Callback, fn(x0));
    hm.fn_ = std::move(fn);
    hm.check(x0.size());
    return hm;
  }

  Policy policy() const noexcept { return policy_; }
  const Matrix& current() const noexcept { return current_; }
  bool is_zero() const { return policy_ == Policy::Zero || current_.isZero(0.0); }

  double spectral_norm() const {
    if (is_zero()) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(current_, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
  }

  double quadratic(const Vector& d) const { return is_zero() ? 0.0 : 0.5 * d.dot(current_ * d); }

  /// H_{k+1} after an accepted step to x.
  void update(const Vector& x) {
    if (policy_ != Policy::Callback) return;
    current_ = fn_(x);
    check(x.size());
  }

 private:
  HessianModel(Policy p, Matrix m) : policy_(p), current_(std::move(m)) {}

  void check(Eigen::Index n) const {
    detail::require(current_.rows() == n && current_.cols() == n, ErrorCode::DimensionMismatch, "Hessian shape");
    detail::require(current_.allFinite(), ErrorCode::NotANumber, "Hessian must be finite");
    detail::require(current_.isApprox(current_.transpose(), 1e-12) || current_.isZero(0.0),
                    ErrorCode::InvalidArgument, "Hessian must be symmetric");
  }

  Policy policy_;
  Matrix current_;
  double scale_ = 0.0;
  CallbackFn fn_;
};

struct SufficientDecreaseParams {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

/// t_hat = min(1, delta, -alpha/beta) with beta = sigma^2 ||H||_2; beta = 0
/// drops the last term.
inline double cauchy_step_length(double alpha, double sigma, double h_norm, double delta) {
  detail::require(alpha < 0, ErrorCode::InvalidArgument, "Cauchy step needs alpha < 0");
  const double beta = sigma * sigma * h_norm;
  double t = std::min(1.0, delta);
  if (beta > 0) t = std::min(t, -alpha / beta);
  return t;
}

struct CauchyStep {
  Vector d;               ///< t_hat * d_hat
  double t_hat = 0.0;
  double model_decrease;  ///< Delta f(x; d) + 0.5 d^T H d
  double alpha = 0.0;     ///< Delta f(x; d_hat)
  SubproblemResult unit;  ///< the unit-ball subproblem that produced d_hat
  bool stationary = false;
};

/// Scales d_hat (a unit-ball subproblem solution with Delta f(x; d_hat) = alpha < 0).
inline CauchyStep cauchy_step_from(const ModelState& model, SubproblemResult unit, double delta,
                                   const HessianModel& hess, const NormChoice& norm) {
  CauchyStep cs;
  cs.alpha = unit.value;
  cs.stationary = unit.status == SubproblemStatus::StationaryDetected || !(unit.value < 0);
  if (cs.stationary) {
    cs.d = Vector::Zero(model.dim());
    cs.model_decrease = 0.0;
  } else {
    cs.t_hat = cauchy_step_length(cs.alpha, norm.sigma, hess.spectral_norm(), delta);
    cs.d = cs.t_hat * unit.d;
    cs.model_decrease = model.delta_f(cs.d).value() + hess.quadratic(cs.d);
  }
  cs.unit = std::move(unit);
  return cs;
}

/// Solves the unit-ball subproblem and returns the Cauchy step for radius
/// delta. A stationary unit subproblem is flagged and yields d = 0.
inline CauchyStep cauchy_step(const ModelState& model, double delta, const HessianModel& hess,
                              const SubproblemOptions& opts) {
  return cauchy_step_from(model, solve_subproblem(detail::make_spec(model, 1.0, opts)), delta, hess, opts.norm);
}

/// Delta f(x;d) + 0.5 d^T H d < -kappa1 * min(kappa2, delta).
inline bool sufficient_decrease_holds(const Vector& d, const ModelState& model, const HessianModel& hess, double delta,
                                      const SufficientDecreaseParams& params) {
  const ExtendedReal df = model.delta_f(d);
  if (df.is_infinite()) return false;
  return df.value() + hess.quadratic(d) < -params.kappa1 * std::min(params.kappa2, delta);
}

/// (f_new - f(x)) / (Delta f(x;d) + 0.5 d^T H d); -inf when f_new is +inf.
inline double tr_ratio(const ModelState& model, const Vector& d, const HessianModel& hess, ExtendedReal f_new) {
  if (f_new.is_infinite()) return -std::numeric_limits<double>::infinity();
  const ExtendedReal df = model.delta_f(d);
  detail::require(df.is_finite(), ErrorCode::ContractViolation, "predicted decrease must be negative");
  const double predicted = df.value() + hess.quadratic(d);
  detail::require(predicted < 0, ErrorCode::ContractViolation, "predicted decrease must be negative");
  return (f_new.value() - model.fx()) / predicted;
}

/// Expansion to gamma3*delta above beta3, unchanged in [beta2, beta3],
/// contraction to gamma1*delta below beta2. Returns nullopt when the new
/// radius would fall below the floor.
inline std::optional<double> radius_update(double r, double delta, const TRConfig& cfg) {
  detail::require(delta > 0, ErrorCode::InvalidArgument, "radius must be positive");
  double next = delta;
  if (r > cfg.beta3) {
    next = cfg.gamma3 * delta;
  } else if (r < cfg.beta2) {
    next = cfg.gamma1 * delta;
  }
  if (next < cfg.radius_floor) return std::nullopt;
  return next;
}

/// Trust-region method on Delta f(x;d) + 0.5 d^T H_k d. With H = 0 the step is
/// the radius-delta subproblem solution; otherwise the Cauchy step. Either is
/// checked against the Cauchy benchmark kappa1 = beta|alpha|/2,
/// kappa2 = min(1, |alpha|/(sigma^2 ||H||)), falling back to the Cauchy step.
inline RunResult run_trust_region(const CompositeProblem& problem, const Vector& x0, const TRConfig& cfg,
                                  HessianModel hess, const SubproblemOptions& opts = {},
                                  const StoppingCriteria& stop = {}) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunResult run;
  ModelState model = linearize(problem, x0);
  double delta = cfg.delta0;
  auto finish = [&](TerminationReason reason, IterationRecord last) {
    last.stationarity = stationarity_report(problem, model.x(), opts.stationarity_tol, opts.norm).measure;
    last.wall_seconds = elapsed();
    run.stationarity = last.stationarity;
    run.trace.records.push_back(std::move(last));
    run.reason = reason;
    run.x = model.x();
    run.f = model.fx();
    return run;
  };

  for (int k = 0;; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.x = model.x();
    rec.f = model.fx();
    rec.step_or_radius = delta;
    rec.hessian = hess.current();
    if (model.fx() < stop.objective_floor) return finish(TerminationReason::ObjectiveDiverging, rec);
    if (k == stop.max_iters) return finish(TerminationReason::MaxIters, rec);

    CauchyStep cauchy = cauchy_step(model, delta, hess, opts);
    rec.subproblem_iters = cauchy.unit.certificate.inner_iters;
    if (cauchy.unit.status == SubproblemStatus::StationaryDetected) {
      rec.delta_f = cauchy.unit.value;
      return finish(TerminationReason::Stationary, rec);
    }
    if (cauchy.stationary) {
      rec.delta_f = cauchy.unit.value;
      return finish(TerminationReason::SubproblemStalled, rec);
    }

    Vector d = cauchy.d;
    if (hess.is_zero()) {
      if (delta == 1.0) {
        d = cauchy.unit.d;
      } else {
        const SubproblemResult sub = solve_subproblem(detail::make_spec(model, delta, opts));
        rec.subproblem_iters += sub.certificate.inner_iters;
        // A small radius can push the certificate under the absolute tolerance
        // even though the unit problem found descent; the Cauchy step still works.
        if (sub.status != SubproblemStatus::StationaryDetected && sub.value < 0) d = sub.d;
      }
      const double h_norm = hess.spectral_norm();
      SufficientDecreaseParams params{0.5 * opts.beta * std::abs(cauchy.alpha), 1.0};
      if (h_norm > 0) params.kappa2 = std::min(1.0, std::abs(cauchy.alpha) / (opts.norm.sigma * opts.norm.sigma * h_norm));
      if (!sufficient_decrease_holds(d, model, hess, delta, params)) d = cauchy.d;
    }

    const double df = model.delta_f(d).value();
    const double predicted = df + hess.quadratic(d);
    rec.delta_f = df;
    rec.direction = d;
    rec.step_norm = d.norm();
    if (!(predicted < 0)) return finish(TerminationReason::NoDescentDirection, rec);

    const Vector trial = model.x() + d;
    const double r = tr_ratio(model, d, hess, eval_f(problem, trial));
    rec.ratio = r;
    if (detail::stat_due(stop, k)) rec.stationarity = stationarity_report(problem, model.x(), opts.stationarity_tol, opts.norm).measure;
    rec.accepted = r >= cfg.beta1;
    rec.wall_seconds = elapsed();
    run.trace.records.push_back(rec);

    const std::optional<double> next = radius_update(r, delta, cfg);
    if (rec.accepted) {
      model = linearize(problem, trial);
      hess.update(model.x());
    }
    if (!next) {
      IterationRecord last;
      last.k = k + 1;
      last.x = model.x();
      last.f = model.fx();
      last.step_or_radius = delta;
      last.hessian = hess.current();
      return finish(TerminationReason::RadiusCollapse, last);
    }
    delta = *next;
  }
}

}  // namespace ccopt
