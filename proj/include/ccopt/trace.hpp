#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ccopt/subproblem.hpp"

namespace ccopt {

enum class TerminationReason {
  Stationary,
  SurrogateVanished,
  ObjectiveDiverging,
  UnboundedBelow,
  MaxIters,
  IterLimit,
  RadiusCollapse,
  NoDescentDirection,
  SubproblemStalled,
};

inline const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::Stationary: return "Stationary";
    case TerminationReason::SurrogateVanished: return "SurrogateVanished";
    case TerminationReason::ObjectiveDiverging: return "ObjectiveDiverging";
    case TerminationReason::UnboundedBelow: return "UnboundedBelow";
    case TerminationReason::MaxIters: return "MaxIters";
    case TerminationReason::IterLimit: return "IterLimit";
    case TerminationReason::RadiusCollapse: return "RadiusCollapse";
    case TerminationReason::NoDescentDirection: return "NoDescentDirection";
    case TerminationReason::SubproblemStalled: return "SubproblemStalled";
  }
  return "?";
}

/// One outer iteration. step_or_radius holds t_k for line searches and
/// delta_k for the trust region; ratio is set only by the trust region.
struct IterationRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  std::optional<double> delta_f;
  Vector direction;  ///< d^k; empty when no direction was computed
  double step_norm = 0.0;
  std::optional<double> step_or_radius;
  std::optional<double> ratio;
  std::optional<double> stationarity;
  std::optional<Matrix> hessian;  ///< H_k, trust region only
  int subproblem_iters = 0;
  bool accepted = true;
  double wall_seconds = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

/// How directions are computed from the Gauss-Newton subproblem.
struct SubproblemOptions {
  NormChoice norm = NormChoice::l2();
  double beta = 0.1;
  double stationarity_tol = 1e-8;
  int max_inner_iters = 5000;
};

struct StoppingCriteria {
  int max_iters = 300;
  /// |Delta f(x^k; d^k)| below this stops with SurrogateVanished.
  double surrogate_tol = 1e-12;
  /// f(x^k) below this stops with ObjectiveDiverging.
  double objective_floor = -1e12;
  /// Record the stationarity measure every this many iterations (0: only at
  /// termination).
  int stat_every = 10;
};

/// Optional user-supplied search direction. Used whenever it returns a
/// direction with Delta f(x; d) < 0; otherwise the subproblem is solved.
using DirectionOracle = std::function<std::optional<Vector>(const ModelState&)>;

struct RunResult {
  IterationTrace trace;
  TerminationReason reason = TerminationReason::MaxIters;
  Vector x;
  double f = 0.0;
  std::optional<double> stationarity;
};

namespace detail {

inline SubproblemSpec make_spec(const ModelState& model, double radius, const SubproblemOptions& opts) {
  SubproblemSpec spec{model};
  spec.radius = radius;
  spec.norm = opts.norm;
  spec.beta = opts.beta;
  spec.stationarity_tol = opts.stationarity_tol;
  spec.max_inner_iters = opts.max_inner_iters;
  return spec;
}

inline bool stat_due(const StoppingCriteria& stop, int k) { return stop.stat_every > 0 && k % stop.stat_every == 0; }

}  // namespace detail
}  // namespace ccopt
