#pragma once

#include <chrono>

#include "ccopt/linesearch.hpp"
#include "ccopt/trace.hpp"

namespace ccopt {

namespace detail {

struct Direction {
  Vector d;
  double delta_f = 0.0;
  int inner_iters = 0;
  std::optional<SubproblemStatus> status;  // empty for oracle directions
};

inline Direction choose_direction(const ModelState& model, const SubproblemOptions& opts,
                                  const DirectionOracle& oracle) {
  if (oracle) {
    if (auto d = oracle(model)) {
      const ExtendedReal v = model.delta_f(*d);
      if (v.is_finite() && v.value() < 0) return {*d, v.value(), 0, std::nullopt};
    }
  }
  const SubproblemResult res = solve_subproblem(make_spec(model, std::numeric_limits<double>::infinity(), opts));
  return {res.d, res.value, res.certificate.inner_iters, res.status};
}

/// Shared outer loop of the two line-search globalizations. The step rule
/// maps (model, d) to a line-search outcome.
template <typename StepRule>
RunResult run_line_search(const CompositeProblem& problem, const Vector& x0, const SubproblemOptions& opts,
                          const StoppingCriteria& stop, const DirectionOracle& oracle, StepRule&& step_rule) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunResult run;
  ModelState model = linearize(problem, x0);
  auto stationarity_at = [&](const Vector& x) {
    return stationarity_report(problem, x, opts.stationarity_tol, opts.norm).measure;
  };
  auto finish = [&](TerminationReason reason, IterationRecord last) {
    last.stationarity = stationarity_at(model.x());
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
    if (model.fx() < stop.objective_floor) return finish(TerminationReason::ObjectiveDiverging, rec);
    if (k == stop.max_iters) return finish(TerminationReason::MaxIters, rec);

    const Direction dir = choose_direction(model, opts, oracle);
    rec.delta_f = dir.delta_f;
    rec.subproblem_iters = dir.inner_iters;
    if (dir.status == SubproblemStatus::StationaryDetected) return finish(TerminationReason::Stationary, rec);
    if (!(dir.delta_f < 0)) return finish(TerminationReason::SubproblemStalled, rec);
    if (std::abs(dir.delta_f) < stop.surrogate_tol) return finish(TerminationReason::SurrogateVanished, rec);

    const LineSearchOutcome ls = step_rule(model, dir.d);
    rec.direction = dir.d;
    rec.step_norm = dir.d.norm();
    rec.step_or_radius = ls.t;
    if (ls.status == LineSearchStatus::UnboundedBelow) return finish(TerminationReason::UnboundedBelow, rec);
    if (ls.status == LineSearchStatus::IterLimit) return finish(TerminationReason::IterLimit, rec);

    if (stat_due(stop, k)) rec.stationarity = stationarity_at(model.x());
    rec.wall_seconds = elapsed();
    run.trace.records.push_back(std::move(rec));
    model = linearize(problem, model.x() + ls.t * dir.d);
  }
}

}  // namespace detail

/// Gauss-Newton directions globalized by backtracking on WWI.
inline RunResult run_backtracking(const CompositeProblem& problem, const Vector& x0, const BacktrackConfig& cfg,
                                  const SubproblemOptions& opts = {}, const StoppingCriteria& stop = {},
                                  const DirectionOracle& oracle = {}) {
  cfg.validate();
  return detail::run_line_search(problem, x0, opts, stop, oracle,
                                 [&](const ModelState& m, const Vector& d) { return backtrack(m, d, cfg); });
}

/// Gauss-Newton directions globalized by the weak Wolfe bisection search.
inline RunResult run_weak_wolfe(const CompositeProblem& problem, const Vector& x0, const WolfeConfig& cfg,
                                const SubproblemOptions& opts = {}, const StoppingCriteria& stop = {},
                                const DirectionOracle& oracle = {}) {
  cfg.validate();
  return detail::run_line_search(problem, x0, opts, stop, oracle,
                                 [&](const ModelState& m, const Vector& d) { return wolfe_bisect(m, d, cfg); });
}

}  // namespace ccopt
