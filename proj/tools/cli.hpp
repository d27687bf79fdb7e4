#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccopt/ccopt.hpp"

namespace ccopt::cli {

enum class Method { Backtracking, Wolfe, TrustRegion };
enum class Format { Csv, Json };
enum class LogLevel { Quiet, Info, Debug };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunRequest {
  std::string problem = "rosenbrock_l1";
  std::string data_path;
  std::vector<double> x0;
  Method method = Method::TrustRegion;
  BacktrackConfig backtrack;
  WolfeConfig wolfe;
  TRConfig tr;
  std::string hessian = "zero";
  double hessian_scale = 1.0;
  SubproblemOptions sub;
  StoppingCriteria stop;
  double lambda = 0.01;
  std::string trace_path;
  Format format = Format::Csv;
  std::uint64_t seed = 0;
  LogLevel log = LogLevel::Info;
};

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Backtracking: return "backtracking";
    case Method::Wolfe: return "wolfe";
    case Method::TrustRegion: return "trust-region";
  }
  return "?";
}

inline int exit_code(TerminationReason r) {
  switch (r) {
    case TerminationReason::Stationary:
    case TerminationReason::SurrogateVanished:
    case TerminationReason::NoDescentDirection: return 0;
    case TerminationReason::ObjectiveDiverging:
    case TerminationReason::UnboundedBelow: return 2;
    default: return 3;
  }
}

inline LogLevel log_level_from_env() {
  const char* v = std::getenv("CC_OPT_LOG");
  if (v == nullptr || *v == '\0') return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet") return LogLevel::Quiet;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  throw UsageError("CC_OPT_LOG must be one of quiet, info, debug");
}

namespace detail {

// A JSON config file becomes "--key value" pairs placed ahead of the real
// arguments, so flags on the command line win.
inline std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config " + path + " must hold a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    out.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ",";
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      out.push_back(joined);
    } else {
      out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return out;
}

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_num(double v) {
  if (std::isfinite(v)) return num(v);
  return std::isnan(v) ? "null" : (v > 0 ? "\"Infinity\"" : "\"-Infinity\"");
}

inline std::string opt_csv(const std::optional<double>& v) { return v ? num(*v) : ""; }
inline std::string opt_json(const std::optional<double>& v) { return v ? json_num(*v) : "null"; }

}  // namespace detail

/// Parses argv into a validated request. Throws UsageError on unknown flags,
/// bad values or violated parameter constraints. Returns nullopt after
/// printing help.
inline std::optional<RunRequest> parse_args(int argc, const char* const* argv, std::ostream& out = std::cout) {
  RunRequest req;
  CLI::App app{"Convex-composite minimization runner", "ccopt"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string method = "trust-region";
  std::string format = "csv";
  std::string norm = "l2";
  std::string x0_text;
  std::string config_path;

  app.add_option("--problem", req.problem, "catalog name, 'fit', or a JSON config path");
  app.add_option("--data", req.data_path, "CSV dataset (t,y) for the exponential fit");
  app.add_option("--config", config_path, "JSON file of option values");
  app.add_option("--x0", x0_text, "starting point, comma separated");
  app.add_option("--method", method)->check(CLI::IsMember({"backtracking", "wolfe", "trust-region"}));
  app.add_option("--sigma1", req.wolfe.sigma1);
  app.add_option("--sigma2", req.wolfe.sigma2);
  app.add_option("--mu", req.wolfe.mu);
  app.add_option("--theta", req.backtrack.theta);
  app.add_option("--max-halvings", req.backtrack.max_halvings);
  app.add_option("--max-doublings", req.wolfe.max_doublings);
  app.add_option("--max-bisections", req.wolfe.max_bisections);
  app.add_option("--beta", req.sub.beta, "sandwich fraction");
  app.add_option("--gamma1", req.tr.gamma1);
  app.add_option("--gamma2", req.tr.gamma2);
  app.add_option("--gamma3", req.tr.gamma3);
  app.add_option("--beta1", req.tr.beta1);
  app.add_option("--beta2", req.tr.beta2);
  app.add_option("--beta3", req.tr.beta3);
  app.add_option("--delta0", req.tr.delta0);
  app.add_option("--radius-floor", req.tr.radius_floor);
  app.add_option("--norm", norm)->check(CLI::IsMember({"l2", "linf"}));
  app.add_option("--hessian", req.hessian)->check(CLI::IsMember({"zero", "identity"}));
  app.add_option("--hessian-scale", req.hessian_scale);
  app.add_option("--max-iters", req.stop.max_iters);
  app.add_option("--tol", req.sub.stationarity_tol, "stationarity tolerance");
  app.add_option("--surrogate-tol", req.stop.surrogate_tol);
  app.add_option("--max-inner", req.sub.max_inner_iters);
  app.add_option("--stat-every", req.stop.stat_every);
  app.add_option("--floor", req.stop.objective_floor, "objective floor for divergence");
  app.add_option("--lambda", req.lambda, "l1 weight for the exponential fit");
  app.add_option("--trace", req.trace_path, "trace output path ('-' for stdout)");
  app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", req.seed);

  // A --config file, or a .json --problem, expands to flags placed ahead of
  // the command line so explicit flags win. CLI11 consumes from the back.
  std::vector<std::string> ordered;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string flag = argv[i];
    const std::string value = argv[i + 1];
    if (flag == "--config" || (flag == "--problem" && value.size() > 5 && value.ends_with(".json")))
      for (const auto& a : detail::config_args(value)) ordered.push_back(a);
  }
  for (int i = 1; i < argc; ++i) {
    const std::string flag = argv[i];
    if (i + 1 < argc && flag == "--problem" && std::string(argv[i + 1]).ends_with(".json")) {
      ++i;
      continue;
    }
    ordered.emplace_back(argv[i]);
  }
  std::reverse(ordered.begin(), ordered.end());

  try {
    app.parse(ordered);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  req.method = method == "backtracking" ? Method::Backtracking : method == "wolfe" ? Method::Wolfe : Method::TrustRegion;
  req.format = format == "json" ? Format::Json : Format::Csv;
  req.backtrack.sigma1 = req.wolfe.sigma1;
  if (!x0_text.empty()) {
    std::stringstream ss(x0_text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        req.x0.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("--x0: bad number '" + cell + "'");
      }
    }
  }

  const auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  const auto& w = req.wolfe;
  check(w.sigma1 > 0 && w.sigma1 < 1, "--sigma1 must lie in (0,1)");
  if (req.method == Method::Wolfe) {
    check(w.sigma2 > w.sigma1, "--sigma2 must exceed --sigma1");
    check(w.sigma2 < 1, "--sigma2 must be below 1");
    check(w.mu > 0 && w.mu < 1, "--mu must lie in (0,1)");
    check(w.max_doublings > 0 && w.max_bisections > 0, "--max-doublings and --max-bisections must be positive");
  }
  if (req.method == Method::Backtracking) {
    check(req.backtrack.theta > 0 && req.backtrack.theta < 1, "--theta must lie in (0,1)");
    check(req.backtrack.max_halvings > 0, "--max-halvings must be positive");
  }
  if (req.method == Method::TrustRegion) {
    const auto& t = req.tr;
    check(t.gamma1 > 0 && t.gamma1 <= t.gamma2 && t.gamma2 < 1 && t.gamma3 >= 1,
          "need 0 < --gamma1 <= --gamma2 < 1 <= --gamma3");
    check(t.beta1 > 0 && t.beta1 <= t.beta2 && t.beta2 < t.beta3 && t.beta3 < 1,
          "need 0 < --beta1 <= --beta2 < --beta3 < 1");
    check(t.delta0 > 0 && std::isfinite(t.delta0), "--delta0 must be positive");
    check(t.radius_floor >= 0, "--radius-floor must be >= 0");
    check(req.hessian_scale >= 0, "--hessian-scale must be >= 0");
  }
  check(req.sub.beta > 0 && req.sub.beta < 1, "--beta must lie in (0,1)");
  check(req.sub.stationarity_tol >= 0, "--tol must be >= 0");
  check(req.sub.max_inner_iters > 0, "--max-inner must be positive");
  check(req.stop.max_iters >= 0, "--max-iters must be >= 0");
  check(req.stop.stat_every >= 0, "--stat-every must be >= 0");
  check(req.lambda >= 0, "--lambda must be >= 0");
  req.sub.norm = norm == "linf" ? NormChoice::linf(2) : NormChoice::l2();
  req.log = log_level_from_env();
  return req;
}

struct ResolvedProblem {
  CompositeProblem problem;
  Vector x0;
};

/// Catalog name, or "fit" for the exponential fit on --data (synthetic data
/// from --seed when no file is given).
inline ResolvedProblem resolve_problem(const RunRequest& req) {
  std::optional<ResolvedProblem> res;
  if (req.problem == "fit") {
    const Dataset data = req.data_path.empty() ? synthetic_exp_dataset(30, 2.0, -1.3, 2.0, 0.01, 0.1, 1.5, req.seed)
                                               : load_csv_dataset(req.data_path);
    Vector x0(2);
    x0 << 1.0, 0.0;
    res.emplace(ResolvedProblem{make_exp_fit_problem(data, req.lambda, "fit"), x0});
  } else if (auto entry = find_catalog_entry(req.problem)) {
    res.emplace(ResolvedProblem{entry->problem, entry->x0});
  } else {
    throw UsageError("unknown problem '" + req.problem + "'");
  }
  if (!req.x0.empty()) {
    if (static_cast<Eigen::Index>(req.x0.size()) != res->problem.dim())
      throw UsageError("--x0 has " + std::to_string(req.x0.size()) + " entries, problem needs " +
                       std::to_string(res->problem.dim()));
    res->x0 = Eigen::Map<const Vector>(req.x0.data(), static_cast<Eigen::Index>(req.x0.size()));
  }
  return *res;
}

inline std::string format_trace_csv(const RunResult& run) {
  std::string s = "k,f,delta_f,step_or_radius,ratio,stationarity,subproblem_iters\n";
  for (const auto& r : run.trace.records) {
    s += std::to_string(r.k) + "," + detail::num(r.f) + "," + detail::opt_csv(r.delta_f) + "," +
         detail::opt_csv(r.step_or_radius) + "," + detail::opt_csv(r.ratio) + "," + detail::opt_csv(r.stationarity) +
         "," + std::to_string(r.subproblem_iters) + "\n";
  }
  return s;
}

inline std::string format_trace_json(const RunResult& run, const RunRequest& req) {
  std::string s = "{\n  \"records\": [";
  bool first = true;
  for (const auto& r : run.trace.records) {
    s += first ? "\n" : ",\n";
    first = false;
    s += "    {\"k\": " + std::to_string(r.k) + ", \"f\": " + detail::json_num(r.f) +
         ", \"delta_f\": " + detail::opt_json(r.delta_f) + ", \"step_or_radius\": " + detail::opt_json(r.step_or_radius) +
         ", \"ratio\": " + detail::opt_json(r.ratio) + ", \"stationarity\": " + detail::opt_json(r.stationarity) +
         ", \"subproblem_iters\": " + std::to_string(r.subproblem_iters) + "}";
  }
  s += "\n  ],\n  \"summary\": {";
  s += "\"problem\": " + nlohmann::json(req.problem).dump();
  s += ", \"method\": \"" + std::string(to_string(req.method)) + "\"";
  s += ", \"reason\": \"" + std::string(to_string(run.reason)) + "\"";
  s += ", \"iterations\": " + std::to_string(run.trace.records.empty() ? 0 : run.trace.records.back().k);
  s += ", \"f\": " + detail::json_num(run.f);
  s += ", \"stationarity\": " + detail::opt_json(run.stationarity);
  s += ", \"x\": [";
  for (Eigen::Index i = 0; i < run.x.size(); ++i) s += (i ? ", " : "") + detail::json_num(run.x[i]);
  s += "]}\n}\n";
  return s;
}

inline RunResult run_request(const RunRequest& req, const ResolvedProblem& rp) {
  SubproblemOptions sub = req.sub;
  if (sub.norm.kind == NormKind::LInf) sub.norm = NormChoice::linf(rp.problem.dim());
  switch (req.method) {
    case Method::Backtracking: return run_backtracking(rp.problem, rp.x0, req.backtrack, sub, req.stop);
    case Method::Wolfe: return run_weak_wolfe(rp.problem, rp.x0, req.wolfe, sub, req.stop);
    case Method::TrustRegion: {
      const auto n = rp.problem.dim();
      HessianModel hess = req.hessian == "identity" ? HessianModel::scaled_identity(n, req.hessian_scale)
                                                    : HessianModel::zero(n);
      return run_trust_region(rp.problem, rp.x0, req.tr, std::move(hess), sub, req.stop);
    }
  }
  throw UsageError("unknown method");
}

/// Runs the request, writes the trace and prints a summary. Returns the
/// process exit code.
inline int execute(const RunRequest& req, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunResult run;
  try {
    const ResolvedProblem rp = resolve_problem(req);
    std::ofstream file;
    if (!req.trace_path.empty() && req.trace_path != "-") {
      file.open(req.trace_path, std::ios::binary | std::ios::trunc);
      if (!file) {
        err << "error: cannot write trace " << req.trace_path << "\n";
        return 1;
      }
    }
    run = run_request(req, rp);
    const std::string trace = req.format == Format::Json ? format_trace_json(run, req) : format_trace_csv(run);
    if (req.trace_path == "-") {
      out << trace;
    } else if (file.is_open()) {
      file << trace;
      file.close();
      if (!file) {
        err << "error: failed writing trace " << req.trace_path << "\n";
        return 1;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (req.log == LogLevel::Debug) {
    for (const auto& r : run.trace.records)
      err << "k=" << r.k << " f=" << detail::num(r.f) << " delta_f=" << detail::opt_csv(r.delta_f)
          << " step=" << detail::opt_csv(r.step_or_radius) << " accepted=" << r.accepted << "\n";
  }
  if (req.log != LogLevel::Quiet) {
    std::ostream& summary = req.trace_path == "-" ? err : out;
    summary << "problem: " << req.problem << "\nmethod: " << to_string(req.method)
            << "\nreason: " << to_string(run.reason)
            << "\niterations: " << (run.trace.records.empty() ? 0 : run.trace.records.back().k)
            << "\nfinal f: " << detail::num(run.f)
            << "\nstationarity: " << detail::opt_csv(run.stationarity) << "\n";
  }
  return exit_code(run.reason);
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  std::optional<RunRequest> req;
  try {
    req = parse_args(argc, argv, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }
  if (!req) return 0;
  return execute(*req, out, err);
}

}  // namespace ccopt::cli
