#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ccopt/composite.hpp"
#include "ccopt/lipschitz.hpp"

namespace ccopt {

struct Dataset {
  std::vector<double> t;
  std::vector<double> y;

  std::size_t size() const noexcept { return t.size(); }
};

struct KnownOptimum {
  Vector x;
  double f;
  std::string note;
};

struct CatalogEntry {
  std::string name;
  CompositeProblem problem;
  Vector x0;
  std::optional<KnownOptimum> known_optimum;
  std::optional<LipschitzData> lipschitz;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Two numeric columns per line, comma separated; an optional non-numeric
/// header on the first line is skipped. Blank lines are ignored. Errors
/// report the 1-based line number.
inline Dataset parse_csv_dataset(std::string_view text) {
  Dataset data;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto err = [&](const std::string& what) {
      return Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
    };
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      if (line_no == 1 && comma != std::string_view::npos) continue;
      throw err("expected two comma-separated columns");
    }
    const auto a = detail::parse_number(line.substr(0, comma));
    const auto b = detail::parse_number(line.substr(comma + 1));
    if (!a || !b) {
      if (line_no == 1 && !a && !b) continue;  // header
      throw err("non-numeric cell");
    }
    data.t.push_back(*a);
    data.y.push_back(*b);
  }
  if (data.size() == 0) throw Error(ErrorCode::EmptyDataset, "no data rows");
  return data;
}

inline Dataset load_csv_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_dataset(buf.str());
}

/// y_i = amplitude * exp(rate * t_i) + N(0, noise^2) on an even grid over
/// [0, t_max], with a fraction of points displaced by +/- outlier_size.
/// Fixed seed gives identical data.
inline Dataset synthetic_exp_dataset(std::size_t count, double amplitude, double rate, double t_max, double noise,
                                     double outlier_fraction, double outlier_size, std::uint64_t seed) {
  detail::require(count >= 1, ErrorCode::EmptyDataset, "dataset needs at least one point");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : t_max * static_cast<double>(i) / static_cast<double>(count - 1);
    double y = amplitude * std::exp(rate * t) + noise * gauss(rng);
    if (unit(rng) < outlier_fraction) y += unit(rng) < 0.5 ? -outlier_size : outlier_size;
    data.t.push_back(t);
    data.y.push_back(y);
  }
  return data;
}

/// Residuals c_i(x) = x_1 * exp(x_2 * t_i) - y_i for x = (amplitude, rate).
inline SmoothMap make_exp_residual_map(const Dataset& data) {
  detail::require(data.size() >= 1 && data.t.size() == data.y.size(), ErrorCode::EmptyDataset,
                  "exponential fit needs at least one data point");
  const auto m = static_cast<Eigen::Index>(data.size());
  const Vector t = Eigen::Map<const Vector>(data.t.data(), m);
  const Vector y = Eigen::Map<const Vector>(data.y.data(), m);
  return SmoothMap(
      2, m,
      [t, y](const Vector& x) -> Vector { return (x[0] * (x[1] * t.array()).exp() - y.array()).matrix(); },
      [t](const Vector& x) -> Matrix {
        Matrix jac(t.size(), 2);
        const Eigen::ArrayXd e = (x[1] * t.array()).exp();
        jac.col(0) = e.matrix();
        jac.col(1) = (x[0] * t.array() * e).matrix();
        return jac;
      });
}

/// L1 robust exponential fit with a weighted-l1 penalty lambda * ||x||_1.
inline CompositeProblem make_exp_fit_problem(const Dataset& data, double lambda, std::string name = "exp_fit") {
  return CompositeProblem(make_exp_residual_map(data), ConvexOuter::l1(),
                          ConvexRegularizer::weighted_l1(Vector::Constant(2, lambda)), std::move(name));
}

namespace detail {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// c(x) = (10 (x2 - x1^2), 1 - x1)
inline SmoothMap rosenbrock_residuals() {
  return SmoothMap(
      2, 2, [](const Vector& x) { return vec({10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]}); },
      [](const Vector& x) {
        Matrix jac(2, 2);
        jac << -20.0 * x[0], 10.0, -1.0, 0.0;
        return jac;
      });
}

}  // namespace detail

/// Built-in test problems. Known optima are recorded only where the value is
/// forced analytically.
inline std::vector<CatalogEntry> load_catalog() {
  using detail::vec;
  std::vector<CatalogEntry> out;

  out.push_back({"rosenbrock_l1",
                 CompositeProblem(detail::rosenbrock_residuals(), ConvexOuter::l1(), ConvexRegularizer::zero(),
                                  "rosenbrock_l1"),
                 vec({-1.2, 1.0}), KnownOptimum{vec({1.0, 1.0}), 0.0, "both residuals vanish"}, std::nullopt});

  {
    // c(x) = 0.5 ||x - a||^2 with a = 0, h = identity
    const Vector a = Vector::Zero(2);
    SmoothMap c(
        2, 1, [a](const Vector& x) { return Vector::Constant(1, 0.5 * (x - a).squaredNorm()); },
        [a](const Vector& x) { return Matrix((x - a).transpose()); });
    out.push_back({"smooth_quadratic",
                   CompositeProblem(std::move(c), ConvexOuter::identity(), ConvexRegularizer::zero(), "smooth_quadratic"),
                   vec({1.0, -0.5}), KnownOptimum{a, 0.0, "f >= 0 with equality at a"}, std::nullopt});
  }

  {
    const Dataset data = synthetic_exp_dataset(30, 2.0, -1.3, 2.0, 0.01, 0.1, 1.5, 42);
    out.push_back({"l1_reg_exp_fit", make_exp_fit_problem(data, 0.01, "l1_reg_exp_fit"), vec({1.0, 0.0}),
                   std::nullopt, std::nullopt});
  }

  out.push_back({"boxed_gauss_newton",
                 CompositeProblem(detail::rosenbrock_residuals(), ConvexOuter::l2(),
                                  ConvexRegularizer::box(vec({-2.0, -2.0}), vec({0.5, 2.0})), "boxed_gauss_newton"),
                 vec({-1.2, 1.0}),
                 KnownOptimum{vec({0.5, 0.25}), 0.5, "f >= 1 - x1 >= 0.5 on the box, equality at (0.5, 0.25)"},
                 std::nullopt});

  {
    SmoothMap c(
        1, 1, [](const Vector& x) { return Vector::Constant(1, x[0]); },
        [](const Vector&) { return Matrix::Constant(1, 1, 1.0); });
    out.push_back({"unbounded_linear",
                   CompositeProblem(std::move(c), ConvexOuter::identity(), ConvexRegularizer::zero(), "unbounded_linear"),
                   vec({0.0}), std::nullopt, std::nullopt});
  }

  {
    // c(x) = (sin x1, sin x2): ||c(x)-c(x')|| <= ||x-x'||, Jacobian 1-Lipschitz,
    // h = ||.||_1 is sqrt(2)-Lipschitz in l2.
    SmoothMap c(
        2, 2, [](const Vector& x) { return vec({std::sin(x[0]), std::sin(x[1])}); },
        [](const Vector& x) {
          Matrix jac = Matrix::Zero(2, 2);
          jac(0, 0) = std::cos(x[0]);
          jac(1, 1) = std::cos(x[1]);
          return jac;
        });
    out.push_back({"sine_l1", CompositeProblem(std::move(c), ConvexOuter::l1(), ConvexRegularizer::zero(), "sine_l1"),
                   vec({0.7, -0.4}), KnownOptimum{vec({0.0, 0.0}), 0.0, "sine residuals vanish at 0"},
                   LipschitzData{1.0, 1.0, std::sqrt(2.0), 0.0}});
  }

  {
    // max(x1 - 1, -x1 - 1, x2^2 - x1) over an l2 ball
    SmoothMap c(
        2, 3, [](const Vector& x) { return vec({x[0] - 1.0, -x[0] - 1.0, x[1] * x[1] - x[0]}); },
        [](const Vector& x) {
          Matrix jac(3, 2);
          jac << 1.0, 0.0, -1.0, 0.0, -1.0, 2.0 * x[1];
          return jac;
        });
    out.push_back({"ball_minimax",
                   CompositeProblem(std::move(c), ConvexOuter::max_coordinate(),
                                    ConvexRegularizer::ball(vec({0.0, 0.0}), 2.0, NormKind::L2), "ball_minimax"),
                   vec({0.5, 1.0}), std::nullopt, std::nullopt});
  }

  {
    // Chebyshev (linf) fit of a line through three points, weighted l1 penalty
    SmoothMap c(
        2, 3, [](const Vector& x) { return vec({x[0] - 1.0, x[0] + x[1] - 2.0, x[0] + 2.0 * x[1] - 4.0}); },
        [](const Vector&) {
          Matrix jac(3, 2);
          jac << 1.0, 0.0, 1.0, 1.0, 1.0, 2.0;
          return jac;
        });
    out.push_back({"linf_line_fit",
                   CompositeProblem(std::move(c), ConvexOuter::linf(), ConvexRegularizer::zero(), "linf_line_fit"),
                   vec({0.0, 0.0}), std::nullopt, std::nullopt});
  }
  return out;
}

inline std::optional<CatalogEntry> find_catalog_entry(std::string_view name) {
  for (auto& e : load_catalog())
    if (e.name == name) return e;
  return std::nullopt;
}

}  // namespace ccopt
