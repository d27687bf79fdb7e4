#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"

using namespace ccopt;
using fixtures::vec;

TEST(Catalog, RequiredEntriesPresent) {
  for (const char* name : {"rosenbrock_l1", "smooth_quadratic", "l1_reg_exp_fit", "boxed_gauss_newton",
                           "unbounded_linear"})
    EXPECT_TRUE(find_catalog_entry(name).has_value()) << name;
  EXPECT_FALSE(find_catalog_entry("nope").has_value());
}

TEST(Catalog, RosenbrockOptimum) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  EXPECT_EQ(e.x0, vec({-1.2, 1.0}));
  EXPECT_EQ(eval_f(e.problem, e.known_optimum->x).value(), 0.0);
}

TEST(Catalog, SmoothQuadraticStationaryAtCenter) {
  const auto e = *find_catalog_entry("smooth_quadratic");
  EXPECT_LE(stationarity_measure(e.problem, vec({0.0, 0.0})), 1e-8);
}

TEST(Catalog, UnboundedLinearWolfe) {
  const auto e = *find_catalog_entry("unbounded_linear");
  const ModelState m = linearize(e.problem, e.x0);
  EXPECT_EQ(wolfe_bisect(m, Vector::Constant(1, -1.0), {}).status, LineSearchStatus::UnboundedBelow);
}

TEST(Catalog, EntryInvariants) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (const auto& e : load_catalog()) {
    EXPECT_TRUE(eval_f(e.problem, e.x0).is_finite()) << e.name;
    for (int i = 0; i < 5; ++i) {
      Vector x = e.x0;
      for (auto& xi : x) xi += gauss(rng);
      EXPECT_LE(check_jacobian_fd(e.problem.c(), x), 1e-4) << e.name;
    }
    if (e.known_optimum) {
      EXPECT_LE(stationarity_measure(e.problem, e.known_optimum->x), 1e-6) << e.name;
      EXPECT_NEAR(eval_f(e.problem, e.known_optimum->x).value(), e.known_optimum->f, 1e-12) << e.name;
    }
  }
}

TEST(Csv, TwoRows) {
  const Dataset d = parse_csv_dataset("0,1\n1,2.7");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.t[1], 1.0);
  EXPECT_EQ(d.y[1], 2.7);
}

TEST(Csv, HeaderAndCrlf) {
  const Dataset d = parse_csv_dataset("t,y\r\n0,1\r\n\r\n2,3\r\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.y[1], 3.0);
}

TEST(Csv, NonNumericCellReportsLine) {
  try {
    parse_csv_dataset("0,abc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  try {
    parse_csv_dataset("t,y\n0,1\n2,x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Csv, WrongColumnCount) { EXPECT_THROW(parse_csv_dataset("0,1\n1,2,3\n"), Error); }

TEST(Csv, EmptyAndMissing) {
  try {
    parse_csv_dataset("t,y\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDataset);
  }
  try {
    load_csv_dataset("/nonexistent/data.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Csv, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "ccopt_test_data.csv";
  std::ofstream(path) << "t,y\n0,2\n0.5,1.1\n";
  const Dataset d = load_csv_dataset(path.string());
  EXPECT_EQ(d.size(), 2u);
  std::filesystem::remove(path);
}

TEST(ExpResidual, ValuesAtUnitAmplitudeZeroRate) {
  const Dataset d = parse_csv_dataset("0,1\n1,2.5\n2,-1");
  const SmoothMap c = make_exp_residual_map(d);
  EXPECT_EQ(c.eval(vec({1.0, 0.0})), vec({0.0, -1.5, 2.0}));
}

TEST(ExpResidual, JacobianRows) {
  const Dataset d = parse_csv_dataset("0.5,1\n2,3");
  const SmoothMap c = make_exp_residual_map(d);
  const Vector x = vec({1.5, -0.7});
  const Matrix jac = c.jacobian(x);
  for (int i = 0; i < 2; ++i) {
    const double e = std::exp(x[1] * d.t[static_cast<std::size_t>(i)]);
    EXPECT_DOUBLE_EQ(jac(i, 0), e);
    EXPECT_DOUBLE_EQ(jac(i, 1), x[0] * d.t[static_cast<std::size_t>(i)] * e);
  }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 10; ++i) EXPECT_LE(check_jacobian_fd(c, vec({gauss(rng), gauss(rng)})), 1e-5);
}

TEST(ExpResidual, EmptyDatasetThrows) { EXPECT_THROW(make_exp_residual_map(Dataset{}), Error); }

TEST(Synthetic, SeedDeterminesData) {
  const Dataset a = synthetic_exp_dataset(20, 2.0, -1.0, 2.0, 0.01, 0.2, 1.0, 9);
  const Dataset b = synthetic_exp_dataset(20, 2.0, -1.0, 2.0, 0.01, 0.2, 1.0, 9);
  const Dataset c = synthetic_exp_dataset(20, 2.0, -1.0, 2.0, 0.01, 0.2, 1.0, 10);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(a.y, c.y);
}

TEST(ExpFit, RecoversParametersDespiteOutliers) {
  const auto e = *find_catalog_entry("l1_reg_exp_fit");
  const RunResult run = run_trust_region(e.problem, e.x0, {}, HessianModel::zero(2));
  EXPECT_EQ(run.reason, TerminationReason::Stationary);
  EXPECT_NEAR(run.x[0], 2.0, 0.05);
  EXPECT_NEAR(run.x[1], -1.3, 0.05);
}
