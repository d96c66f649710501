#include "morphtyp/linear_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "morphtyp/errors.hpp"
#include "test_util.hpp"

namespace morphtyp {
namespace {

using testing::TempDir;

TEST(IncompleteBeta, KnownIdentities) {
  // I_x(1,1) = x
  for (double x : {0.1, 0.25, 0.5, 0.9}) {
    EXPECT_NEAR(regularized_incomplete_beta(1, 1, x), x, 1e-12);
  }
  // symmetry: I_x(a,b) = 1 - I_{1-x}(b,a)
  EXPECT_NEAR(regularized_incomplete_beta(2.5, 1.5, 0.3),
              1.0 - regularized_incomplete_beta(1.5, 2.5, 0.7), 1e-12);
  // I_{1/2}(a,a) = 1/2
  EXPECT_NEAR(regularized_incomplete_beta(3.0, 3.0, 0.5), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(regularized_incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(regularized_incomplete_beta(2, 3, 1.0), 1.0);
  EXPECT_THROW(regularized_incomplete_beta(0, 1, 0.5), NumericError);
}

// Frozen two-sided t quantiles: t_{0.025} at 1 and 20 degrees of freedom.
TEST(StudentT, MatchesTabulatedQuantiles) {
  EXPECT_NEAR(student_t_two_sided_p(12.7062047364, 1), 0.05, 1e-8);
  EXPECT_NEAR(student_t_two_sided_p(2.0859634390, 20), 0.05, 1e-8);
  EXPECT_NEAR(student_t_two_sided_p(1.0, 1), 0.5, 1e-12);  // Cauchy
}

TEST(StudentT, LimitsAndMonotonicity) {
  EXPECT_DOUBLE_EQ(student_t_two_sided_p(0.0, 10), 1.0);
  EXPECT_LT(student_t_two_sided_p(50.0, 10), 1e-10);
  EXPECT_DOUBLE_EQ(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 10), 0.0);
  double prev = 1.0;
  for (double t = 0.1; t < 20.0; t += 0.1) {
    double p = student_t_two_sided_p(t, 7);
    EXPECT_LT(p, prev);
    prev = p;
  }
  EXPECT_THROW(student_t_two_sided_p(1.0, 0), NumericError);
}

PredictorTable exact_table(int n, bool with_noise, unsigned seed, double sigma = 0.1) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  PredictorTable table;
  table.predictor_names = {"x1", "x2"};
  table.response_names = {"y"};
  for (int i = 0; i < n; ++i) {
    PredictorRow row;
    row.sentence_id = std::to_string(i + 1);
    double x1 = uni(rng), x2 = uni(rng);
    row.predictors["x1"] = x1;
    row.predictors["x2"] = x2;
    row.responses["y"] = 3.0 * x1 - 2.0 * x2 + (with_noise ? noise(rng) : 0.0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

TEST(Ols, ExactFitRecoversCoefficients) {
  PredictorTable table = exact_table(50, false, 1);
  FitOptions options;
  options.standardize = false;
  LinearModelFit fit = fit_linear_model(table, "y", options);
  ASSERT_EQ(fit.names.size(), 2u);
  EXPECT_NEAR(fit.coefficients[0], 3.0, 1e-9);
  EXPECT_NEAR(fit.coefficients[1], -2.0, 1e-9);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(fit.p_values[0], 0.0);  // exact fit: infinite t
}

TEST(Ols, ResidualsOrthogonalToPredictors) {
  PredictorTable table = exact_table(200, true, 2);
  LinearModelFit fit = fit_linear_model(table, "y");
  // reconstruct residuals from the standardized fit
  std::vector<double> mean(2, 0.0), sd(2, 0.0);
  for (const PredictorRow& r : table.rows) {
    mean[0] += r.predictors.at("x1");
    mean[1] += r.predictors.at("x2");
  }
  mean[0] /= table.rows.size();
  mean[1] /= table.rows.size();
  for (const PredictorRow& r : table.rows) {
    sd[0] += std::pow(r.predictors.at("x1") - mean[0], 2);
    sd[1] += std::pow(r.predictors.at("x2") - mean[1], 2);
  }
  sd[0] = std::sqrt(sd[0] / (table.rows.size() - 1));
  sd[1] = std::sqrt(sd[1] / (table.rows.size() - 1));
  double dot1 = 0.0, dot2 = 0.0;
  for (const PredictorRow& r : table.rows) {
    double z1 = (r.predictors.at("x1") - mean[0]) / sd[0];
    double z2 = (r.predictors.at("x2") - mean[1]) / sd[1];
    double pred = fit.intercept + fit.coefficients[0] * z1 + fit.coefficients[1] * z2;
    double resid = r.responses.at("y") - pred;
    dot1 += resid * z1;
    dot2 += resid * z2;
  }
  EXPECT_NEAR(dot1, 0.0, 1e-8 * table.rows.size());
  EXPECT_NEAR(dot2, 0.0, 1e-8 * table.rows.size());
}

// Standardization moves coefficients but not t statistics or p values.
TEST(Ols, TAndPInvariantUnderStandardization) {
  PredictorTable table = exact_table(120, true, 3);
  FitOptions raw;
  raw.standardize = false;
  LinearModelFit fit_raw = fit_linear_model(table, "y", raw);
  LinearModelFit fit_std = fit_linear_model(table, "y");
  ASSERT_EQ(fit_raw.names, fit_std.names);
  for (std::size_t i = 0; i < fit_raw.names.size(); ++i) {
    EXPECT_NE(fit_raw.coefficients[i], fit_std.coefficients[i]);
    EXPECT_NEAR(fit_raw.t_statistics[i], fit_std.t_statistics[i], 1e-9);
    EXPECT_NEAR(fit_raw.p_values[i], fit_std.p_values[i], 1e-9);
  }
  EXPECT_NEAR(fit_raw.r_squared, fit_std.r_squared, 1e-12);
}

TEST(Ols, DropsConstantColumnsAndReportsThem) {
  PredictorTable table = exact_table(40, true, 4);
  table.predictor_names.push_back("const_col");
  for (PredictorRow& row : table.rows) row.predictors["const_col"] = 7.5;
  LinearModelFit fit = fit_linear_model(table, "y");
  ASSERT_EQ(fit.dropped_constant.size(), 1u);
  EXPECT_EQ(fit.dropped_constant[0], "const_col");
  EXPECT_EQ(fit.names.size(), 2u);
}

TEST(Ols, RankDeficiencyNamesCollinearPredictors) {
  PredictorTable table = exact_table(40, true, 5);
  table.predictor_names.push_back("x1_copy");
  for (PredictorRow& row : table.rows) row.predictors["x1_copy"] = 2.0 * row.predictors["x1"];
  try {
    fit_linear_model(table, "y");
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("rank deficient"), std::string::npos);
    EXPECT_TRUE(msg.find("x1") != std::string::npos);
  }
}

TEST(Ols, DropCollinearRefitsWithoutAliasedColumns) {
  PredictorTable table = exact_table(40, true, 5);
  table.predictor_names.push_back("x1_copy");
  for (PredictorRow& row : table.rows) row.predictors["x1_copy"] = 2.0 * row.predictors["x1"];
  FitOptions options;
  options.drop_collinear = true;
  LinearModelFit fit = fit_linear_model(table, "y", options);
  ASSERT_EQ(fit.dropped_collinear.size(), 1u);
  EXPECT_EQ(fit.names.size(), 2u);
  // one of the aliased pair survives; the model still explains the data
  EXPECT_GT(fit.r_squared, 0.9);
}

TEST(Ols, RequiresEnoughRows) {
  PredictorTable table = exact_table(3, false, 6);
  EXPECT_THROW(fit_linear_model(table, "y"), NumericError);
  EXPECT_THROW(fit_linear_model(exact_table(10, false, 7), "zzz"), InputError);
}

// Monte-Carlo calibration: a pure-noise predictor should rarely be
// significant, a planted strong one almost always.
TEST(Ols, MonteCarloCalibration) {
  int null_nonsig = 0, strong_sig = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937 rng(1000 + trial);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    PredictorTable table;
    table.predictor_names = {"x1", "x2"};
    table.response_names = {"y"};
    for (int i = 0; i < 200; ++i) {
      PredictorRow row;
      row.sentence_id = std::to_string(i);
      double x1 = uni(rng), x2 = uni(rng);
      row.predictors["x1"] = x1;
      row.predictors["x2"] = x2;
      row.responses["y"] = 1.0 * x1 + 0.0 * x2 + noise(rng);
      table.rows.push_back(std::move(row));
    }
    LinearModelFit fit = fit_linear_model(table, "y");
    std::vector<SignificantPredictor> sig = significant_predictors(fit, 0.05);
    bool x1_sig = false, x2_sig = false;
    for (const SignificantPredictor& s : sig) {
      if (s.name == "x1") x1_sig = true;
      if (s.name == "x2") x2_sig = true;
    }
    if (x1_sig) ++strong_sig;
    if (!x2_sig) ++null_nonsig;
  }
  EXPECT_GE(strong_sig, 95);
  EXPECT_GE(null_nonsig, 90);
}

TEST(SignificantPredictors, RankedByAbsTWithSigns) {
  PredictorTable table = exact_table(200, true, 8);
  LinearModelFit fit = fit_linear_model(table, "y");
  std::vector<SignificantPredictor> sig = significant_predictors(fit, 0.05);
  ASSERT_EQ(sig.size(), 2u);
  EXPECT_EQ(sig[0].name, "x1");  // |coef| 3 vs 2 on comparable scales
  EXPECT_EQ(sig[0].sign, 1);
  EXPECT_EQ(sig[1].name, "x2");
  EXPECT_EQ(sig[1].sign, -1);
  EXPECT_GE(std::fabs(sig[0].t), std::fabs(sig[1].t));

  // alpha 0 excludes everything except p==0 cases; Bonferroni shrinks alpha
  std::vector<SignificantPredictor> none = significant_predictors(fit, 1e-300);
  EXPECT_TRUE(none.empty() || none[0].p == 0.0);
}

TEST(PredictorTableIo, CsvRoundTripAndRowExclusion) {
  TempDir dir;
  std::vector<PredictorRow> rows(3);
  rows[0].sentence_id = "1";
  rows[0].predictors = {{"a", 1.0}, {"b", 2.0}};
  rows[0].responses = {{"bleu", 50.0}, {"chrf", 60.0}};
  rows[1].sentence_id = "2";
  rows[1].predictors = {{"a", 3.0}};  // missing b
  rows[1].responses = {{"bleu", 10.0}, {"chrf", 20.0}};
  rows[2].sentence_id = "3";
  rows[2].predictors = {{"a", 4.0}, {"b", 5.0}};
  rows[2].responses = {{"bleu", 70.0}, {"chrf", 80.0}};

  std::vector<ExcludedRow> excluded;
  PredictorTable table = build_table(rows, {"a", "b"}, {"bleu", "chrf"}, &excluded);
  EXPECT_EQ(table.rows.size(), 2u);
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_EQ(excluded[0].sentence_id, "2");
  EXPECT_EQ(excluded[0].missing, "b");

  table.save_csv(dir.file("t.csv"));
  PredictorTable loaded = PredictorTable::load_csv(dir.file("t.csv"));
  EXPECT_EQ(loaded.predictor_names, table.predictor_names);
  EXPECT_EQ(loaded.response_names, table.response_names);
  ASSERT_EQ(loaded.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(loaded.rows[1].predictors.at("b"), 5.0);
  EXPECT_DOUBLE_EQ(loaded.rows[1].responses.at("chrf"), 80.0);
}

TEST(SignificanceGrid, CsvRoundTrip) {
  TempDir dir;
  SignificanceGrid grid;
  grid.systems = {"sysA:bleu", "sysA:chrf"};
  grid.predictors = {"synthesis", "word.count"};
  grid.cells["synthesis"]["sysA:bleu"] = -3.5;
  grid.cells["word.count"]["sysA:chrf"] = 2.25;
  std::string csv = grid.to_csv();
  testing::write_text(dir.file("g.csv"), csv);
  SignificanceGrid loaded = SignificanceGrid::load_csv(dir.file("g.csv"));
  EXPECT_EQ(loaded.systems, grid.systems);
  EXPECT_EQ(loaded.predictors, grid.predictors);
  EXPECT_DOUBLE_EQ(loaded.cells.at("synthesis").at("sysA:bleu"), -3.5);
  EXPECT_EQ(loaded.cells.count("word.count"), 1u);
}

}  // namespace
}  // namespace morphtyp
