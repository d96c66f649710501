#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace morphtyp {

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with `dof` degrees of freedom,
// computed as I_{dof/(dof+t^2)}(dof/2, 1/2).
double student_t_two_sided_p(double t, double dof);

struct PredictorRow {
  std::string sentence_id;
  std::map<std::string, double> predictors;
  std::map<std::string, double> responses;  // metric name -> score
};

struct PredictorTable {
  std::vector<std::string> predictor_names;
  std::vector<std::string> response_names;
  std::vector<PredictorRow> rows;  // rectangular over the names above

  void save_csv(const std::string& path) const;
  static PredictorTable load_csv(const std::string& path);
};

struct ExcludedRow {
  std::string sentence_id;
  std::string missing;  // predictor or response that was absent
};

// Rectangular table over the requested predictor set; rows missing any
// value are excluded and logged.
PredictorTable build_table(const std::vector<PredictorRow>& rows,
                           const std::vector<std::string>& predictor_names,
                           const std::vector<std::string>& response_names,
                           std::vector<ExcludedRow>* excluded = nullptr);

struct FitOptions {
  bool standardize = true;  // z-score predictors; the response is untouched
  // Drop aliased predictor columns instead of erroring on rank
  // deficiency. The dropped names are recorded on the fit.
  bool drop_collinear = false;
};

struct LinearModelFit {
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_statistics;
  std::vector<double> p_values;
  double intercept = 0.0;
  std::size_t n = 0;
  std::size_t dof = 0;
  double r_squared = 0.0;
  std::string response;
  std::vector<std::string> dropped_constant;   // zero-variance columns
  std::vector<std::string> dropped_collinear;  // aliased columns (opt-in)

  std::string to_json_string(double alpha = 0.05) const;
};

// Ordinary least squares via a column-pivoted Householder QR. Throws
// NumericError when n <= k + 1 or the design matrix is rank deficient
// after constant columns are dropped (the collinear predictors are
// named), unless options.drop_collinear is set.
LinearModelFit fit_linear_model(const PredictorTable& table, const std::string& response,
                                const FitOptions& options = {});

struct SignificantPredictor {
  std::string name;
  double coefficient = 0.0;
  double t = 0.0;
  double p = 0.0;
  int sign = 0;  // sign of the coefficient
};

// Predictors with p < alpha, ranked by |t| descending. `bonferroni`
// divides alpha by the number of predictors tested.
std::vector<SignificantPredictor> significant_predictors(const LinearModelFit& fit,
                                                         double alpha = 0.05,
                                                         bool bonferroni = false);

// System-by-predictor significance overview (the shape of the
// significant-predictor figures): cell text is the signed t value for
// significant entries, blank otherwise.
struct SignificanceGrid {
  std::vector<std::string> systems;     // columns
  std::vector<std::string> predictors;  // rows
  // predictor -> system -> signed t (present only when significant)
  std::map<std::string, std::map<std::string, double>> cells;

  std::string to_csv() const;
  static SignificanceGrid load_csv(const std::string& path);
};

void add_to_grid(SignificanceGrid& grid, const std::string& system, const LinearModelFit& fit,
                 double alpha = 0.05, bool bonferroni = false);

}  // namespace morphtyp
