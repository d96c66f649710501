#include "morphtyp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericError("incomplete beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (dof <= 0.0) throw NumericError("student t: degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  double x = dof / (dof + t * t);
  return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

void PredictorTable::save_csv(const std::string& path) const {
  std::vector<std::string> header{"sentence_id"};
  header.insert(header.end(), predictor_names.begin(), predictor_names.end());
  header.insert(header.end(), response_names.begin(), response_names.end());
  std::string out = csv_join(header) + "\n";
  for (const PredictorRow& row : rows) {
    std::vector<std::string> fields{row.sentence_id};
    for (const std::string& name : predictor_names) {
      fields.push_back(format_number(row.predictors.at(name)));
    }
    for (const std::string& name : response_names) {
      fields.push_back(format_number(row.responses.at(name)));
    }
    out += csv_join(fields) + "\n";
  }
  write_file(path, out);
}

PredictorTable PredictorTable::load_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InputError("empty predictor table: " + path);
  std::vector<std::string> header = csv_split(lines[0]);
  if (header.empty() || header[0] != "sentence_id") {
    throw ParseError(path, 1, "first column must be sentence_id");
  }
  PredictorTable table;
  // Responses are the trailing bleu/chrf/comet columns when present; all
  // other columns are predictors.
  static const std::set<std::string> kResponses = {"bleu", "chrf", "comet"};
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (kResponses.count(header[c])) table.response_names.push_back(header[c]);
    else table.predictor_names.push_back(header[c]);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cols = csv_split(lines[i]);
    if (cols.size() != header.size()) throw ParseError(path, i + 1, "column count mismatch");
    PredictorRow row;
    row.sentence_id = cols[0];
    for (std::size_t c = 1; c < header.size(); ++c) {
      double v;
      try {
        v = std::stod(cols[c]);
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "bad number in column " + header[c]);
      }
      if (kResponses.count(header[c])) row.responses[header[c]] = v;
      else row.predictors[header[c]] = v;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PredictorTable build_table(const std::vector<PredictorRow>& rows,
                           const std::vector<std::string>& predictor_names,
                           const std::vector<std::string>& response_names,
                           std::vector<ExcludedRow>* excluded) {
  PredictorTable table;
  table.predictor_names = predictor_names;
  table.response_names = response_names;
  for (const PredictorRow& row : rows) {
    std::string missing;
    for (const std::string& name : predictor_names) {
      if (!row.predictors.count(name)) {
        missing = name;
        break;
      }
    }
    if (missing.empty()) {
      for (const std::string& name : response_names) {
        if (!row.responses.count(name)) {
          missing = name;
          break;
        }
      }
    }
    if (!missing.empty()) {
      if (excluded) excluded->push_back({row.sentence_id, missing});
      continue;
    }
    table.rows.push_back(row);
  }
  return table;
}

LinearModelFit fit_linear_model(const PredictorTable& table, const std::string& response,
                                const FitOptions& options) {
  if (std::find(table.response_names.begin(), table.response_names.end(), response) ==
      table.response_names.end()) {
    throw InputError("fit_linear_model: unknown response " + response);
  }
  const std::size_t n = table.rows.size();

  // Drop zero-variance predictors up front; they are unidentifiable next
  // to the intercept.
  LinearModelFit fit;
  fit.response = response;
  std::vector<std::string> active;
  for (const std::string& name : table.predictor_names) {
    double first = table.rows.empty() ? 0.0 : table.rows[0].predictors.at(name);
    bool constant = true;
    for (const PredictorRow& row : table.rows) {
      if (row.predictors.at(name) != first) {
        constant = false;
        break;
      }
    }
    if (constant) fit.dropped_constant.push_back(name);
    else active.push_back(name);
  }
  if (active.empty()) throw NumericError("fit_linear_model: no non-constant predictors");

  Eigen::MatrixXd x;
  Eigen::VectorXd y(n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  while (true) {
    const std::size_t k = active.size();
    if (k == 0) throw NumericError("fit_linear_model: no non-constant predictors");
    if (n <= k + 1) {
      throw NumericError("fit_linear_model: need n > k + 1 (n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + ")");
    }
    x.resize(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      for (std::size_t j = 0; j < k; ++j) x(i, j + 1) = table.rows[i].predictors.at(active[j]);
      y(i) = table.rows[i].responses.at(response);
    }
    if (options.standardize) {
      for (std::size_t j = 1; j <= k; ++j) {
        double mean = x.col(j).mean();
        double var = (x.col(j).array() - mean).square().sum() / static_cast<double>(n - 1);
        double sd = std::sqrt(var);
        x.col(j) = (x.col(j).array() - mean) / sd;  // sd > 0: constants were dropped
      }
    }
    qr.compute(x);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) == k + 1) break;

    // Columns the pivoting pushed past the numerical rank are aliased.
    std::vector<std::string> collinear;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index r = qr.rank(); r < perm.size(); ++r) {
      Eigen::Index col = perm(r);
      if (col == 0) continue;
      collinear.push_back(active[static_cast<std::size_t>(col) - 1]);
    }
    if (!options.drop_collinear || collinear.empty()) {
      std::string joined;
      for (const std::string& name : collinear) {
        if (!joined.empty()) joined += ", ";
        joined += name;
      }
      throw NumericError("fit_linear_model: design matrix is rank deficient; collinear: " +
                         joined);
    }
    std::sort(collinear.begin(), collinear.end());
    for (const std::string& name : collinear) {
      active.erase(std::remove(active.begin(), active.end(), name), active.end());
      fit.dropped_collinear.push_back(name);
    }
  }
  const std::size_t k = active.size();

  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd residuals = y - x * beta;
  const double rss = residuals.squaredNorm();
  const std::size_t dof = n - k - 1;
  const double sigma2 = rss / static_cast<double>(dof);

  // (X^T X)^{-1} from the decomposition: X P = Q R.
  Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k + 1, k + 1).triangularView<Eigen::Upper>();
  Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(k + 1, k + 1));
  Eigen::MatrixXd xtx_inv_permuted = r_inv * r_inv.transpose();
  Eigen::MatrixXd p = qr.colsPermutation();
  Eigen::MatrixXd xtx_inv = p * xtx_inv_permuted * p.transpose();

  const double y_mean = y.mean();
  const double tss = (y.array() - y_mean).square().sum();
  fit.n = n;
  fit.dof = dof;
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  fit.intercept = beta(0);
  fit.names = active;
  for (std::size_t j = 1; j <= k; ++j) {
    double se = std::sqrt(sigma2 * xtx_inv(j, j));
    double coef = beta(j);
    double t = se > 0.0 ? coef / se
                        : (coef == 0.0 ? 0.0 : std::numeric_limits<double>::infinity() *
                                                   (coef > 0 ? 1.0 : -1.0));
    fit.coefficients.push_back(coef);
    fit.standard_errors.push_back(se);
    fit.t_statistics.push_back(t);
    fit.p_values.push_back(student_t_two_sided_p(t, static_cast<double>(dof)));
  }
  return fit;
}

std::string LinearModelFit::to_json_string(double alpha) const {
  nlohmann::json j;
  j["response"] = response;
  j["n"] = n;
  j["dof"] = dof;
  j["r_squared"] = r_squared;
  j["intercept"] = intercept;
  j["dropped_constant"] = dropped_constant;
  j["dropped_collinear"] = dropped_collinear;
  nlohmann::json preds = nlohmann::json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    nlohmann::json p;
    p["name"] = names[i];
    p["coefficient"] = coefficients[i];
    p["standard_error"] = standard_errors[i];
    p["t"] = std::isfinite(t_statistics[i]) ? nlohmann::json(t_statistics[i])
                                            : nlohmann::json(nullptr);
    p["p"] = p_values[i];
    p["significant"] = p_values[i] < alpha;
    preds.push_back(std::move(p));
  }
  j["predictors"] = std::move(preds);
  return j.dump(2) + "\n";
}

std::vector<SignificantPredictor> significant_predictors(const LinearModelFit& fit, double alpha,
                                                         bool bonferroni) {
  if (fit.names.empty()) throw InputError("significant_predictors: empty fit");
  double cutoff = bonferroni ? alpha / static_cast<double>(fit.names.size()) : alpha;
  std::vector<SignificantPredictor> out;
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    if (fit.p_values[i] < cutoff) {
      SignificantPredictor sp;
      sp.name = fit.names[i];
      sp.coefficient = fit.coefficients[i];
      sp.t = fit.t_statistics[i];
      sp.p = fit.p_values[i];
      sp.sign = fit.coefficients[i] > 0 ? 1 : (fit.coefficients[i] < 0 ? -1 : 0);
      out.push_back(std::move(sp));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::fabs(a.t) > std::fabs(b.t);
  });
  return out;
}

std::string SignificanceGrid::to_csv() const {
  std::vector<std::string> header{"predictor"};
  header.insert(header.end(), systems.begin(), systems.end());
  std::string out = csv_join(header) + "\n";
  for (const std::string& pred : predictors) {
    std::vector<std::string> fields{pred};
    auto row = cells.find(pred);
    for (const std::string& sys : systems) {
      std::string cell;
      if (row != cells.end()) {
        auto it = row->second.find(sys);
        if (it != row->second.end()) cell = format_number(it->second);
      }
      fields.push_back(std::move(cell));
    }
    out += csv_join(fields) + "\n";
  }
  return out;
}

SignificanceGrid SignificanceGrid::load_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InputError("empty significance grid: " + path);
  std::vector<std::string> header = csv_split(lines[0]);
  if (header.empty() || header[0] != "predictor") {
    throw ParseError(path, 1, "first column must be predictor");
  }
  SignificanceGrid grid;
  grid.systems.assign(header.begin() + 1, header.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cols = csv_split(lines[i]);
    if (cols.size() != header.size()) throw ParseError(path, i + 1, "column count mismatch");
    grid.predictors.push_back(cols[0]);
    for (std::size_t c = 1; c < cols.size(); ++c) {
      if (cols[c].empty()) continue;
      try {
        grid.cells[cols[0]][header[c]] = std::stod(cols[c]);
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "bad t value: " + cols[c]);
      }
    }
  }
  return grid;
}

void add_to_grid(SignificanceGrid& grid, const std::string& system, const LinearModelFit& fit,
                 double alpha, bool bonferroni) {
  if (std::find(grid.systems.begin(), grid.systems.end(), system) == grid.systems.end()) {
    grid.systems.push_back(system);
  }
  for (const std::string& name : fit.names) {
    if (std::find(grid.predictors.begin(), grid.predictors.end(), name) ==
        grid.predictors.end()) {
      grid.predictors.push_back(name);
    }
  }
  for (const SignificantPredictor& sp : significant_predictors(fit, alpha, bonferroni)) {
    grid.cells[sp.name][system] = sp.t;
  }
}

}  // namespace morphtyp
