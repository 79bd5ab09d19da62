// SPDX-License-Identifier: Apache-2.0
//
// Regression stack: per-fold standardization, closed-form ridge, RBF
// epsilon-SVR solved by SMO (maximal violating pair), inner grid search,
// nested k-fold cross-validation, Pearson r / RMSE, and the paired t-test
// with its Student-t CDF.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace argsim::ml {

/// Dense row-major matrix. Rows are observations.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Matrix take_rows(std::span<const std::size_t> idx) const;
};

/// Column-wise (x - mean) / sd with population sd, fitted on training rows
/// only. Zero-variance columns map to 0.
struct Standardizer {
  std::vector<double> mean, sd;
  std::vector<bool> zero_var;

  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  void apply_row(const double* in, double* out) const;
};

struct HyperParams {
  double alpha = 1.0;                       // ridge
  double C = 1.0, gamma = 0.1, epsilon = 0.1;  // svr
  std::string to_string(bool svr) const;
};

enum class ModelKind { ridge, svr };

std::string_view kind_name(ModelKind k);
ModelKind kind_from_name(std::string_view name);

struct RegressionModel {
  ModelKind kind = ModelKind::ridge;
  HyperParams params;

  // ridge
  std::vector<double> weights;
  double intercept = 0.0;

  // svr: dual coefficients beta_i = alpha_i - alpha_i^* over the kept
  // support rows, plus the shared bias.
  Matrix support_vectors;
  std::vector<double> dual_coefs;
  double bias = 0.0;
  bool converged = true;

  std::optional<Standardizer> standardizer;
  std::string fingerprint;  // feature layout; checked at predict time
};

/// Solves (Xc'Xc + alpha I) w = Xc'y on mean-centered data (the intercept is
/// not penalized). fit_intercept=false uses X and y as given.
RegressionModel ridge_fit(const Matrix& X, std::span<const double> y, double alpha,
                          bool fit_intercept = true);

struct SvrOptions {
  double tol = 1e-3;
  std::size_t max_iter = 0;  // 0 = 10 * n passes (n ~ one pass per row pair sweep)
};

/// Epsilon-SVR with k(u,v) = exp(-gamma * |u-v|^2), solved by SMO on the
/// 2n-variable dual; pair selection is the maximal violating pair, so the
/// solve is deterministic for a fixed row order.
RegressionModel svr_fit(const Matrix& X, std::span<const double> y, double C, double gamma,
                        double epsilon, const SvrOptions& opts = {});

/// Standardize-then-fit wrapper used by every cross-validation path.
RegressionModel train_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                            const HyperParams& hp, std::string fingerprint = {},
                            bool standardize = true);

std::vector<double> predict(const RegressionModel& model, const Matrix& X);
double predict_row(const RegressionModel& model, const double* row, std::size_t n_cols);

double pearson_r(std::span<const double> a, std::span<const double> b);
double rmse(std::span<const double> a, std::span<const double> b);

struct GridSearchResult {
  HyperParams best;
  std::size_t best_index = 0;
  std::vector<double> mean_rmse;  // one per grid point, declaration order
};

/// Mean inner-CV RMSE per grid point; argmin wins, first declared wins ties.
/// Inner folds are index-striped over the given row order and each inner
/// training split refits its own standardizer.
GridSearchResult grid_search(ModelKind kind, const Matrix& X, std::span<const double> y,
                             std::span<const HyperParams> grid, int inner_k = 3);

struct FoldResult {
  std::optional<double> r;  // nullopt when the fold's targets are constant
  double rmse = 0.0;
  HyperParams chosen;
  std::vector<std::size_t> test_indices;
};

struct CVReport {
  std::vector<FoldResult> folds;
  std::optional<double> mean_r;  // over folds with defined r
  double mean_rmse = 0.0;
  std::uint64_t seed = 0;
  int outer_k = 0;

  std::vector<double> fold_rmses() const;
};

/// Nested cross-validation. Fold assignment is keyed to the stable ids (rows
/// are ordered by id, then shuffled with the seed), so permuting the input
/// rows does not change the report.
CVReport nested_cv(ModelKind kind, const Matrix& X, std::span<const double> y,
                   std::span<const std::string> ids, std::span<const HyperParams> grid,
                   int outer_k = 10, std::uint64_t seed = 0, int inner_k = 3,
                   unsigned jobs = 1);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p = 1.0;  // two-sided
};

/// Paired t-test with sample sd (n-1). Degenerate all-equal differences are
/// an input error.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

/// Student-t CDF via the regularized incomplete beta function.
double t_cdf(double t, double df);

/// Default grids (log-spaced; the SVR gamma axis is divided by the feature
/// count so the RBF width tracks dimensionality).
std::vector<HyperParams> default_ridge_grid();
std::vector<HyperParams> default_svr_grid(std::size_t n_features);

struct GridSpec {
  std::vector<double> ridge_alphas{0.01, 0.1, 1.0, 10.0, 100.0};
  std::vector<double> svr_C{0.1, 1.0, 10.0, 100.0};
  std::vector<double> svr_gamma{0.001, 0.01, 0.1, 1.0};
  bool svr_gamma_scale_by_features = true;
  std::vector<double> svr_epsilon{0.05, 0.1, 0.2};

  std::vector<HyperParams> build(ModelKind kind, std::size_t n_features) const;
};

}  // namespace argsim::ml
