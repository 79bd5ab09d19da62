// SPDX-License-Identifier: Apache-2.0

#include "argsim/ml.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "argsim/common.hpp"
#include "argsim/kernels.hpp"

namespace argsim::ml {

Matrix Matrix::take_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double* src = row(idx[i]);
    std::copy(src, src + cols, out.row(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer Standardizer::fit(const Matrix& X) {
  if (X.rows < 2) throw Error("standardizer: need at least 2 rows");
  Standardizer s;
  s.mean.resize(X.cols);
  s.sd.resize(X.cols);
  s.zero_var.resize(X.cols);
  std::vector<double> col(X.rows);
  for (std::size_t j = 0; j < X.cols; ++j) {
    for (std::size_t i = 0; i < X.rows; ++i) col[i] = X.at(i, j);
    const double m = kernels::sum(col.data(), col.size()) / static_cast<double>(X.rows);
    const double var = kernels::sumsqdev(col.data(), col.size(), m) / static_cast<double>(X.rows);
    s.mean[j] = m;
    s.sd[j] = std::sqrt(var);  // population sd
    s.zero_var[j] = (s.sd[j] == 0.0);
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  if (X.cols != mean.size()) throw Error("standardizer: column count mismatch");
  Matrix out(X.rows, X.cols);
  for (std::size_t i = 0; i < X.rows; ++i) apply_row(X.row(i), out.row(i));
  return out;
}

void Standardizer::apply_row(const double* in, double* out) const {
  for (std::size_t j = 0; j < mean.size(); ++j) {
    out[j] = zero_var[j] ? 0.0 : (in[j] - mean[j]) / sd[j];
  }
}

// ---------------------------------------------------------------------------
// Ridge

std::string_view kind_name(ModelKind k) { return k == ModelKind::ridge ? "ridge" : "svr"; }

ModelKind kind_from_name(std::string_view name) {
  if (name == "ridge") return ModelKind::ridge;
  if (name == "svr") return ModelKind::svr;
  throw Error("unknown model kind: " + std::string(name));
}

std::string HyperParams::to_string(bool svr) const {
  char buf[128];
  if (svr) {
    std::snprintf(buf, sizeof(buf), "C=%g;gamma=%g;epsilon=%g", C, gamma, epsilon);
  } else {
    std::snprintf(buf, sizeof(buf), "alpha=%g", alpha);
  }
  return buf;
}

namespace {

void check_finite(const Matrix& X, std::span<const double> y) {
  for (double v : X.data) {
    if (!std::isfinite(v)) throw Error("regression input contains non-finite feature value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error("regression input contains non-finite target value");
  }
}

// Cholesky solve of A x = b for symmetric positive definite A (in place).
std::vector<double> cholesky_solve(Matrix A, std::vector<double> b) {
  const std::size_t n = A.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = A.at(j, j) - kernels::dot(A.row(j), A.row(j), j);
    if (diag <= 0.0) throw Error("ridge normal equations are not positive definite");
    diag = std::sqrt(diag);
    A.at(j, j) = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      A.at(i, j) = (A.at(i, j) - kernels::dot(A.row(i), A.row(j), j)) / diag;
    }
  }
  // forward: L z = b
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = (b[i] - kernels::dot(A.row(i), b.data(), i)) / A.at(i, i);
  }
  // backward: L' x = z
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= A.at(k, i) * b[k];
    b[i] = acc / A.at(i, i);
  }
  return b;
}

}  // namespace

RegressionModel ridge_fit(const Matrix& X, std::span<const double> y, double alpha,
                          bool fit_intercept) {
  if (X.rows == 0 || X.cols == 0) throw Error("ridge: empty design matrix");
  if (X.rows != y.size()) throw Error("ridge: row/target count mismatch");
  if (!(alpha > 0.0)) throw Error("ridge: alpha must be positive");
  check_finite(X, y);

  const std::size_t n = X.rows, d = X.cols;
  std::vector<double> col_mean(d, 0.0);
  double y_mean = 0.0;
  if (fit_intercept) {
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += X.at(i, j);
      col_mean[j] = acc / static_cast<double>(n);
    }
    y_mean = kernels::sum(y.data(), n) / static_cast<double>(n);
  }

  // Transposed centered copy so the normal equations use contiguous dots.
  Matrix Xt(d, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) Xt.at(j, i) = X.at(i, j) - col_mean[j];
  }
  std::vector<double> yc(n);
  for (std::size_t i = 0; i < n; ++i) yc[i] = y[i] - y_mean;

  Matrix XtX(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const double v = kernels::dot(Xt.row(a), Xt.row(b), n);
      XtX.at(a, b) = v;
      XtX.at(b, a) = v;
    }
    XtX.at(a, a) += alpha;
  }
  std::vector<double> Xty(d);
  for (std::size_t a = 0; a < d; ++a) Xty[a] = kernels::dot(Xt.row(a), yc.data(), n);

  RegressionModel model;
  model.kind = ModelKind::ridge;
  model.params.alpha = alpha;
  model.weights = cholesky_solve(std::move(XtX), std::move(Xty));
  model.intercept = y_mean - kernels::dot(col_mean.data(), model.weights.data(), d);
  return model;
}

// ---------------------------------------------------------------------------
// Epsilon-SVR via SMO

namespace {

// Full RBF Gram matrix. Rows are standardized feature vectors.
Matrix rbf_gram(const Matrix& X, double gamma) {
  const std::size_t n = X.rows;
  Matrix K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = std::exp(-gamma * kernels::sqdist(X.row(i), X.row(j), X.cols));
      K.at(i, j) = k;
      K.at(j, i) = k;
    }
  }
  return K;
}

}  // namespace

RegressionModel svr_fit(const Matrix& X, std::span<const double> y, double C, double gamma,
                        double epsilon, const SvrOptions& opts) {
  if (X.rows == 0 || X.cols == 0) throw Error("svr: empty design matrix");
  if (X.rows != y.size()) throw Error("svr: row/target count mismatch");
  if (!(C > 0.0)) throw Error("svr: C must be positive");
  if (!(gamma > 0.0)) throw Error("svr: gamma must be positive");
  if (epsilon < 0.0) throw Error("svr: epsilon must be non-negative");
  check_finite(X, y);

  const std::size_t n = X.rows;
  const Matrix K = rbf_gram(X, gamma);

  // 2n-variable dual: t < n is the alpha side (label +1), t >= n the
  // alpha* side (label -1). Q(t,u) = s_t s_u K(t mod n, u mod n).
  const std::size_t N2 = 2 * n;
  std::vector<double> a(N2, 0.0);
  std::vector<double> G(N2);
  auto sgn = [n](std::size_t t) -> double { return t < n ? 1.0 : -1.0; };
  auto krow = [&](std::size_t t, std::size_t u) -> double { return K.at(t % n, u % n); };
  for (std::size_t t = 0; t < N2; ++t) {
    G[t] = t < n ? epsilon - y[t] : epsilon + y[t - n];
  }

  const double tol = opts.tol;
  std::size_t max_iter = opts.max_iter;
  if (max_iter == 0) {
    max_iter = std::clamp<std::size_t>(10 * n * n, 10000, 10000000);
  }

  bool converged = false;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // maximal violating pair
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    std::size_t i = N2, j = N2;
    for (std::size_t t = 0; t < N2; ++t) {
      const double s = sgn(t);
      const double v = -s * G[t];
      const bool in_up = (s > 0 && a[t] < C) || (s < 0 && a[t] > 0);
      const bool in_low = (s > 0 && a[t] > 0) || (s < 0 && a[t] < C);
      if (in_up && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    if (i == N2 || j == N2 || m_up - m_low < tol) {
      converged = true;
      break;
    }

    const double si = sgn(i), sj = sgn(j);
    const double old_ai = a[i], old_aj = a[j];
    const double kij = krow(i, j);
    if (si != sj) {
      double quad = 2.0 + 2.0 * (si * sj * kij);  // Q_ii + Q_jj + 2 Q_ij
      if (quad <= 0.0) quad = 1e-12;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0) {
        if (a[j] < 0) {
          a[j] = 0;
          a[i] = diff;
        }
      } else {
        if (a[i] < 0) {
          a[i] = 0;
          a[j] = -diff;
        }
      }
      if (diff > 0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else {
        if (a[j] > C) {
          a[j] = C;
          a[i] = C + diff;
        }
      }
    } else {
      double quad = 2.0 - 2.0 * (si * sj * kij);
      if (quad <= 0.0) quad = 1e-12;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else {
        if (a[j] < 0) {
          a[j] = 0;
          a[i] = sum;
        }
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else {
        if (a[i] < 0) {
          a[i] = 0;
          a[j] = sum;
        }
      }
    }

    const double dai = a[i] - old_ai;
    const double daj = a[j] - old_aj;
    for (std::size_t t = 0; t < N2; ++t) {
      const double st = sgn(t);
      G[t] += st * si * krow(t, i) * dai + st * sj * krow(t, j) * daj;
    }
  }

  // bias from the free variables; fall back to the midpoint of the KKT
  // interval when everything sits on a bound.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < N2; ++t) {
    const double s = sgn(t);
    const double yG = s * G[t];
    if (a[t] >= C) {
      if (s < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (a[t] <= 0) {
      if (s > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  RegressionModel model;
  model.kind = ModelKind::svr;
  model.params.C = C;
  model.params.gamma = gamma;
  model.params.epsilon = epsilon;
  model.bias = -rho;
  model.converged = converged;

  std::vector<std::size_t> sv;
  std::vector<double> beta(n);
  for (std::size_t t = 0; t < n; ++t) {
    beta[t] = a[t] - a[t + n];
    if (beta[t] != 0.0) sv.push_back(t);
  }
  model.support_vectors = X.take_rows(sv);
  model.dual_coefs.reserve(sv.size());
  for (std::size_t t : sv) model.dual_coefs.push_back(beta[t]);
  return model;
}

// ---------------------------------------------------------------------------
// Prediction

RegressionModel train_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                            const HyperParams& hp, std::string fingerprint, bool standardize) {
  Matrix Xs = X;
  std::optional<Standardizer> st;
  if (standardize) {
    st = Standardizer::fit(X);
    Xs = st->apply(X);
  }
  RegressionModel model = kind == ModelKind::ridge
                              ? ridge_fit(Xs, y, hp.alpha)
                              : svr_fit(Xs, y, hp.C, hp.gamma, hp.epsilon);
  model.params = hp;
  model.standardizer = std::move(st);
  model.fingerprint = std::move(fingerprint);
  return model;
}

double predict_row(const RegressionModel& model, const double* row, std::size_t n_cols) {
  std::vector<double> buf;
  const double* x = row;
  if (model.standardizer) {
    if (model.standardizer->mean.size() != n_cols) {
      throw Error("predict: feature count does not match the trained model");
    }
    buf.resize(n_cols);
    model.standardizer->apply_row(row, buf.data());
    x = buf.data();
  }
  if (model.kind == ModelKind::ridge) {
    if (model.weights.size() != n_cols) {
      throw Error("predict: feature count does not match the trained model");
    }
    return kernels::dot(model.weights.data(), x, n_cols) + model.intercept;
  }
  const Matrix& sv = model.support_vectors;
  if (sv.rows > 0 && sv.cols != n_cols) {
    throw Error("predict: feature count does not match the trained model");
  }
  double acc = model.bias;
  for (std::size_t s = 0; s < sv.rows; ++s) {
    acc += model.dual_coefs[s] *
           std::exp(-model.params.gamma * kernels::sqdist(sv.row(s), x, n_cols));
  }
  return acc;
}

std::vector<double> predict(const RegressionModel& model, const Matrix& X) {
  std::vector<double> out(X.rows);
  for (std::size_t i = 0; i < X.rows; ++i) out[i] = predict_row(model, X.row(i), X.cols);
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("pearson_r: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw Error("pearson_r: need at least 2 points");
  const double ma = kernels::sum(a.data(), n) / static_cast<double>(n);
  const double mb = kernels::sum(b.data(), n) / static_cast<double>(n);
  std::vector<double> ca(n), cb(n);
  for (std::size_t i = 0; i < n; ++i) {
    ca[i] = a[i] - ma;
    cb[i] = b[i] - mb;
  }
  const double va = kernels::dot(ca.data(), ca.data(), n);
  const double vb = kernels::dot(cb.data(), cb.data(), n);
  if (va == 0.0 || vb == 0.0) throw Error("pearson_r: undefined for zero-variance input");
  return kernels::dot(ca.data(), cb.data(), n) / std::sqrt(va * vb);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("rmse: length mismatch");
  if (a.empty()) throw Error("rmse: empty input");
  return std::sqrt(kernels::sqdist(a.data(), b.data(), a.size()) / static_cast<double>(a.size()));
}

// ---------------------------------------------------------------------------
// Grid search and nested CV

GridSearchResult grid_search(ModelKind kind, const Matrix& X, std::span<const double> y,
                             std::span<const HyperParams> grid, int inner_k) {
  if (grid.empty()) throw Error("grid_search: empty grid");
  if (inner_k < 2) throw Error("grid_search: inner_k must be >= 2");
  const std::size_t n = X.rows;

  GridSearchResult result;
  result.mean_rmse.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  if (n < 2 || grid.size() == 1) {  // nothing to select on
    result.best = grid[0];
    result.best_index = 0;
    return result;
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(inner_k), n);

  // index-striped folds over the caller's row order: deterministic, no RNG
  std::vector<std::vector<std::size_t>> fold_test(k), fold_train(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (i % k == f) fold_test[f].push_back(i);
      else fold_train[f].push_back(i);
    }
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (std::size_t f = 0; f < k; ++f) {
      Matrix Xtr = X.take_rows(fold_train[f]);
      std::vector<double> ytr;
      ytr.reserve(fold_train[f].size());
      for (std::size_t i : fold_train[f]) ytr.push_back(y[i]);
      RegressionModel model = train_model(kind, Xtr, ytr, grid[g]);
      Matrix Xte = X.take_rows(fold_test[f]);
      std::vector<double> yte;
      for (std::size_t i : fold_test[f]) yte.push_back(y[i]);
      total += rmse(predict(model, Xte), yte);
    }
    result.mean_rmse[g] = total / static_cast<double>(k);
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (result.mean_rmse[g] < result.mean_rmse[best]) best = g;  // strict: ties keep earlier
  }
  result.best = grid[best];
  result.best_index = best;
  return result;
}

std::vector<double> CVReport::fold_rmses() const {
  std::vector<double> out;
  out.reserve(folds.size());
  for (const auto& f : folds) out.push_back(f.rmse);
  return out;
}

CVReport nested_cv(ModelKind kind, const Matrix& X, std::span<const double> y,
                   std::span<const std::string> ids, std::span<const HyperParams> grid,
                   int outer_k, std::uint64_t seed, int inner_k, unsigned jobs) {
  const std::size_t n = X.rows;
  if (n != y.size() || n != ids.size()) throw Error("nested_cv: input length mismatch");
  if (outer_k < 2) throw Error("nested_cv: outer_k must be >= 2");
  if (n < static_cast<std::size_t>(outer_k)) throw Error("nested_cv: need at least outer_k rows");

  // fold assignment keyed to ids: sort by id, then seeded shuffle
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  for (std::size_t i = 1; i < n; ++i) {
    if (ids[order[i]] == ids[order[i - 1]]) {
      throw Error("nested_cv: duplicate id '" + ids[order[i]] + "'");
    }
  }
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t k = static_cast<std::size_t>(outer_k);
  std::vector<std::vector<std::size_t>> test_sets(k);
  const std::size_t base = n / k, rem = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < rem ? 1 : 0);
    test_sets[f].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }

  CVReport report;
  report.seed = seed;
  report.outer_k = outer_k;
  report.folds.resize(k);

  parallel_for(k, jobs, [&](std::size_t f) {
    std::vector<std::size_t> train;
    train.reserve(n - test_sets[f].size());
    for (std::size_t g = 0; g < k; ++g) {
      if (g == f) continue;
      for (std::size_t idx : test_sets[g]) train.push_back(idx);
    }

    Matrix Xtr = X.take_rows(train);
    std::vector<double> ytr;
    ytr.reserve(train.size());
    for (std::size_t i : train) ytr.push_back(y[i]);

    GridSearchResult gs = grid_search(kind, Xtr, ytr, grid, inner_k);
    RegressionModel model = train_model(kind, Xtr, ytr, gs.best);

    Matrix Xte = X.take_rows(test_sets[f]);
    std::vector<double> yte;
    for (std::size_t i : test_sets[f]) yte.push_back(y[i]);
    std::vector<double> pred = predict(model, Xte);

    FoldResult fr;
    fr.chosen = gs.best;
    fr.rmse = rmse(pred, yte);
    fr.test_indices = test_sets[f];
    const double vy = kernels::sumsqdev(yte.data(), yte.size(),
                                        kernels::sum(yte.data(), yte.size()) / yte.size());
    const double vp = kernels::sumsqdev(pred.data(), pred.size(),
                                        kernels::sum(pred.data(), pred.size()) / pred.size());
    if (yte.size() >= 2 && vy > 0.0 && vp > 0.0) {
      fr.r = pearson_r(pred, yte);
    }
    report.folds[f] = std::move(fr);
  });

  double rmse_total = 0.0, r_total = 0.0;
  int r_count = 0;
  for (const auto& f : report.folds) {
    rmse_total += f.rmse;
    if (f.r) {
      r_total += *f.r;
      ++r_count;
    }
  }
  report.mean_rmse = rmse_total / static_cast<double>(k);
  if (r_count > 0) report.mean_r = r_total / r_count;
  return report;
}

// ---------------------------------------------------------------------------
// Student t

namespace {

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15, kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
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
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_cdf(double t, double df) {
  if (df < 1.0) throw Error("t_cdf: degrees of freedom must be >= 1");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired_ttest: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw Error("paired_ttest: need at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = kernels::sum(d.data(), n) / static_cast<double>(n);
  const double ss = kernels::sumsqdev(d.data(), n, mean);
  if (ss == 0.0) throw Error("paired_ttest: zero-variance differences");
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));  // sample sd
  TTestResult res;
  res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  res.df = static_cast<int>(n) - 1;
  res.p = 2.0 * (1.0 - t_cdf(std::fabs(res.t), res.df));
  return res;
}

// ---------------------------------------------------------------------------
// Grids

std::vector<HyperParams> GridSpec::build(ModelKind kind, std::size_t n_features) const {
  std::vector<HyperParams> grid;
  if (kind == ModelKind::ridge) {
    for (double a : ridge_alphas) {
      HyperParams hp;
      hp.alpha = a;
      grid.push_back(hp);
    }
  } else {
    const double scale =
        svr_gamma_scale_by_features ? static_cast<double>(std::max<std::size_t>(n_features, 1)) : 1.0;
    for (double c : svr_C) {
      for (double g : svr_gamma) {
        for (double e : svr_epsilon) {
          HyperParams hp;
          hp.C = c;
          hp.gamma = g / scale;
          hp.epsilon = e;
          grid.push_back(hp);
        }
      }
    }
  }
  if (grid.empty()) throw Error("hyperparameter grid is empty");
  return grid;
}

std::vector<HyperParams> default_ridge_grid() { return GridSpec{}.build(ModelKind::ridge, 1); }

std::vector<HyperParams> default_svr_grid(std::size_t n_features) {
  return GridSpec{}.build(ModelKind::svr, n_features);
}

}  // namespace argsim::ml
