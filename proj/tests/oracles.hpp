// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. Everything here
// is deliberately written by direct enumeration or textbook formulas, not by
// reusing the library's code paths.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace oracle {

struct Prf {
  double precision = 0.0, recall = 0.0, f = 0.0;
};

// ROUGE family by explicit enumeration of units. Lengths are expected to be
// small (<= ~10); complexity is exponential where that is the honest thing.
Prf rouge_n(std::span<const std::string> ref, std::span<const std::string> cand, int n, double beta);
Prf rouge_l(std::span<const std::string> ref, std::span<const std::string> cand, double beta);
Prf rouge_w(std::span<const std::string> ref, std::span<const std::string> cand, double weight,
            double beta);
Prf rouge_s_star(std::span<const std::string> ref, std::span<const std::string> cand, double beta);
Prf rouge_su_star(std::span<const std::string> ref, std::span<const std::string> cand, double beta);

double ngram_cosine(std::span<const std::string> a, std::span<const std::string> b, int max_order);

// multiset intersection size by pairwise marking
std::size_t multiset_intersection(const std::vector<std::pair<std::string, int>>& a,
                                  const std::vector<std::pair<std::string, int>>& b);

// dense solve of (X'X + alpha I) w = X'y (centered when fit_intercept) by
// Gaussian elimination with partial pivoting; returns weights + intercept
struct RidgeSolution {
  std::vector<double> weights;
  double intercept = 0.0;
};
RidgeSolution ridge_normal_equations(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y, double alpha,
                                     bool fit_intercept);

// epsilon-SVR dual solved by projected gradient on the 2n box variables with
// exact projection onto the sum constraint; returns predictions at the
// given query points
struct SvrOracleResult {
  std::vector<double> beta;
  double bias = 0.0;
};
SvrOracleResult svr_projected_gradient(const std::vector<std::vector<double>>& X,
                                       const std::vector<double>& y, double C, double gamma,
                                       double epsilon, std::size_t max_iter = 400000);
double svr_oracle_predict(const SvrOracleResult& sol, const std::vector<std::vector<double>>& X,
                          double gamma, const std::vector<double>& query);

double pearson_naive(std::span<const double> a, std::span<const double> b);
double rmse_naive(std::span<const double> a, std::span<const double> b);

// Student-t CDF by adaptive Simpson quadrature of the density
double t_cdf_quadrature(double t, double df);

}  // namespace oracle
