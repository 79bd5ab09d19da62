// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "argsim/common.hpp"
#include "argsim/kernels.hpp"

using namespace argsim;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 2.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * (rng.unit() - 0.5);
  return v;
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

TEST_CASE("scalar kernels compute the textbook values") {
  kernels::force_backend("scalar");
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, -5.0, 6.0};
  CHECK(kernels::dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
  CHECK(kernels::sum(a.data(), 3) == doctest::Approx(6.0));
  CHECK(kernels::sqdist(a.data(), b.data(), 3) == doctest::Approx(9.0 + 49.0 + 9.0));
  CHECK(kernels::sumsqdev(a.data(), 3, 2.0) == doctest::Approx(2.0));
  std::vector<double> y{1.0, 1.0, 1.0};
  kernels::axpy(y.data(), 2.0, a.data(), 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 7.0);
}

TEST_CASE("every available backend matches the scalar reference") {
  Rng rng(20240517);
  // lengths cover empty, sub-lane, full lanes and ragged tails
  const std::size_t lengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 300, 601};
  for (const std::string& backend : kernels::available_backends()) {
    CAPTURE(backend);
    for (std::size_t n : lengths) {
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);
      const double mean = n ? 0.25 : 0.0;

      kernels::force_backend("scalar");
      const double ref_dot = kernels::dot(a.data(), b.data(), n);
      const double ref_sum = kernels::sum(a.data(), n);
      const double ref_sqd = kernels::sqdist(a.data(), b.data(), n);
      const double ref_dev = kernels::sumsqdev(a.data(), n, mean);
      auto ref_y = b;
      kernels::axpy(ref_y.data(), 1.5, a.data(), n);

      kernels::force_backend(backend);
      CHECK(close_rel(kernels::dot(a.data(), b.data(), n), ref_dot, 1e-12));
      CHECK(close_rel(kernels::sum(a.data(), n), ref_sum, 1e-12));
      CHECK(close_rel(kernels::sqdist(a.data(), b.data(), n), ref_sqd, 1e-12));
      CHECK(close_rel(kernels::sumsqdev(a.data(), n, mean), ref_dev, 1e-12));
      auto y = b;
      kernels::axpy(y.data(), 1.5, a.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(y[i], ref_y[i], 1e-12));
    }
  }
  kernels::force_backend("scalar");
}

TEST_CASE("unknown backend is rejected") {
  CHECK_THROWS_AS(kernels::force_backend("sse9"), Error);
  kernels::force_backend("scalar");
}

TEST_CASE("misaligned views behave the same as aligned ones") {
  Rng rng(7);
  const auto base = random_vec(rng, 130);
  for (const std::string& backend : kernels::available_backends()) {
    kernels::force_backend(backend);
    for (std::size_t off = 0; off < 4; ++off) {
      const double* a = base.data() + off;
      const double* b = base.data() + off + 13;
      const std::size_t n = 100;
      kernels::force_backend("scalar");
      const double ref = kernels::dot(a, b, n);
      kernels::force_backend(backend);
      CHECK(close_rel(kernels::dot(a, b, n), ref, 1e-12));
    }
  }
  kernels::force_backend("scalar");
}
