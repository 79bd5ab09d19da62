// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Plain left-to-right loops, compiled with
// -ffp-contract=off so the accumulation order is the written one. The other
// backends must match these within small relative tolerances but are not
// required to be bit-identical (vector lanes reassociate the sums).

#include "argsim/kernels.hpp"

namespace argsim::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sumsqdev_scalar(const double* a, std::size_t n, double mean) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - mean;
    acc += d * d;
  }
  return acc;
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops scalar_ops = {"scalar", dot_scalar, sum_scalar, sqdist_scalar, sumsqdev_scalar, axpy_scalar};

}  // namespace argsim::kernels
