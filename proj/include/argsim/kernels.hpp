// SPDX-License-Identifier: Apache-2.0
//
// Dense double-precision inner loops shared by the feature and regression
// code: dot products (cosine features, ridge normal equations), squared
// distances (RBF kernel rows), and the reductions behind standardization,
// Pearson r and RMSE.
//
// Each kernel has a scalar reference implementation (strict left-to-right
// accumulation, the semantics the tests pin down) and an AVX2/FMA variant.
// The backend is chosen once at runtime from CPU capabilities; the
// ARGSIM_SIMD environment variable ("scalar", "avx2") or force_backend()
// overrides the choice, which the equivalence tests use to compare variants.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace argsim::kernels {

struct Ops {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  // sum of (a[i] - mean)^2
  double (*sumsqdev)(const double* a, std::size_t n, double mean);
  // y[i] += alpha * x[i]
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
};

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(__i386__)
extern const Ops avx2_ops;
#endif

/// The active backend. First call selects: ARGSIM_SIMD override if set,
/// else the widest ISA the CPU supports.
const Ops& active();

/// Force a backend by name ("scalar", "avx2"). Throws argsim::Error for an
/// unknown or unsupported name. Intended for tests and the CLI --simd flag.
void force_backend(std::string_view name);

/// Backend names usable on this machine, reference backend first.
std::vector<std::string> available_backends();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline double sqdist(const double* a, const double* b, std::size_t n) { return active().sqdist(a, b, n); }
inline double sumsqdev(const double* a, std::size_t n, double mean) { return active().sumsqdev(a, n, mean); }
inline void axpy(double* y, double alpha, const double* x, std::size_t n) { active().axpy(y, alpha, x, n); }

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a.data(), b.data(), a.size());
}

}  // namespace argsim::kernels
