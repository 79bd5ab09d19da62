// SPDX-License-Identifier: Apache-2.0

#include "argsim/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "argsim/common.hpp"

namespace argsim::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* lookup(std::string_view name) {
  if (name == "scalar") return &scalar_ops;
#if defined(__x86_64__) || defined(__i386__)
  if (name == "avx2") {
    if (!cpu_has_avx2()) throw Error("simd backend 'avx2' not supported on this CPU");
    return &avx2_ops;
  }
#endif
  throw Error("unknown simd backend: " + std::string(name));
}

const Ops* select_default() {
  if (const char* env = std::getenv("ARGSIM_SIMD")) return lookup(env);
  if (cpu_has_avx2()) {
#if defined(__x86_64__) || defined(__i386__)
    return &avx2_ops;
#endif
  }
  return &scalar_ops;
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (!ops) {
    ops = select_default();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

void force_backend(std::string_view name) {
  g_active.store(lookup(name), std::memory_order_release);
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out{"scalar"};
  if (cpu_has_avx2()) out.emplace_back("avx2");
  return out;
}

}  // namespace argsim::kernels
