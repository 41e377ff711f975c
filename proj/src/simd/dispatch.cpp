#include <atomic>
#include <cstdlib>
#include <cstring>

#include "gsqg/simd/kernels.hpp"

namespace gsqg::simd {
namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("GSQG_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool avx2_available() {
#if defined(GSQG_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available()) b = Backend::Scalar;
  current().store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

#if defined(GSQG_HAVE_AVX2_KERNELS)
#define GSQG_PICK(name, ...) \
  (b == Backend::Avx2 ? detail::name##_avx2(__VA_ARGS__) : detail::name##_scalar(__VA_ARGS__))
#else
#define GSQG_PICK(name, ...) detail::name##_scalar(__VA_ARGS__)
#endif

Vec2 velocity_sum(Backend b, const KernelParams& k, Vec2 t, const SourceView& s) {
  return GSQG_PICK(velocity_sum, k, t, s);
}

Vec2 gradient_sum(Backend b, const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s) {
  return GSQG_PICK(gradient_sum, k, t, dir, s);
}

Nearest nearest(Backend b, Vec2 t, const double* x, const double* y, std::size_t n) {
  return GSQG_PICK(nearest, t, x, y, n);
}

#undef GSQG_PICK

}  // namespace gsqg::simd
