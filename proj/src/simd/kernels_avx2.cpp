// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and only entered after a
// runtime CPU check. exp/log follow the Cephes double-precision rational approximations.

#include <immintrin.h>

#include <cmath>

#include "gsqg/simd/kernels.hpp"

namespace gsqg::simd::detail {
namespace {

inline __m256d polevl(__m256d x, const double* c, int degree) {
  __m256d r = _mm256_set1_pd(c[0]);
  for (int i = 1; i <= degree; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
  return r;
}

inline __m256d p1evl(__m256d x, const double* c, int degree) {
  __m256d r = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
  for (int i = 1; i < degree; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
  return r;
}

// Valid for finite positive x.
inline __m256d log_pd(__m256d x) {
  static constexpr double P[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                                 4.70579119878881725854E0,  1.44989225341610930846E1,
                                 1.79368678507819816313E1,  7.70838733755885391666E0};
  static constexpr double Q[] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                                 8.29875266912776603211E1, 7.11544750618563894466E1,
                                 2.31251620126765340583E1};
  const __m256i bits = _mm256_castpd_si256(x);
  // exponent field as a double via the 2^52 magic constant
  const __m256i ebits = _mm256_or_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x4330000000000000LL));
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(ebits), _mm256_set1_pd(4503599627370496.0 + 1022.0));
  const __m256i mbits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                        _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mbits);
  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, _mm256_set1_pd(1.0)));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), _mm256_set1_pd(1.0));
  const __m256d z = _mm256_mul_pd(m, m);
  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, polevl(m, P, 5)), p1evl(m, Q, 5)));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

inline __m256d exp_pd(__m256d x) {
  static constexpr double P[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                 9.99999999999999999910E-1};
  static constexpr double Q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                 2.27265548208155028766E-1, 2.00000000000000000009E0};
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(708.0));
  const __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(1.42860682030941723212E-6), x);
  const __m256d xx = _mm256_mul_pd(x, x);
  const __m256d pp = _mm256_mul_pd(x, polevl(xx, P, 2));
  const __m256d qq = polevl(xx, Q, 3);
  __m256d r = _mm256_div_pd(pp, _mm256_sub_pd(qq, pp));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));
  const __m128i n32 = _mm256_cvtpd_epi32(px);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(r, _mm256_castsi256_pd(n64));
}

struct RampOut {
  __m256d chi;
  __m256d dchi;  // derivative with respect to t
};

inline RampOut ramp_pd(__m256d t, double floor, bool want_derivative) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d x = _mm256_mul_pd(_mm256_sub_pd(t, _mm256_set1_pd(floor)), _mm256_set1_pd(1.0 / (1.0 - floor)));
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(1e-3)), _mm256_set1_pd(1.0 - 1e-3));
  const __m256d omx = _mm256_sub_pd(one, xc);
  const __m256d a = _mm256_sub_pd(_mm256_div_pd(one, xc), _mm256_div_pd(one, omx));
  const __m256d s = _mm256_div_pd(one, _mm256_add_pd(one, exp_pd(a)));
  const __m256d below = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LE_OQ);
  const __m256d above = _mm256_cmp_pd(x, one, _CMP_GE_OQ);
  RampOut out;
  out.chi = _mm256_blendv_pd(_mm256_blendv_pd(s, one, above), _mm256_setzero_pd(), below);
  if (want_derivative) {
    const __m256d sc = _mm256_div_pd(one, _mm256_add_pd(one, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), a))));
    const __m256d q = _mm256_add_pd(_mm256_div_pd(one, _mm256_mul_pd(xc, xc)), _mm256_div_pd(one, _mm256_mul_pd(omx, omx)));
    __m256d d = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(s, sc), q), _mm256_set1_pd(1.0 / (1.0 - floor)));
    out.dchi = _mm256_andnot_pd(_mm256_or_pd(below, above), d);
  } else {
    out.dchi = _mm256_setzero_pd();
  }
  return out;
}

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

// Copies the trailing partial block into padded buffers whose extra lanes carry zero weight.
struct Tail {
  alignas(32) double x[4], y[4], vx[4], vy[4];
  Tail(const SourceView& s, std::size_t start, Vec2 t) {
    for (std::size_t l = 0; l < 4; ++l) {
      const std::size_t j = start + l;
      const bool live = j < s.n;
      x[l] = live ? s.x[j] : t.x + 1.0;
      y[l] = live ? s.y[j] : t.y;
      vx[l] = live ? s.vx[j] : 0.0;
      vy[l] = live ? s.vy[j] : 0.0;
    }
  }
};

template <bool Gradient>
Vec2 kernel_sum(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s) {
  const bool mollified = k.epsilon > 0.0;
  const double cut = mollified ? k.chi_floor * k.epsilon : 0.0;
  const __m256d tx = _mm256_set1_pd(t.x), ty = _mm256_set1_pd(t.y);
  const __m256d pref = _mm256_set1_pd(k.c_alpha / (2.0 * k.alpha));
  const __m256d malpha = _mm256_set1_pd(-k.alpha);
  const __m256d cut2 = _mm256_set1_pd(cut * cut);
  const __m256d eps2 = _mm256_set1_pd(k.epsilon * k.epsilon);
  const __m256d inv_eps = _mm256_set1_pd(mollified ? 1.0 / k.epsilon : 0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d ax = _mm256_setzero_pd(), ay = _mm256_setzero_pd();

  auto block = [&](const double* px, const double* py, const double* pvx, const double* pvy) {
    const __m256d dx = _mm256_sub_pd(tx, _mm256_loadu_pd(px));
    const __m256d dy = _mm256_sub_pd(ty, _mm256_loadu_pd(py));
    __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d dead = _mm256_or_pd(_mm256_cmp_pd(r2, _mm256_setzero_pd(), _CMP_EQ_OQ),
                                      _mm256_cmp_pd(r2, cut2, _CMP_LE_OQ));
    if (_mm256_movemask_pd(dead) == 0xF) return;
    r2 = _mm256_blendv_pd(r2, one, dead);
    const __m256d p = exp_pd(_mm256_mul_pd(malpha, log_pd(r2)));  // r^{-2 alpha}
    __m256d w;
    if constexpr (!Gradient) {
      w = _mm256_mul_pd(pref, p);
      if (mollified) {
        const __m256d inside = _mm256_cmp_pd(r2, eps2, _CMP_LT_OQ);
        if (_mm256_movemask_pd(inside) != 0) {
          const RampOut c = ramp_pd(_mm256_mul_pd(_mm256_sqrt_pd(r2), inv_eps), k.chi_floor, false);
          w = _mm256_mul_pd(w, _mm256_blendv_pd(one, c.chi, inside));
        }
      }
    } else {
      const __m256d r = _mm256_sqrt_pd(r2);
      __m256d kp = _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(-k.c_alpha), p), r);
      if (mollified) {
        const __m256d inside = _mm256_cmp_pd(r2, eps2, _CMP_LT_OQ);
        if (_mm256_movemask_pd(inside) != 0) {
          const RampOut c = ramp_pd(_mm256_mul_pd(r, inv_eps), k.chi_floor, true);
          const __m256d moll = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_mul_pd(c.dchi, inv_eps), pref), p,
                                               _mm256_mul_pd(c.chi, kp));
          kp = _mm256_blendv_pd(kp, moll, inside);
        }
      }
      const __m256d proj = _mm256_fmadd_pd(dx, _mm256_set1_pd(dir.x), _mm256_mul_pd(dy, _mm256_set1_pd(dir.y)));
      w = _mm256_div_pd(_mm256_mul_pd(kp, proj), r);
    }
    w = _mm256_andnot_pd(dead, w);
    ax = _mm256_fmadd_pd(w, _mm256_loadu_pd(pvx), ax);
    ay = _mm256_fmadd_pd(w, _mm256_loadu_pd(pvy), ay);
  };

  std::size_t j = 0;
  for (; j + 4 <= s.n; j += 4) block(s.x + j, s.y + j, s.vx + j, s.vy + j);
  if (j < s.n) {
    Tail tail(s, j, t);
    block(tail.x, tail.y, tail.vx, tail.vy);
  }
  return {hsum(ax), hsum(ay)};
}

}  // namespace

Vec2 velocity_sum_avx2(const KernelParams& k, Vec2 t, const SourceView& s) {
  return kernel_sum<false>(k, t, {}, s);
}

Vec2 gradient_sum_avx2(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s) {
  return kernel_sum<true>(k, t, dir, s);
}

Nearest nearest_avx2(Vec2 t, const double* x, const double* y, std::size_t n) {
  const __m256d tx = _mm256_set1_pd(t.x), ty = _mm256_set1_pd(t.y);
  __m256d best = _mm256_set1_pd(INFINITY);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(tx, _mm256_loadu_pd(x + j));
    const __m256d dy = _mm256_sub_pd(ty, _mm256_loadu_pd(y + j));
    const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double bv[4], bi[4];
  _mm256_store_pd(bv, best);
  _mm256_store_pd(bi, best_idx);
  Nearest out{INFINITY, 0};
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(bi[l]);
    if (bv[l] < out.d2 || (bv[l] == out.d2 && li < out.index)) out = {bv[l], li};
  }
  for (; j < n; ++j) {
    // scalar tail uses the same rounding as the vector lanes
    const double dx = t.x - x[j], dy = t.y - y[j];
    const double d2 = std::fma(dx, dx, dy * dy);
    if (d2 < out.d2) out = {d2, j};
  }
  return out;
}

}  // namespace gsqg::simd::detail
