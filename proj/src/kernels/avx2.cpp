#include "sqz/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace sqz::kernels::avx2 {

namespace {

struct V2 {
  __m256d re, im;
};

inline V2 eval4(const CircleTable& t, Poly p, int k) {
  __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
  const std::size_t deg = p.re.size() - 1;
  for (std::size_t j = 0; j <= deg; ++j) {
    __m256d c = _mm256_loadu_pd(&t.c[j * t.n + k]);
    __m256d s = _mm256_loadu_pd(&t.s[j * t.n + k]);
    __m256d pr = _mm256_set1_pd(p.re[j]);
    __m256d pi = _mm256_set1_pd(p.im[j]);
    __m256d npi = _mm256_set1_pd(-p.im[j]);
    ar = _mm256_fmadd_pd(pr, c, ar);
    ar = _mm256_fmadd_pd(npi, s, ar);
    ai = _mm256_fmadd_pd(pr, s, ai);
    ai = _mm256_fmadd_pd(pi, c, ai);
  }
  return {ar, ai};
}

inline __m256d ipow4(__m256d x, int m) {
  __m256d r = _mm256_set1_pd(1.0);
  while (m) {
    if (m & 1) r = _mm256_mul_pd(r, x);
    x = _mm256_mul_pd(x, x);
    m >>= 1;
  }
  return r;
}

inline double hmax(__m256d v) {
  alignas(32) double b[4];
  _mm256_store_pd(b, v);
  return std::max(std::max(b[0], b[1]), std::max(b[2], b[3]));
}

}  // namespace

void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im) {
  int k = 0;
  for (; k + 4 <= t.n; k += 4) {
    V2 v = eval4(t, p, k);
    _mm256_storeu_pd(out_re + k, v.re);
    _mm256_storeu_pd(out_im + k, v.im);
  }
  for (; k < t.n; ++k) {
    double ar = 0, ai = 0;
    for (std::size_t j = 0; j < p.re.size(); ++j) {
      double c = t.c[j * t.n + k], s = t.s[j * t.n + k];
      ar = std::fma(p.re[j], c, ar);
      ar = std::fma(-p.im[j], s, ar);
      ai = std::fma(p.re[j], s, ai);
      ai = std::fma(p.im[j], c, ai);
    }
    out_re[k] = ar;
    out_im[k] = ai;
  }
}

Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m) {
  if (t.n % 4 != 0) return scalar::omega2_sup(t, z, w, m);
  __m256d mw = _mm256_setzero_pd(), mq = _mm256_setzero_pd();
  for (int k = 0; k < t.n; k += 4) {
    V2 zv = eval4(t, z, k);
    V2 wv = eval4(t, w, k);
    __m256d zz = _mm256_mul_pd(zv.re, zv.re);
    zz = _mm256_fmadd_pd(zv.im, zv.im, zz);
    __m256d ww = _mm256_mul_pd(wv.re, wv.re);
    ww = _mm256_fmadd_pd(wv.im, wv.im, ww);
    __m256d q = _mm256_mul_pd(ww, ipow4(zz, m));
    mw = _mm256_max_pd(mw, ww);
    mq = _mm256_max_pd(mq, q);
  }
  return {hmax(mw), hmax(mq)};
}

}  // namespace sqz::kernels::avx2
