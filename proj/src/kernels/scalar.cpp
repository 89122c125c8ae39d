#include "sqz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqz::kernels {

CircleTable make_circle_table(int n, int max_degree) {
  CircleTable t;
  t.n = n;
  t.max_degree = max_degree;
  t.c.resize(static_cast<std::size_t>(n) * (max_degree + 1));
  t.s.resize(t.c.size());
  for (int j = 0; j <= max_degree; ++j)
    for (int k = 0; k < n; ++k) {
      // Reduce j*k mod n so high powers stay accurate.
      long r = (static_cast<long>(j) * k) % n;
      double a = 2 * std::numbers::pi * static_cast<double>(r) / n;
      t.c[static_cast<std::size_t>(j) * n + k] = std::cos(a);
      t.s[static_cast<std::size_t>(j) * n + k] = std::sin(a);
    }
  return t;
}

namespace scalar {

namespace {

inline void eval_one(const CircleTable& t, Poly p, int k, double& re, double& im) {
  double ar = 0, ai = 0;
  const std::size_t deg = p.re.size() - 1;
  for (std::size_t j = 0; j <= deg; ++j) {
    double c = t.c[j * t.n + k], s = t.s[j * t.n + k];
    ar = std::fma(p.re[j], c, ar);
    ar = std::fma(-p.im[j], s, ar);
    ai = std::fma(p.re[j], s, ai);
    ai = std::fma(p.im[j], c, ai);
  }
  re = ar;
  im = ai;
}

inline double ipow(double x, int m) {
  double r = 1;
  while (m) {
    if (m & 1) r = r * x;
    x = x * x;
    m >>= 1;
  }
  return r;
}

}  // namespace

void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im) {
  for (int k = 0; k < t.n; ++k) eval_one(t, p, k, out_re[k], out_im[k]);
}

Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m) {
  Omega2Sup r;
  for (int k = 0; k < t.n; ++k) {
    double zr, zi, wr, wi;
    eval_one(t, z, k, zr, zi);
    eval_one(t, w, k, wr, wi);
    double zz = zr * zr;
    zz = std::fma(zi, zi, zz);
    double ww = wr * wr;
    ww = std::fma(wi, wi, ww);
    double q = ww * ipow(zz, m);
    r.w_sq = std::max(r.w_sq, ww);
    r.wzm_sq = std::max(r.wzm_sq, q);
  }
  return r;
}

}  // namespace scalar
}  // namespace sqz::kernels
