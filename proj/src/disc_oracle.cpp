#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "sqz/estimate.hpp"
#include "sqz/kernels.hpp"

namespace sqz {

namespace {

int pow2_at_least(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct Tables {
  std::unordered_map<long, kernels::CircleTable> cache;
  const kernels::CircleTable& get(int n, int degree) {
    long key = static_cast<long>(n) * 64 + degree;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, kernels::make_circle_table(n, degree)).first;
    return it->second;
  }
};

struct Disc {
  std::vector<double> zr, zi, wr, wi;
  void set_s(double s) {
    zr[1] = s;
    wr[1] = s;
  }
};

}  // namespace

// Random polynomial discs through (1, 0) with f'(0) = s (1, 1) inside
// {|w| < 1, |w z^m| < 1}, certified on the circle by a Bernstein bound:
// a nonnegative trigonometric polynomial of degree D satisfies
// sup <= max_k T(theta_k) / (1 - (pi D / N)^2 / 2) on N equispaced samples.
DiscOracleResult disc_oracle(int m, std::int64_t count, std::uint64_t seed, int max_degree) {
  if (m < 1) throw ValidationError("m must be at least 1");
  if (max_degree < 1 || max_degree > 16) throw ValidationError("disc degree must lie in [1, 16]");
  DiscOracleResult res;
  res.m = m;
  res.bound = std::sqrt(m / 2.0);
  res.min_alpha = kInf;
  res.worst_coefficient_slack = -kInf;
  Tables tables;
  std::int64_t attempt = 0;
  while (res.discs < count && attempt < 4 * count + 1000) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(attempt++)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> deg_dist(1, max_degree);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    const int d = deg_dist(rng);
    const double sa = std::pow(10.0, -3 * u01(rng)) / m, sb = std::pow(10.0, -3 * u01(rng));
    Disc disc;
    disc.zr.assign(d + 1, 0.0);
    disc.zi.assign(d + 1, 0.0);
    disc.wr.assign(d + 1, 0.0);
    disc.wi.assign(d + 1, 0.0);
    disc.zr[0] = 1.0;
    for (int j = 2; j <= d; ++j) {
      disc.zr[j] = sa * g(rng) / j;
      disc.zi[j] = sa * g(rng) / j;
      disc.wr[j] = sb * g(rng) / j;
      disc.wi[j] = sb * g(rng) / j;
    }
    const int D = d * (m + 1);
    const auto& coarse = tables.get(std::max(32, pow2_at_least(4 * D)), d);
    const int nf = std::max(64, pow2_at_least(8 * D));
    const auto& fine = tables.get(nf, d);
    auto sup = [&](const kernels::CircleTable& t) {
      return kernels::omega2_sup(t, {disc.zr, disc.zi}, {disc.wr, disc.wi}, m);
    };
    auto coarse_ok = [&](double s) {
      disc.set_s(s);
      auto r = sup(coarse);
      return r.w_sq < 1 && r.wzm_sq < 1;
    };
    bool ok0 = false;
    for (int shrink = 0; shrink < 6 && !(ok0 = coarse_ok(0.0)); ++shrink)
      for (int j = 2; j <= d; ++j) {
        disc.zr[j] *= 0.5;
        disc.zi[j] *= 0.5;
        disc.wr[j] *= 0.5;
        disc.wi[j] *= 0.5;
      }
    if (!ok0) {
      ++res.rejected;
      continue;
    }
    double lo = 0, hi = 1;
    for (int it = 0; it < 24; ++it) {
      double mid = 0.5 * (lo + hi);
      (coarse_ok(mid) ? lo : hi) = mid;
    }
    const double pid = std::numbers::pi / nf;
    const double fw = 1 - (pid * d) * (pid * d) / 2, fq = 1 - (pid * D) * (pid * D) / 2;
    double s = lo;
    bool certified = false;
    kernels::Omega2Sup r;
    for (int it = 0; it < 60 && s > 0; ++it) {
      disc.set_s(s);
      r = sup(fine);
      double cw = r.w_sq / fw * (1 + 1e-12), cq = r.wzm_sq / fq * (1 + 1e-12);
      if (cw <= 1 && cq <= 1) {
        certified = true;
        break;
      }
      s *= 0.995;
    }
    if (!certified || !(s > 0)) {
      ++res.rejected;
      continue;
    }
    ++res.discs;
    res.min_alpha = std::min(res.min_alpha, 1 / s);
    cplx b2 = d >= 2 ? cplx(disc.wr[2], disc.wi[2]) : cplx(0.0);
    double supw = std::sqrt(r.w_sq / fw * (1 + 1e-12)), supq = std::sqrt(r.wzm_sq / fq * (1 + 1e-12));
    double slack = std::max(std::abs(b2 + static_cast<double>(m) * s * s) - supq, std::abs(b2) - supw);
    res.worst_coefficient_slack = std::max(res.worst_coefficient_slack, slack);
  }
  return res;
}

}  // namespace sqz
