#include "sqz/estimate.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_complex.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sqz/kernels.hpp"

namespace sqz {

LogRegion as_region(const ReinhardtDomain& d, std::string name) {
  LogRegion r;
  r.name = std::move(name);
  r.t_min = d.t_min();
  r.t_max = d.t_max();
  RadialProfile pr = d.profile();
  r.height = [pr](double t) { return pr.eval(t); };
  return r;
}

LogRegion ball_region() {
  LogRegion r;
  r.name = "ball";
  r.t_max = 0;
  r.height = [](double t) { return t >= 0 ? -kInf : 0.5 * std::log1p(-std::exp(2 * t)); };
  return r;
}

LogRegion bidisc_region() {
  LogRegion r;
  r.name = "bidisc";
  r.t_max = 0;
  r.height = [](double) { return 0.0; };
  return r;
}

LogRegion omega2_region(std::int64_t m) {
  LogRegion r;
  r.name = "omega2_m" + std::to_string(m);
  const double md = static_cast<double>(m);
  r.height = [md](double t) { return t == -kInf ? 0.0 : std::min(0.0, -md * t); };
  return r;
}

LogRegion omega1_region(std::int64_t m, double a, double b) {
  if (!(a > 0 && a < 1 && b > 1)) throw ValidationError("model annulus needs 0 < a < 1 < b");
  LogRegion r;
  r.name = "omega1_m" + std::to_string(m);
  r.t_min = std::log(a);
  r.t_max = std::log(b);
  const double md = static_cast<double>(m);
  r.height = [md](double t) { return std::min(0.0, -md * t); };
  return r;
}

double region_defect(const LogRegion& r, const PointC2& p) {
  double az = std::abs(p.z), aw = std::abs(p.w);
  double t = az == 0 ? -kInf : std::log(az);
  double range = t - r.t_max;
  if (r.t_min != -kInf) range = std::max(range, r.t_min - t);
  double lam = aw == 0 ? -kInf : std::log(aw);
  double h = r.height(t);
  double top = lam == -kInf ? -kInf : lam - h;
  if (h == -kInf) top = kInf;
  return std::max(range, top);
}

bool region_contains(const LogRegion& r, const PointC2& p) { return region_defect(r, p) < 0; }

namespace {

struct Sampler {
  kernels::CircleTable table;
  std::vector<double> zr, zi, wr, wi, cr, ci;
  Sampler(int n, int degree) : table(kernels::make_circle_table(n, degree)), zr(n), zi(n), wr(n), wi(n) {}

  void eval(const std::vector<cplx>& c, std::vector<double>& re, std::vector<double>& im) {
    cr.resize(c.size());
    ci.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      cr[j] = c[j].real();
      ci[j] = c[j].imag();
    }
    kernels::eval_on_circle(table, {cr, ci}, re.data(), im.data());
  }

  double defect(const LogRegion& r, const DiscCandidate& d) {
    eval(d.z, zr, zi);
    eval(d.w, wr, wi);
    double worst = -kInf;
    double turn = 0;
    const int n = table.n;
    for (int k = 0; k < n; ++k) {
      PointC2 q{{zr[k], zi[k]}, {wr[k], wi[k]}};
      worst = std::max(worst, region_defect(r, q));
      if (r.t_min != -kInf) {
        int k1 = (k + 1) % n;
        double a = std::atan2(zi[k1], zr[k1]) - std::atan2(zi[k], zr[k]);
        if (a > std::numbers::pi) a -= 2 * std::numbers::pi;
        if (a < -std::numbers::pi) a += 2 * std::numbers::pi;
        turn += a;
      }
    }
    if (r.t_min != -kInf && std::fabs(turn) > std::numbers::pi) worst = std::max(worst, 1.0);
    return worst;
  }
};

DiscCandidate make_disc(const PointC2& p, const Direction& xi, double s, const std::vector<cplx>& hz,
                        const std::vector<cplx>& hw, int degree) {
  DiscCandidate d;
  d.degree = degree;
  d.z.assign(degree + 1, 0.0);
  d.w.assign(degree + 1, 0.0);
  d.z[0] = p.z;
  d.w[0] = p.w;
  d.z[1] = xi.z * s;
  d.w[1] = xi.w * s;
  for (int j = 2; j <= degree; ++j) {
    d.z[j] = hz[j - 2];
    d.w[j] = hw[j - 2];
  }
  d.alpha = 1 / s;
  return d;
}

}  // namespace

double disc_defect(const LogRegion& r, const DiscCandidate& disc, int samples) {
  Sampler sm(samples, disc.degree);
  return sm.defect(r, disc);
}

KobayashiEstimate kobayashi_upper_search(const LogRegion& r, const PointC2& p, const Direction& xi,
                                         const SearchOptions& opt) {
  if (opt.degree < 1) throw ValidationError("disc degree must be at least 1");
  if (opt.samples < 16) throw ValidationError("need at least 16 boundary samples");
  if (!(region_defect(r, p) < -opt.margin)) throw ValidationError("basepoint is not inside the region");
  const int d = opt.degree;
  const int nh = d - 1;
  Sampler sm(opt.samples, d);
  KobayashiEstimate out;

  auto defect_at = [&](double s, const std::vector<cplx>& hz, const std::vector<cplx>& hw) {
    return sm.defect(r, make_disc(p, xi, s, hz, hw, d));
  };
  auto max_feasible_s = [&](const std::vector<cplx>& hz, const std::vector<cplx>& hw, Sampler& smp) {
    double lo = 0, hi = 1;
    auto bad = [&](double s) { return !(smp.defect(r, make_disc(p, xi, s, hz, hw, d)) <= -opt.margin); };
    int guard = 0;
    while (!bad(hi) && guard++ < 200) {
      lo = hi;
      hi *= 2;
    }
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (bad(mid) ? hi : lo) = mid;
    }
    return lo;
  };

  std::vector<cplx> zero(nh, 0.0);
  double s0 = max_feasible_s(zero, zero, sm);
  double best_s = s0;
  std::vector<cplx> best_hz = zero, best_hw = zero;
  if (!(s0 > 0)) {
    out.fallback = true;
  } else {
    const double mu = 100.0;
    for (int rs = 0; rs < opt.restarts; ++rs) {
      std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(rs)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<double> x(1 + 4 * nh, 0.0);
      x[0] = s0 * (rs == 0 ? 1.0 : 0.5);
      if (rs > 0)
        for (int i = 1; i < static_cast<int>(x.size()); ++i) x[i] = 0.3 * s0 * g(rng);
      auto unpack = [&](const std::vector<double>& v, std::vector<cplx>& hz, std::vector<cplx>& hw) {
        hz.resize(nh);
        hw.resize(nh);
        for (int j = 0; j < nh; ++j) {
          hz[j] = {v[1 + 4 * j], v[2 + 4 * j]};
          hw[j] = {v[3 + 4 * j], v[4 + 4 * j]};
        }
      };
      std::vector<cplx> hz, hw;
      auto objective = [&](const std::vector<double>& v, double& dfc) {
        unpack(v, hz, hw);
        dfc = v[0] > 0 ? defect_at(v[0], hz, hw) : kInf;
        return -v[0] + mu * std::max(0.0, dfc + opt.margin);
      };
      double dfc;
      double fx = objective(x, dfc);
      std::vector<double> step(x.size(), 0.1 * s0);
      for (int it = 0; it < opt.budget; ++it) {
        int i = it % static_cast<int>(x.size());
        bool improved = false;
        for (double sign : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[i] += sign * step[i];
          double dy;
          double fy = objective(y, dy);
          if (fy < fx) {
            x = y;
            fx = fy;
            dfc = dy;
            improved = true;
            break;
          }
        }
        step[i] *= improved ? 2.0 : 0.5;
        if (dfc <= -opt.margin && x[0] > best_s) {
          best_s = x[0];
          unpack(x, best_hz, best_hw);
        }
        out.trace.push_back({rs, it, fx, -dfc});
      }
    }
  }

  DiscCandidate disc = make_disc(p, xi, best_s > 0 ? best_s : 1.0, best_hz, best_hw, d);
  if (best_s > 0) {
    Sampler fine(opt.samples * 10, d);
    double fd = fine.defect(r, disc);
    if (!(fd <= -opt.margin)) {
      // Shrink the linear term until the finer sampling also passes.
      double s = best_s;
      for (int it = 0; it < 200 && !(fd <= -opt.margin); ++it) {
        s *= 0.999;
        disc = make_disc(p, xi, s, best_hz, best_hw, d);
        fd = fine.defect(r, disc);
      }
      if (!(fd <= -opt.margin)) {
        s = max_feasible_s(zero, zero, fine);
        disc = make_disc(p, xi, s, zero, zero, d);
        fd = fine.defect(r, disc);
        out.fallback = true;
      }
      best_s = s;
    }
    out.feasibility_margin = -fd;
  }
  out.disc = disc;
  double value = best_s > 0 ? 1 / best_s : kInf;
  out.bound = {Quantity::Kobayashi, Side::Upper, value, p, xi, false,
               "kobayashi_upper_search on " + r.name + ": degree " + std::to_string(d) + " disc, " +
                   std::to_string(opt.samples) + " samples, seed " + std::to_string(opt.seed) +
                   (out.fallback ? ", linear-disc fallback" : "")};
  return out;
}

cplx FunctionCandidate::value(const PointC2& q) const {
  cplx v = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    auto [i, j] = index[k];
    v += coef[k] * (std::pow(q.z, i) * std::pow(q.w, j) - std::pow(basepoint.z, i) * std::pow(basepoint.w, j));
  }
  return v;
}

namespace {

cplx ipow(cplx x, int n) {
  if (n == 0) return 1.0;
  if (n < 0) return 1.0 / ipow(x, -n);
  cplx r = 1.0;
  while (n) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

cplx monomial_derivative(const PointC2& p, int i, int j, const Direction& xi) {
  cplx dz = i == 0 ? cplx(0) : static_cast<double>(i) * ipow(p.z, i - 1) * ipow(p.w, j);
  cplx dw = j == 0 ? cplx(0) : static_cast<double>(j) * ipow(p.z, i) * ipow(p.w, j - 1);
  return dz * xi.z + dw * xi.w;
}

}  // namespace

cplx FunctionCandidate::derivative(const Direction& xi) const {
  cplx v = 0;
  for (std::size_t k = 0; k < index.size(); ++k) v += coef[k] * monomial_derivative(basepoint, index[k].first, index[k].second, xi);
  return v;
}

std::vector<std::pair<int, int>> default_index_set(const LogRegion& r, int max_degree) {
  std::vector<std::pair<int, int>> idx;
  int lo = r.t_min == -kInf ? 0 : -max_degree;
  for (int j = 0; j <= max_degree; ++j)
    for (int i = lo; i <= max_degree; ++i)
      if ((i || j) && std::abs(i) + j <= max_degree) idx.push_back({i, j});
  return idx;
}

CaratheodoryEstimate caratheodory_lower_search(const LogRegion& r, const PointC2& p, const Direction& xi,
                                               const std::vector<std::pair<int, int>>& index,
                                               const SearchOptions& opt) {
  if (index.empty()) throw ValidationError("index set is empty");
  if (!(region_defect(r, p) < 0)) throw ValidationError("basepoint is not inside the region");
  if (r.t_max == kInf) throw ValidationError("Caratheodory search needs a bounded region");
  for (auto [i, j] : index)
    if (i < 0 && r.t_min == -kInf) throw ValidationError("Laurent terms need a region away from z = 0");

  // Boundary samples: top surface over a grid in t (or |z| when t_min = -inf), plus end caps.
  const int nt = 64, na = 16, nr = 8;
  std::vector<PointC2> pts;
  auto ring = [&](double x, double y) {
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        double ta = 2 * std::numbers::pi * a / na, tb = 2 * std::numbers::pi * b / na;
        pts.push_back({std::polar(x, ta), std::polar(y, tb)});
      }
  };
  const double xmax = std::exp(r.t_max);
  for (int k = 0; k <= nt; ++k) {
    double t, x;
    if (r.t_min == -kInf) {
      x = xmax * k / nt;
      t = x > 0 ? std::log(x) : -kInf;
    } else {
      t = r.t_min + (r.t_max - r.t_min) * k / nt;
      x = std::exp(t);
    }
    double h = r.height(t);
    ring(x, h == -kInf ? 0.0 : std::exp(h));
  }
  auto cap = [&](double t) {
    double h = r.height(t);
    if (h == -kInf) return;
    for (int k = 0; k < nr; ++k) ring(std::exp(t), std::exp(h) * k / nr);
  };
  if (r.t_min != -kInf) cap(r.t_min);
  cap(r.t_max);

  const std::size_t nm = index.size(), np = pts.size();
  std::vector<cplx> M(nm * np), D(nm);
  for (std::size_t k = 0; k < nm; ++k) {
    auto [i, j] = index[k];
    cplx base = ipow(p.z, i) * ipow(p.w, j);
    for (std::size_t q = 0; q < np; ++q) M[k * np + q] = ipow(pts[q].z, i) * ipow(pts[q].w, j) - base;
    D[k] = monomial_derivative(p, i, j, xi);
  }
  std::vector<cplx> vals(np);
  auto ratio = [&](const std::vector<cplx>& c, double& sup) {
    cplx der = 0;
    std::fill(vals.begin(), vals.end(), cplx(0));
    for (std::size_t k = 0; k < nm; ++k) {
      if (c[k] == cplx(0)) continue;
      der += c[k] * D[k];
      const cplx* row = &M[k * np];
      for (std::size_t q = 0; q < np; ++q) vals[q] += c[k] * row[q];
    }
    sup = 0;
    for (const cplx& v : vals) sup = std::max(sup, std::abs(v));
    return sup > 0 ? std::abs(der) / (1.01 * sup) : 0.0;
  };

  CaratheodoryEstimate out;
  std::vector<cplx> best(nm, 0.0);
  double best_ratio = -1, best_sup = 0;
  for (std::size_t k = 0; k < nm; ++k) {
    std::vector<cplx> c(nm, 0.0);
    c[k] = 1.0;
    double sup;
    double v = ratio(c, sup);
    if (v > best_ratio) {
      best_ratio = v;
      best = c;
      best_sup = sup;
    }
  }
  std::vector<cplx> start = best;
  for (int rs = 0; rs < opt.restarts; ++rs) {
    std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(rs), std::uint64_t(7)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> c = start;
    if (rs > 0)
      for (auto& v : c) v += cplx(0.3 * g(rng), 0.3 * g(rng));
    double sup;
    double fx = ratio(c, sup);
    std::vector<double> step(2 * nm, 0.25);
    for (int it = 0; it < opt.budget; ++it) {
      std::size_t i = static_cast<std::size_t>(it) % (2 * nm);
      bool improved = false;
      for (double sign : {1.0, -1.0}) {
        std::vector<cplx> y = c;
        y[i / 2] += i % 2 ? cplx(0, sign * step[i]) : cplx(sign * step[i], 0);
        double sy;
        double fy = ratio(y, sy);
        if (fy > fx) {
          c = y;
          fx = fy;
          sup = sy;
          improved = true;
          break;
        }
      }
      step[i] *= improved ? 2.0 : 0.5;
      step[i] = std::clamp(step[i], 1e-9, 4.0);
      out.trace.push_back({rs, it, fx, 0.0});
    }
    if (fx > best_ratio) {
      best_ratio = fx;
      best = c;
      best_sup = sup;
    }
  }
  out.function.index = index;
  out.function.coef = best;
  out.function.basepoint = p;
  out.sampled_sup = best_sup;
  out.bound = {Quantity::Caratheodory, Side::Lower, std::max(0.0, best_ratio), p, xi, false,
               "caratheodory_lower_search on " + r.name + ": " + std::to_string(nm) + " monomials, " +
                   std::to_string(np) + " boundary samples, sup inflated by 1.01, seed " + std::to_string(opt.seed)};
  return out;
}

ReferenceValues reference_metric(ReferenceModel model, const PointC2& p, const Direction& xi) {
  double z2 = std::norm(p.z), w2 = std::norm(p.w);
  switch (model) {
    case ReferenceModel::Disc: {
      if (!(z2 < 1)) throw ValidationError("point outside the disc");
      double v = std::abs(xi.z) / (1 - z2);
      return {v, v};
    }
    case ReferenceModel::Polydisc: {
      if (!(z2 < 1 && w2 < 1)) throw ValidationError("point outside the bidisc");
      double v = std::max(std::abs(xi.z) / (1 - z2), std::abs(xi.w) / (1 - w2));
      return {v, v};
    }
    case ReferenceModel::Ball: {
      double q = 1 - z2 - w2;
      if (!(q > 0)) throw ValidationError("point outside the ball");
      double x2 = std::norm(xi.z) + std::norm(xi.w);
      double ip = std::norm(std::conj(p.z) * xi.z + std::conj(p.w) * xi.w);
      double v = std::sqrt(x2 / q + ip / (q * q));
      return {v, v};
    }
  }
  return {};
}

CoefficientReport coefficient_bound_check(std::span<const cplx> samples, double radius, double bound, double tol,
                                          double alias_threshold) {
  const std::size_t n = samples.size();
  if (n < 4) throw ValidationError("need at least four samples");
  if (!(radius > 0)) throw ValidationError("sampling radius must be positive");
  static const gsl_error_handler_t* previous = gsl_set_error_handler_off();
  (void)previous;
  std::vector<double> data(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    data[2 * k] = samples[k].real();
    data[2 * k + 1] = samples[k].imag();
  }
  gsl_fft_complex_wavetable* wt = gsl_fft_complex_wavetable_alloc(n);
  gsl_fft_complex_workspace* ws = gsl_fft_complex_workspace_alloc(n);
  int status = gsl_fft_complex_forward(data.data(), 1, n, wt, ws);
  gsl_fft_complex_workspace_free(ws);
  gsl_fft_complex_wavetable_free(wt);
  if (status != GSL_SUCCESS) throw NumericalError("FFT failed");
  CoefficientReport rep;
  double total = 0, top = 0;
  std::vector<cplx> scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    scaled[j] = cplx(data[2 * j], data[2 * j + 1]) / static_cast<double>(n);
    double e = std::norm(scaled[j]);
    total += e;
    if (j > n / 2) top += e;
  }
  rep.aliased = total > 0 && top > alias_threshold * total;
  const std::size_t keep = n / 2 + 1;
  rep.coefficients.resize(keep);
  for (std::size_t j = 0; j < keep; ++j) {
    rep.coefficients[j] = scaled[j] / std::pow(radius, static_cast<double>(j));
    double ratio = std::abs(scaled[j]) / bound;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_index = static_cast<int>(j);
    }
    if (std::abs(scaled[j]) > bound + tol) rep.ok = false;
  }
  if (rep.aliased) rep.ok = false;
  return rep;
}

}  // namespace sqz
