#include <algorithm>
#include <cmath>

#include "sqz/numeric.hpp"
#include "sqz/smooth.hpp"

namespace sqz {

namespace {

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

// With E = 1 - A - B and R = |w|^2 e^{-2 phi} + A + B - 1, the Levi form on
// the tangent vector (z R_lambda, -w R_t) divided by its squared length is
// num / (4 E e^{2t} + e^{2 phi} R_t^2) at the boundary point over t.
double levi_ratio(const SmoothDomain& s, double t) {
  const double k = s.params().kappa;
  double A = s.cap_plus(t), B = s.cap_minus(t);
  double E = 1 - (A + B);
  if (!(E > 0)) throw NumericalError("Levi form requested outside the rims");
  double f = s.phi(t), f1 = s.dphi(t), f2 = s.d2phi(t);
  double num = -2 * f2 * E * E + k * k * (A + B) * E + k * k * (A - B) * (A - B);
  double rt = -2 * f1 * E + k * (A - B);
  double lden = std::log(4 * E) + 2 * t;
  if (rt != 0) lden = log_add(lden, 2 * f + 2 * std::log(std::fabs(rt)));
  return num * std::exp(-lden);
}

double levi_ratio_log(double t, double lambda, const LogJet& j) {
  double c1 = j.ul, c2 = -j.ut;
  double L = 0.25 * (j.utt * c1 * c1 + 2 * j.utl * c1 * c2 + j.ull * c2 * c2);
  double n2 = std::exp(2 * t) * c1 * c1 + std::exp(2 * lambda) * c2 * c2;
  return L / n2;
}

ComplexHessian complex_hessian(const SmoothDomain& s, const PointC2& p) {
  const double k = s.params().kappa;
  double az = std::abs(p.z);
  if (az == 0) throw ValidationError("Hessian undefined on the z = 0 fiber");
  double t = std::log(az);
  double f = s.phi(t), f1 = s.dphi(t), f2 = s.d2phi(t);
  double A = s.cap_plus(t), B = s.cap_minus(t);
  double g = std::exp(-2 * f);
  double w2 = std::norm(p.w);
  double q = w2 == 0 ? 0.0 : std::exp(2 * std::log(std::abs(p.w)) - 2 * f);
  ComplexHessian h;
  h.zz = (q * (4 * f1 * f1 - 2 * f2) + k * k * (A + B)) / (4 * az * az);
  h.zw = -f1 * g * p.w / p.z;
  h.ww = g;
  h.gz = (-2 * f1 * q + k * (A - B)) / (2.0 * p.z);
  h.gw = std::conj(p.w) * g;
  return h;
}

LeviReport levi_verify(const SmoothDomain& s, int grid, double tolerance) {
  if (grid < 2) throw ValidationError("Levi grid needs at least two points");
  auto [lo, hi] = s.rims();
  if (!(hi > lo)) throw NumericalError("smoothed boundary is empty");
  LeviReport r;
  r.t_lo = lo;
  r.t_hi = hi;
  r.tolerance = tolerance;
  r.minimum = kInf;
  auto visit = [&](double t) {
    if (!(t >= lo && t <= hi)) return;
    double v = levi_ratio(s, t);
    if (std::isnan(v)) throw NumericalError("Levi form evaluated to NaN at t = " + format_real(t));
    ++r.total_points;
    if (v < r.minimum) {
      r.minimum = v;
      r.argmin_t = t;
    }
  };
  const double step = (hi - lo) / grid;
  for (int i = 0; i < grid; ++i) visit(lo + (i + 0.5) * step);
  r.uniform_points = r.total_points;
  visit(lo);
  visit(hi);
  const RadialProfile& pr = s.base().profile();
  for (const auto& kk : s.kinks()) {
    double n = std::max(std::fabs(pr.eval(kk.t - 1.5 * kk.width) - pr.eval(kk.t)),
                        std::fabs(pr.eval(kk.t + 1.5 * kk.width) - pr.eval(kk.t))) /
               (1.5 * kk.width);
    double reach = 2 * kk.width + 30 / std::max(1.0, n);
    const int m = 1024;
    for (int i = 0; i <= m; ++i) visit(kk.t - reach + 2 * reach * i / m);
  }
  const double band = 20 / s.params().kappa;
  for (int i = 0; i <= 256; ++i) {
    visit(hi - band * i / 256.0);
    visit(lo + band * i / 256.0);
  }
  r.refined_points = r.total_points - r.uniform_points;
  r.argmin_lambda = s.log_radius(r.argmin_t);
  r.strictly_pseudoconvex = r.minimum > tolerance;
  r.status = r.strictly_pseudoconvex ? "numerically verified (not proven)" : "below tolerance";
  return r;
}

}  // namespace sqz
