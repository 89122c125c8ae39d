#include "sqz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqz/numeric.hpp"

namespace sqz {

Direction::Direction(cplx z_, cplx w_) : z(z_), w(w_) {
  if (!(std::abs(z) > 0 || std::abs(w) > 0)) throw ValidationError("direction must be nonzero");
  if (!std::isfinite(std::abs(z)) || !std::isfinite(std::abs(w))) throw ValidationError("direction not finite");
}

double Direction::norm() const { return std::hypot(std::abs(z), std::abs(w)); }

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Kobayashi: return "kobayashi";
    case Quantity::Caratheodory: return "caratheodory";
    case Quantity::Squeezing: return "squeezing";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::Upper ? "upper" : "lower"; }

namespace {

std::string num(double x) { return format_real(x); }

bool on_axis(const PointC2& p) { return p.w == cplx(0.0); }

double tol_for(double a, double b) { return kBreakTol * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace

Bound caratheodory_upper_from_radii(double r_h, double r_v, const PointC2& p, const Direction& xi,
                                    std::string provenance) {
  if (!(r_h > 0) || !(r_v > 0)) throw CertificationError("slice radii must be positive");
  double az = std::abs(xi.z) == 0 ? 0.0 : up(std::abs(xi.z));
  double aw = std::abs(xi.w) == 0 ? 0.0 : up(std::abs(xi.w));
  double v = add_up(az == 0 ? 0.0 : div_up(az, r_h), aw == 0 ? 0.0 : div_up(aw, r_v));
  return {Quantity::Caratheodory, Side::Upper, v, p, xi, true, std::move(provenance)};
}

Bound caratheodory_upper_slices(const ReinhardtDomain& d, const PointC2& p, const Direction& xi) {
  if (!on_axis(p)) throw ValidationError("slice bound needs a basepoint on the w = 0 axis");
  SliceRadii r = slice_radii(d, p.z);
  double rh = guard_lower(r.horizontal), rv = guard_lower(r.vertical);
  return caratheodory_upper_from_radii(rh, rv, p, xi,
                                       "caratheodory_upper_slices: Schwarz lemma on slice discs r_h=" + num(rh) +
                                           " r_v=" + num(rv));
}

LogPoint ShearMap::forward(LogPoint p) const {
  double s = p.t - t_k;
  if (p.lambda == -kInf) return {s, -kInf};
  return {s, p.lambda - phi_k + static_cast<double>(n_left) * s};
}

LogPoint ShearMap::inverse(LogPoint p) const {
  double t = p.t + t_k;
  if (p.lambda == -kInf) return {t, -kInf};
  return {t, p.lambda + phi_k - static_cast<double>(n_left) * p.t};
}

std::optional<std::int64_t> integer_slope(double s) {
  if (!std::isfinite(s) || std::fabs(s) > 9e15) return std::nullopt;
  double r = std::nearbyint(s);
  if (std::fabs(s - r) > kBreakTol * std::max(1.0, std::fabs(s))) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

Sheared shear_normalize(const ReinhardtDomain& d, std::size_t k) {
  const RadialProfile& pr = d.profile();
  if (k >= pr.size()) throw ValidationError("breakpoint index " + std::to_string(k) + " out of range");
  double tk = pr.breakpoints()[k], phik = pr.values()[k];
  auto nl = integer_slope(-pr.left_slope(k));
  auto nr = integer_slope(-pr.right_slope(k));
  if (!nl || !nr)
    throw CertificationError("slopes at breakpoint " + std::to_string(k) +
                             " are not integers; z^n is not single valued");
  if (d.t_min() == -kInf && *nl != 0)
    throw CertificationError("shear with nonzero exponent is not defined on the z = 0 fiber");
  ShearMap map{tk, phik, *nl};
  std::vector<double> s, psi;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    LogPoint q = map.forward({pr.breakpoints()[i], pr.values()[i]});
    s.push_back(q.t);
    psi.push_back(i == k ? 0.0 : q.lambda);
  }
  s[k] = 0.0;
  RadialProfile image(std::move(s), std::move(psi));
  double lo = d.t_min() == -kInf ? -kInf : d.t_min() - tk;
  double hi = d.t_max() == kInf ? kInf : d.t_max() - tk;
  return {ReinhardtDomain(std::move(image), lo, hi), map, *nr - *nl};
}

namespace {

// Exact value of the piecewise-linear profile at a double abscissa.
mpq_class exact_eval(const RadialProfile& pr, double s) {
  auto t = pr.breakpoints();
  auto v = pr.values();
  if (pr.size() == 1) return mpq_class(v[0]);
  std::size_t i = std::upper_bound(t.begin(), t.end(), s) - t.begin();
  i = std::clamp<std::size_t>(i, 1, pr.size() - 1);
  mpq_class t0(t[i - 1]), t1(t[i]), v0(v[i - 1]), v1(v[i]);
  return v0 + (v1 - v0) / (t1 - t0) * (mpq_class(s) - t0);
}

mpq_class exact_slope(const RadialProfile& pr, std::size_t i) {
  return (mpq_class(pr.values()[i + 1]) - mpq_class(pr.values()[i])) /
         (mpq_class(pr.breakpoints()[i + 1]) - mpq_class(pr.breakpoints()[i]));
}

}  // namespace

// Rational arithmetic on the stored doubles, no tolerance: concavity reduces
// the check to breakpoints, 0, the range ends and the asymptotic slopes.
ContainmentReport check_omega2_containment(const ReinhardtDomain& image, std::int64_t m) {
  const RadialProfile& pr = image.profile();
  const mpq_class mq(m);
  std::vector<double> pts(pr.breakpoints().begin(), pr.breakpoints().end());
  pts.push_back(0.0);
  if (std::isfinite(image.t_min())) pts.push_back(image.t_min());
  if (std::isfinite(image.t_max())) pts.push_back(image.t_max());
  std::sort(pts.begin(), pts.end());
  for (double s : pts) {
    if (s < image.t_min() || s > image.t_max()) continue;
    mpq_class psi = exact_eval(pr, s);
    mpq_class g = s < 0 ? mpq_class(0) : mpq_class(-mq * mpq_class(s));
    if (psi > g) {
      std::ostringstream os;
      os << "sheared profile " << num(psi.get_d()) << " exceeds min(0, -m s) = " << num(g.get_d()) << " by "
         << num(mpq_class(psi - g).get_d()) << " at s = " << num(s);
      return {false, s, os.str()};
    }
  }
  if (pr.size() >= 2) {
    if (image.t_min() == -kInf && exact_slope(pr, 0) < 0) return {false, -kInf, "left asymptotic slope is negative"};
    if (image.t_max() == kInf && exact_slope(pr, pr.size() - 2) > -mq)
      return {false, kInf, "right asymptotic slope exceeds -m"};
  }
  return {};
}

ShearWindow ShearWindow::from_ratios(double a, double b) {
  if (!(a > 0 && a < 1 && b > 1)) throw ValidationError("window needs 0 < a < 1 < b");
  return {a, b, guard_lower(std::min(1 - a, b - 1))};
}

ContainmentReport check_omega1_inclusion(const ReinhardtDomain& image, std::int64_t m, const ShearWindow& w) {
  double la = std::log(w.lower_ratio), lb = std::log(w.upper_ratio);
  if (la < image.t_min() - tol_for(la, image.t_min()))
    return {false, la, "window extends below the image annulus"};
  if (lb > image.t_max() + tol_for(lb, image.t_max()))
    return {false, lb, "window extends above the image annulus"};
  const RadialProfile& pr = image.profile();
  const double md = static_cast<double>(m);
  std::vector<double> pts{la, 0.0, lb};
  for (double s : pr.breakpoints())
    if (s > la && s < lb) pts.push_back(s);
  std::sort(pts.begin(), pts.end());
  for (double s : pts) {
    double psi = pr.eval(s), g = std::min(0.0, -md * s);
    if (psi < g - tol_for(psi, g)) {
      std::ostringstream os;
      os << "sheared profile " << num(psi) << " falls below min(0, -m s) = " << num(g) << " at s = " << num(s);
      return {false, s, os.str()};
    }
  }
  return {};
}

Bound kobayashi_lower_shear(const ReinhardtDomain& d, std::size_t k) {
  if (!is_pseudoconvex(d)) throw CertificationError("profile is not pseudoconvex");
  Sheared sh = shear_normalize(d, k);
  if (sh.m < 1) throw CertificationError("slope drop m = " + std::to_string(sh.m) + " < 1 at breakpoint " +
                                         std::to_string(k));
  ContainmentReport rep = check_omega2_containment(sh.image, sh.m);
  if (!rep.ok) throw CertificationError("containment in the model domain fails: " + rep.detail);
  double v = sqrt_down(static_cast<double>(sh.m) / 2.0);
  return {Quantity::Kobayashi, Side::Lower, v, PointC2{1.0, 0.0}, Direction{1.0, 1.0}, true,
          "kobayashi_lower_shear: sheared image inside model domain with m=" + std::to_string(sh.m) +
              " at breakpoint " + std::to_string(k) + ", bound sqrt(m/2) in sheared coordinates"};
}

Bound squeezing_upper_lemma1(const Bound& c, const Bound& k) {
  if (c.quantity != Quantity::Caratheodory || c.side != Side::Upper || !c.certified)
    throw ValidationError("first bound must be a certified Caratheodory upper bound");
  if (k.quantity != Quantity::Kobayashi || k.side != Side::Lower || !k.certified)
    throw ValidationError("second bound must be a certified Kobayashi lower bound");
  if (!(c.basepoint == k.basepoint)) throw ValidationError("bounds have different basepoints");
  if (c.direction != k.direction) throw ValidationError("bounds have different directions");
  if (!(k.value > 0)) throw ValidationError("Kobayashi lower bound is zero");
  double v = div_up(c.value, k.value);
  std::string prov = "squeezing_upper_lemma1: C/K with C=" + num(c.value) + " K=" + num(k.value);
  if (v > 1) {
    v = 1;
    prov += "; clamped to 1";
  }
  return {Quantity::Squeezing, Side::Upper, v, c.basepoint, std::nullopt, true,
          prov + " [" + c.provenance + "] [" + k.provenance + "]"};
}

Bound squeezing_lower_inclusion(const ReinhardtDomain& d, const PointC2& p, int grid) {
  double dist = boundary_distance_lower(d, p, grid);
  double R = outer_radius_upper(d, p);
  double v = div_down(dist, R);
  std::string prov = "squeezing_lower_inclusion: dist>=" + num(dist) + " R<=" + num(R);
  if (v > 1) {
    v = 1;
    prov += "; clamped to 1";
  }
  return {Quantity::Squeezing, Side::Lower, v, p, std::nullopt, true, prov};
}

ShearWindow default_window(const ReinhardtDomain& d, std::size_t k) {
  const RadialProfile& pr = d.profile();
  auto t = pr.breakpoints();
  double lo = k > 0 ? t[k - 1] : d.t_min();
  double hi = k + 1 < pr.size() ? t[k + 1] : d.t_max();
  double a = std::exp(lo - t[k]), b = std::exp(hi - t[k]);
  ShearWindow w = ShearWindow::from_ratios(a, b);
  w.lower_ratio = guard_upper(a);
  w.upper_ratio = guard_lower(b);
  w.horizontal_radius = guard_lower(std::min(1 - w.lower_ratio, w.upper_ratio - 1));
  return w;
}

Bound squeezing_upper_at_breakpoint(const ReinhardtDomain& d, std::size_t k, std::optional<ShearWindow> window) {
  const RadialProfile& pr = d.profile();
  if (k >= pr.size()) throw ValidationError("breakpoint index out of range");
  const double tk = pr.breakpoints()[k];
  const PointC2 base{std::exp(tk), 0.0};
  if (!contains(d, base)) throw CertificationError("breakpoint basepoint is outside the domain");
  if (tk < 0) {
    if (d.t_min() == -kInf) throw CertificationError("inversion z -> 1/z undefined on the z = 0 fiber");
    Bound b = squeezing_upper_at_breakpoint(d.reflected(), pr.size() - 1 - k, window);
    b.basepoint = base;
    b.provenance = "inversion z -> 1/z; " + b.provenance;
    return b;
  }
  try {
    Sheared sh = shear_normalize(d, k);
    ShearWindow w = window ? *window : default_window(d, k);
    ContainmentReport inc = check_omega1_inclusion(sh.image, sh.m, w);
    if (!inc.ok) throw CertificationError("window model not inside sheared domain: " + inc.detail);
    const PointC2 one{1.0, 0.0};
    const Direction xi{1.0, 1.0};
    Bound c = caratheodory_upper_from_radii(w.horizontal_radius, 1.0, one, xi,
                                            "caratheodory_upper_slices on sheared window a=" + num(w.lower_ratio) +
                                                " b=" + num(w.upper_ratio));
    Bound kl = kobayashi_lower_shear(d, k);
    Bound s = squeezing_upper_lemma1(c, kl);
    s.basepoint = base;
    s.provenance = "squeezing_upper_at_breakpoint k=" + std::to_string(k) + " t_k=" + num(tk) + ": " + s.provenance;
    return s;
  } catch (const CertificationError& e) {
    throw CertificationError("breakpoint " + std::to_string(k) + ": " + e.what());
  }
}

}  // namespace sqz
