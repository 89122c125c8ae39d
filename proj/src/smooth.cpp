#include "sqz/smooth.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>

#include "sqz/numeric.hpp"

namespace sqz {

namespace bump {

namespace {

double raw(double u) {
  double q = 1 - u * u;
  return q > 0 ? std::exp(-1 / q) : 0.0;
}

const gsl_integration_glfixed_table* table() {
  static gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(64);
  return t;
}

template <class F>
double integrate(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  gsl_function g;
  g.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
  g.params = &f;
  return gsl_integration_glfixed(&g, a, b, table());
}

struct Constants {
  double z, m1;
};

const Constants& constants() {
  static const Constants c = [] {
    double z = 2 * integrate([](double u) { return raw(u); }, 0.0, 1.0);
    double m1 = 2 * integrate([](double u) { return u * raw(u); }, 0.0, 1.0) / z;
    return Constants{z, m1};
  }();
  return c;
}

double tail(double a) {
  if (a >= 1) return 0.0;
  return integrate([](double u) { return raw(u); }, a, 1.0) / constants().z;
}

}  // namespace

double normaliser() { return constants().z; }
double abs_moment() { return constants().m1; }

double density(double u) { return std::fabs(u) < 1 ? raw(u) / constants().z : 0.0; }

double cdf(double y) {
  if (y <= -1) return 0.0;
  if (y >= 1) return 1.0;
  return y >= 0 ? 1 - tail(y) : tail(-y);
}

double gap(double y) {
  double a = std::fabs(y);
  if (a >= 1) return 0.0;
  return integrate([a](double u) { return (u - a) * raw(u); }, a, 1.0) / constants().z;
}

}  // namespace bump

namespace {

bool symmetric(const SmoothDomain& s) {
  return s.base().profile().flags().symmetric && s.t_minus() == -s.t_plus();
}

double phi_impl(const SmoothDomain& s, double t) {
  double corr = 0;
  for (const auto& k : s.kinks()) {
    double y = (t - k.t) / k.width;
    if (std::fabs(y) < 1) corr += k.drop * k.width * bump::gap(y);
  }
  double eps = s.params().epsilon;
  return s.base().profile().eval(t) - corr - eps * t * t;
}

double dphi_impl(const SmoothDomain& s, double t) {
  double v = s.base().profile().first_slope();
  for (const auto& k : s.kinks()) v -= k.drop * bump::cdf((t - k.t) / k.width);
  return v - 2 * s.params().epsilon * t;
}

}  // namespace

double SmoothDomain::phi(double t) const {
  if (symmetric(*this) && t < 0) t = -t;
  return phi_impl(*this, t);
}

double SmoothDomain::dphi(double t) const {
  if (symmetric(*this) && t < 0) return -dphi_impl(*this, -t);
  return dphi_impl(*this, t);
}

double SmoothDomain::d2phi(double t) const {
  if (symmetric(*this) && t < 0) t = -t;
  double v = 0;
  for (const auto& k : kinks_) v += k.drop * bump::density((t - k.t) / k.width) / k.width;
  return -v - 2 * params_.epsilon;
}

double SmoothDomain::cap_plus(double t) const { return std::exp(params_.kappa * (t - t_plus_)); }
double SmoothDomain::cap_minus(double t) const { return std::exp(params_.kappa * ((-t) - (-t_minus_))); }
double SmoothDomain::e_factor(double t) const { return 1 - (cap_plus(t) + cap_minus(t)); }

double SmoothDomain::log_radius(double t) const {
  double e = e_factor(t);
  return e > 0 ? phi(t) + 0.5 * std::log(e) : -kInf;
}

double SmoothDomain::rho(const PointC2& p) const {
  double az = std::abs(p.z);
  if (az == 0) return kInf;
  double t = std::log(az);
  double caps = cap_plus(t) + cap_minus(t);
  double aw = std::abs(p.w);
  double lw = aw == 0 ? 0.0 : std::exp(2 * (std::log(aw) - phi(t)));
  return lw + caps - 1;
}

bool SmoothDomain::contains(const PointC2& p) const { return rho(p) < 0; }

SmoothDomain smooth(const ReinhardtDomain& d, const SmoothingParams& params) {
  if (!(params.h > 0) || !std::isfinite(params.h)) throw ValidationError("mollifier width h must be positive");
  if (!(params.epsilon >= 0) || !std::isfinite(params.epsilon)) throw ValidationError("epsilon must be >= 0");
  if (!(params.kappa > 0) || !std::isfinite(params.kappa)) throw ValidationError("kappa must be positive");
  if (!(params.shoulder_margin >= 0)) throw ValidationError("shoulder margin must be >= 0");
  if (!is_pseudoconvex(d)) throw ValidationError("cannot smooth a non-pseudoconvex profile from inside");
  SmoothDomain s;
  s.base_ = d;
  s.params_ = params;
  s.t_minus_ = params.t_minus.value_or(d.t_min());
  s.t_plus_ = params.t_plus.value_or(d.t_max());
  if (!std::isfinite(s.t_minus_) || !std::isfinite(s.t_plus_) || !(s.t_minus_ < s.t_plus_))
    throw ValidationError("cap centres must be finite with t_minus < t_plus");
  if (s.t_minus_ < d.t_min() || s.t_plus_ > d.t_max())
    throw ValidationError("cap centres must lie inside the base annulus");

  const RadialProfile& pr = d.profile();
  auto t = pr.breakpoints();
  double min_gap = kInf;
  for (std::size_t i = 1; i < pr.size(); ++i) min_gap = std::min(min_gap, t[i] - t[i - 1]);
  if (pr.size() > 1 && !(params.h < min_gap))
    throw ValidationError("mollifier width h = " + format_real(params.h) +
                          " is not smaller than the minimal breakpoint gap " + format_real(min_gap));
  for (std::size_t i = 1; i + 1 < pr.size(); ++i) {
    double sl = pr.slope(i - 1), sr = pr.slope(i);
    double drop = sl - sr;
    if (!(drop > 0)) continue;
    double w = params.h;
    double n_out = std::max(std::fabs(sl), std::fabs(sr));
    if (params.widen && n_out > 1) w = std::max(w, (pr.values()[i] + std::log(n_out) + params.shoulder_margin) / n_out);
    double room = std::min(t[i] - t[i - 1], t[i + 1] - t[i]);
    if (!(w < room))
      throw ValidationError("mollifier width " + format_real(w) + " at breakpoint " + std::to_string(i) +
                            " does not fit between its neighbours");
    s.kinks_.push_back({t[i], drop, w});
  }

  double c = 0.5 * (s.t_minus_ + s.t_plus_);
  if (!(s.e_factor(c) > 0)) throw ValidationError("end caps leave no room between t_minus and t_plus");
  auto rim = [&](double inside, double outside) {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (s.e_factor(mid) > 0 ? inside : outside) = mid;
    }
    return inside;
  };
  double hi = rim(c, s.t_plus_);
  double lo = symmetric(s) ? -hi : rim(c, s.t_minus_);
  s.rims_ = {lo, hi};
  if (d.t_min() < 0 && d.t_max() > 0 && !s.contains(PointC2{1.0, 0.0}))
    throw ValidationError("end caps push (1, 0) out of the smoothed domain");
  return s;
}

double smooth_boundary_distance_lower(const SmoothDomain& s, const PointC2& p, int grid) {
  if (!s.contains(p)) throw ValidationError("distance basepoint is outside the smoothed domain");
  BoundaryModel m;
  m.t_lo = s.rims().first;
  m.t_hi = s.rims().second;
  m.height = [&s](double t) { return s.log_radius(t); };
  const double kappa = s.params().kappa;
  m.enclose = [&s, kappa](double a, double b) {
    const double w = b - a;
    double fa = s.phi(a), fb = s.phi(b), da = s.dphi(a), db = s.dphi(b);
    double fslack = 1e-12 * (1 + std::max(std::fabs(fa), std::fabs(fb)));
    double fmin = std::min(fa, fb) - fslack;
    double fmax = std::min(fa + std::max(0.0, da) * w, fb + std::max(0.0, -db) * w) + fslack;
    double ea = s.e_factor(a), eb = s.e_factor(b);
    double dea = kappa * (s.cap_minus(a) - s.cap_plus(a)), deb = kappa * (s.cap_minus(b) - s.cap_plus(b));
    double emin = std::min(ea, eb) - 1e-15;
    double emax = std::min({ea + std::max(0.0, dea) * w, eb + std::max(0.0, -deb) * w, 1.0}) + 1e-15;
    HeightBox hb;
    hb.lo = emin > 0 ? fmin + 0.5 * std::log(emin) : -kInf;
    hb.hi = emax > 0 ? fmax + 0.5 * std::log(emax) : -kInf;
    return hb;
  };
  return certified_boundary_distance(m, std::abs(p.z), std::abs(p.w), grid);
}

namespace {

// Squeezing upper bound at the breakpoint over t, read in a frame where the
// breakpoint is at +t (rims given in that frame).
Bound smoothed_upper(const SmoothDomain& s, const ReinhardtDomain& frame_base, std::size_t index, double t_eval,
                     std::pair<double, double> rims, const ShearWindow& window) {
  const double tk = frame_base.profile().breakpoints()[index];
  double gap = s.phi(t_eval) - s.base().profile().eval(t_eval);
  double e = s.e_factor(t_eval);
  if (!(e > 0)) throw CertificationError("breakpoint lies outside the smoothed domain");
  double rv = guard_lower(std::exp(gap) * std::sqrt(e));
  double rh_caps = guard_lower(std::min(1 - std::exp(rims.first - tk), std::exp(rims.second - tk) - 1));
  double rh = std::min(rh_caps, window.horizontal_radius);
  if (!(rh > 0) || !(rv > 0)) throw CertificationError("smoothed slice radii are not positive");
  const PointC2 one{1.0, 0.0};
  Bound c = caratheodory_upper_from_radii(rh, rv, one, Direction{1.0, 1.0},
                                          "smoothed slices r_h=" + format_real(rh) + " r_v=" + format_real(rv));
  Bound k = kobayashi_lower_shear(frame_base, index);
  k.provenance += "; reused on the smoothed domain since {rho < 0} lies in the base domain";
  return squeezing_upper_lemma1(c, k);
}

}  // namespace

SmoothedCertificate certify_smoothed(const SmoothDomain& s, const BuildResult& built, const std::vector<int>& levels,
                                     int grid) {
  const ReinhardtDomain& d = s.base();
  if (!(d == built.domain)) throw ValidationError("smoothed domain was not built from this construction");
  SmoothedCertificate out;
  ConstructionCertificate& cert = out.certificate;
  const ConstructionCertificate& src = built.certificate;
  cert.kind = "smoothed";
  cert.schedule = src.schedule;
  cert.a = src.a;
  cert.margin_guard = src.margin_guard;
  const ReinhardtDomain refl = d.reflected();
  const std::size_t last = d.profile().size() - 1;
  auto rims = s.rims();
  for (int k : levels) {
    auto it = std::find_if(src.levels.begin(), src.levels.end(), [k](const LevelRecord& l) { return l.k == k; });
    if (it == src.levels.end()) throw ValidationError("level " + std::to_string(k) + " was not built");
    LevelRecord lv = *it;
    const double tk = d.profile().breakpoints()[lv.breakpoint];
    const PointC2 pk{std::exp(tk), 0.0}, qk{std::exp(-tk), 0.0};
    if (!s.contains(pk) || !s.contains(qk))
      throw CertificationError("level " + std::to_string(k) + ": (a_k, 0) or (1/a_k, 0) is not in the smoothed domain");
    try {
      Bound up_b = smoothed_upper(s, d, lv.breakpoint, tk, rims, lv.window);
      Bound inv_b = smoothed_upper(s, refl, last - lv.breakpoint, -tk, {-rims.second, -rims.first}, lv.window);
      lv.s_upper = up_b.value;
      lv.s_upper_inverse = inv_b.value;
      lv.provenance = "certify_smoothed level " + std::to_string(k) + ": " + up_b.provenance;
    } catch (const CertificationError& e) {
      throw CertificationError("level " + std::to_string(k) + ": " + e.what());
    }
    lv.target_met = std::max(lv.s_upper, lv.s_upper_inverse) < lv.target.get_d();
    cert.levels.push_back(std::move(lv));
  }
  const PointC2 p{1.0, 0.0};
  out.s_lower_distance = smooth_boundary_distance_lower(s, p, grid);
  out.s_lower_radius = outer_radius_upper(d, p);
  cert.s_lower_p = std::min(1.0, div_down(out.s_lower_distance, out.s_lower_radius));
  cert.s_lower_provenance = "squeezing_lower_inclusion on the smoothed domain: dist>=" +
                            format_real(out.s_lower_distance) + " R<=" + format_real(out.s_lower_radius) +
                            " (R from the base domain)";
  decide_violation(cert);
  cert.notes = src.notes;
  cert.notes.push_back("strict pseudoconvexity of the smoothed domain is numerically verified, not proven");
  cert.notes.push_back("Kobayashi lower bounds transfer from the base domain by monotonicity");
  return out;
}

}  // namespace sqz
