#include "sqz/domain.hpp"

#include <algorithm>
#include <cmath>

#include "sqz/numeric.hpp"

namespace sqz {

LogPoint to_log(const PointC2& p) {
  double az = std::abs(p.z), aw = std::abs(p.w);
  return {az == 0 ? -kInf : std::log(az), aw == 0 ? -kInf : std::log(aw)};
}

RadialProfile::RadialProfile(std::vector<double> t, std::vector<double> phi, ProfileFlags flags)
    : t_(std::move(t)), phi_(std::move(phi)), flags_(flags) {
  if (t_.empty()) throw ValidationError("profile needs at least one breakpoint");
  if (t_.size() != phi_.size()) throw ValidationError("profile breakpoints and values differ in length");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !std::isfinite(phi_[i]))
      throw ValidationError("profile breakpoint " + std::to_string(i) + " is not finite");
    if (i && !(t_[i] > t_[i - 1]))
      throw ValidationError("profile breakpoints not strictly increasing at " + std::to_string(i));
  }
  if (flags_.symmetric) {
    const std::size_t n = t_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (t_[i] != -t_[n - 1 - i] || phi_[i] != phi_[n - 1 - i])
        throw ValidationError("profile flagged symmetric but breakpoint " + std::to_string(i) +
                              " has no mirror image");
  }
  if (flags_.pseudoconvex)
    for (std::size_t i = 1; i + 1 < t_.size(); ++i)
      if (!(slope(i) < slope(i - 1)))
        throw ValidationError("profile flagged pseudoconvex but slopes do not decrease at breakpoint " +
                              std::to_string(i));
}

double RadialProfile::slope(std::size_t i) const {
  return (phi_[i + 1] - phi_[i]) / (t_[i + 1] - t_[i]);
}

double RadialProfile::first_slope() const { return t_.size() > 1 ? slope(0) : 0.0; }
double RadialProfile::last_slope() const { return t_.size() > 1 ? slope(t_.size() - 2) : 0.0; }
double RadialProfile::left_slope(std::size_t k) const { return k == 0 ? first_slope() : slope(k - 1); }
double RadialProfile::right_slope(std::size_t k) const {
  return k + 1 >= t_.size() ? last_slope() : slope(k);
}

double RadialProfile::eval(double t) const {
  if (t == -kInf) {
    double s = first_slope();
    return s == 0 ? phi_.front() : (s > 0 ? -kInf : kInf);
  }
  if (t == kInf) {
    double s = last_slope();
    return s == 0 ? phi_.back() : (s < 0 ? -kInf : kInf);
  }
  if (flags_.symmetric && t < 0) t = -t;
  if (t <= t_.front()) return t == t_.front() ? phi_.front() : phi_.front() + first_slope() * (t - t_.front());
  if (t >= t_.back()) return t == t_.back() ? phi_.back() : phi_.back() + last_slope() * (t - t_.back());
  std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin() - 1;
  if (t == t_[i]) return phi_[i];
  double u = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return phi_[i] + u * (phi_[i + 1] - phi_[i]);
}

double RadialProfile::max_on(double lo, double hi) const {
  double m = std::max(eval(lo), eval(hi));
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i] > lo && t_[i] < hi) m = std::max(m, phi_[i]);
  return m;
}

RadialProfile RadialProfile::reflected() const {
  std::vector<double> t(t_.rbegin(), t_.rend()), phi(phi_.rbegin(), phi_.rend());
  for (double& x : t) x = -x;
  return RadialProfile(std::move(t), std::move(phi), flags_);
}

double profile_eval(const RadialProfile& profile, double t) { return profile.eval(t); }

ReinhardtDomain::ReinhardtDomain(RadialProfile profile, double t_min, double t_max)
    : profile_(std::move(profile)), t_min_(t_min), t_max_(t_max) {
  if (std::isnan(t_min) || std::isnan(t_max) || !(t_min < t_max))
    throw ValidationError("annulus range needs t_min < t_max");
  if (profile_.breakpoints().front() < t_min || profile_.breakpoints().back() > t_max)
    throw ValidationError("profile breakpoints must lie inside [t_min, t_max]");
}

ReinhardtDomain ReinhardtDomain::reflected() const {
  return ReinhardtDomain(profile_.reflected(), -t_max_, -t_min_);
}

bool contains(const ReinhardtDomain& d, const LogPoint& p) {
  if (std::isnan(p.t) || std::isnan(p.lambda)) return false;
  bool in_range = (p.t > d.t_min() || (d.t_min() == -kInf && p.t == -kInf)) && p.t < d.t_max();
  if (!in_range) return false;
  if (p.lambda == -kInf) return true;
  return p.lambda < d.profile().eval(p.t);
}

bool contains(const ReinhardtDomain& d, const PointC2& p) { return contains(d, to_log(p)); }

SliceRadii slice_radii(const ReinhardtDomain& d, cplx z0) {
  if (!contains(d, PointC2{z0, 0.0})) throw ValidationError("slice centre is outside the domain");
  double r = std::abs(z0);
  double t = r == 0 ? -kInf : std::log(r);
  double outer = d.t_max() == kInf ? kInf : std::exp(d.t_max());
  double rh = d.t_min() == -kInf ? outer - r : std::min(r - std::exp(d.t_min()), outer - r);
  return {rh, std::exp(d.profile().eval(t))};
}

double outer_radius_upper(const ReinhardtDomain& d, const PointC2& p) {
  if (!contains(d, p)) throw ValidationError("outer radius basepoint is outside the domain");
  if (d.t_max() == kInf) throw ValidationError("domain is unbounded in z");
  double lo = d.t_min() == -kInf ? -kInf : d.t_min();
  double hmax = d.profile().max_on(lo, d.t_max());
  if (d.t_min() == -kInf) hmax = std::max(hmax, d.profile().eval(-kInf));
  if (!std::isfinite(hmax)) throw ValidationError("domain is unbounded in w");
  double a = add_up(guard_upper(std::exp(d.t_max())), std::abs(p.z));
  double b = add_up(guard_upper(std::exp(hmax)), std::abs(p.w));
  return sqrt_up(add_up(mul_up(a, a), mul_up(b, b)));
}

bool is_pseudoconvex(const ReinhardtDomain& d, bool strict) {
  const auto& pr = d.profile();
  for (std::size_t i = 1; i + 1 < pr.size(); ++i) {
    double a = pr.slope(i - 1), b = pr.slope(i);
    if (strict ? !(b < a) : !(b <= a)) return false;
  }
  return true;
}

double boundary_distance_lower(const ReinhardtDomain& d, const PointC2& p, int grid) {
  if (!contains(d, p)) throw ValidationError("distance basepoint is outside the domain");
  if (d.t_max() == kInf) throw ValidationError("domain is unbounded in z");
  const RadialProfile& pr = d.profile();
  BoundaryModel m;
  m.t_lo = std::max(d.t_min(), -740.0);
  m.t_hi = d.t_max();
  m.left_cap = d.t_min() != -kInf;
  m.right_cap = true;
  m.height = [&pr](double t) { return pr.eval(t); };
  m.enclose = [&pr](double a, double b) {
    double ha = pr.eval(a), hb = pr.eval(b);
    return HeightBox{std::min(ha, hb), pr.max_on(a, b)};
  };
  return certified_boundary_distance(m, std::abs(p.z), std::abs(p.w), grid);
}

}  // namespace sqz
