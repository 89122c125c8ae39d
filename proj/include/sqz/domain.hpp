#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sqz {

using cplx = std::complex<double>;

struct PointC2 {
  cplx z, w;
  bool operator==(const PointC2&) const = default;
};

// lambda = -inf encodes w = 0.
struct LogPoint {
  double t = 0;
  double lambda = 0;
};

LogPoint to_log(const PointC2& p);

struct ProfileFlags {
  bool symmetric = false;
  bool pseudoconvex = false;
  bool operator==(const ProfileFlags&) const = default;
};

class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> t, std::vector<double> phi, ProfileFlags flags = {});

  std::size_t size() const { return t_.size(); }
  std::span<const double> breakpoints() const { return t_; }
  std::span<const double> values() const { return phi_; }
  const ProfileFlags& flags() const { return flags_; }

  // Segment i joins breakpoints i and i+1.
  double slope(std::size_t i) const;
  // Slopes of the extension are those of the adjacent segment (0 for a single point).
  double left_slope(std::size_t k) const;
  double right_slope(std::size_t k) const;
  double first_slope() const;
  double last_slope() const;

  double eval(double t) const;
  double max_on(double lo, double hi) const;
  RadialProfile reflected() const;

  bool operator==(const RadialProfile&) const = default;

 private:
  std::vector<double> t_, phi_;
  ProfileFlags flags_;
};

double profile_eval(const RadialProfile& profile, double t);

class ReinhardtDomain {
 public:
  ReinhardtDomain() = default;
  ReinhardtDomain(RadialProfile profile, double t_min, double t_max);

  const RadialProfile& profile() const { return profile_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  ReinhardtDomain reflected() const;

  bool operator==(const ReinhardtDomain&) const = default;

 private:
  RadialProfile profile_;
  double t_min_ = 0, t_max_ = 0;
};

bool contains(const ReinhardtDomain& d, const LogPoint& p);
bool contains(const ReinhardtDomain& d, const PointC2& p);

struct SliceRadii {
  double horizontal = 0;
  double vertical = 0;
};

SliceRadii slice_radii(const ReinhardtDomain& d, cplx z0);

double boundary_distance_lower(const ReinhardtDomain& d, const PointC2& p, int grid = 2048);
double outer_radius_upper(const ReinhardtDomain& d, const PointC2& p);

bool is_pseudoconvex(const ReinhardtDomain& d, bool strict = false);

// One-parameter description of the boundary in the (|z|, |w|) quarter plane,
// used by the distance certifier. The top surface is |w| = exp(h(t)) for
// t in [t_lo, t_hi]; optional vertical caps close it at the ends.
struct HeightBox {
  double lo, hi;  // enclosure of h on a cell, lo may be -inf
};

struct BoundaryModel {
  double t_lo = 0, t_hi = 0;
  std::function<double(double)> height;
  std::function<HeightBox(double, double)> enclose;
  bool left_cap = false, right_cap = false;
};

double certified_boundary_distance(const BoundaryModel& m, double rz, double rw, int cells,
                                   double rel_tol = 1e-7);

}  // namespace sqz
