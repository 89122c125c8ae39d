#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqz/construct.hpp"
#include "sqz/domain.hpp"

namespace sqz {

// Normalised bump exp(-1/(1-u^2)) on (-1, 1) and the integrals the
// mollified kinks need. All are evaluated by 64-point Gauss-Legendre.
namespace bump {
double density(double u);
double cdf(double y);
// int_{|y|}^1 (u - |y|) density(u) du; equals conv((.)_+) - (.)_+ at y.
double gap(double y);
double normaliser();
double abs_moment();  // int |u| density(u) du
}  // namespace bump

struct SmoothingParams {
  double h = 1e-6;
  double epsilon = 1e-5;
  double kappa = 50;
  std::optional<double> t_minus, t_plus;
  // Kinks whose outer slope n would leave a Levi-degenerate shoulder get
  // width (phi + log n + shoulder_margin) / n; disabled when false.
  bool widen = true;
  double shoulder_margin = 2.0;
};

class SmoothDomain {
 public:
  struct Kink {
    double t;
    double drop;
    double width;
  };

  const ReinhardtDomain& base() const { return base_; }
  const SmoothingParams& params() const { return params_; }
  const std::vector<Kink>& kinks() const { return kinks_; }
  double t_minus() const { return t_minus_; }
  double t_plus() const { return t_plus_; }

  double phi(double t) const;
  double dphi(double t) const;
  double d2phi(double t) const;
  double cap_plus(double t) const;
  double cap_minus(double t) const;
  double e_factor(double t) const;
  double log_radius(double t) const;  // phi + log(E)/2, -inf outside the rims

  std::pair<double, double> rims() const { return rims_; }
  double rho(const PointC2& p) const;
  bool contains(const PointC2& p) const;

 private:
  friend SmoothDomain smooth(const ReinhardtDomain&, const SmoothingParams&);
  ReinhardtDomain base_;
  SmoothingParams params_;
  std::vector<Kink> kinks_;
  double t_minus_ = 0, t_plus_ = 0;
  std::pair<double, double> rims_;
};

SmoothDomain smooth(const ReinhardtDomain& d, const SmoothingParams& params);

double smooth_boundary_distance_lower(const SmoothDomain& s, const PointC2& p, int grid = 2048);

struct LeviReport {
  int uniform_points = 0;
  int refined_points = 0;
  int total_points = 0;
  double t_lo = 0, t_hi = 0;
  double minimum = 0;
  double argmin_t = 0;
  double argmin_lambda = 0;
  double tolerance = 1e-7;
  bool strictly_pseudoconvex = false;
  std::string status;
};

// Levi form on unit complex tangent vectors at the boundary point over t.
double levi_ratio(const SmoothDomain& s, double t);

// Same quantity for a general Reinhardt defining function u(t, lambda),
// given its partial derivatives at a boundary point.
struct LogJet {
  double ut, ul, utt, utl, ull;
};
double levi_ratio_log(double t, double lambda, const LogJet& j);

struct ComplexHessian {
  cplx zz, zw, ww;  // d^2 rho / dz_i d conj(z_j)
  cplx gz, gw;      // d rho / dz, d rho / dw
};
ComplexHessian complex_hessian(const SmoothDomain& s, const PointC2& p);

LeviReport levi_verify(const SmoothDomain& s, int grid = 10000, double tolerance = 1e-7);

struct SmoothedCertificate {
  ConstructionCertificate certificate;
  double s_lower_distance = 0;
  double s_lower_radius = 0;
};

SmoothedCertificate certify_smoothed(const SmoothDomain& s, const BuildResult& built,
                                     const std::vector<int>& levels, int grid = 2048);

}  // namespace sqz
