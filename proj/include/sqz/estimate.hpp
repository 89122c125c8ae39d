#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqz/domain.hpp"
#include "sqz/metrics.hpp"
#include "sqz/numeric.hpp"

namespace sqz {

// Reinhardt region in log coordinates: log|w| < height(log|z|) for
// t_min < log|z| < t_max, plus the z = 0 fiber when t_min = -inf.
struct LogRegion {
  std::string name;
  double t_min = -kInf, t_max = kInf;
  std::function<double(double)> height;
};

LogRegion as_region(const ReinhardtDomain& d, std::string name = "domain");
LogRegion ball_region();
LogRegion bidisc_region();
LogRegion omega2_region(std::int64_t m);
LogRegion omega1_region(std::int64_t m, double a, double b);

bool region_contains(const LogRegion& r, const PointC2& p);
// max(log|w| - height, range defects) over a point; <= -margin means inside.
double region_defect(const LogRegion& r, const PointC2& p);

struct DiscCandidate {
  int degree = 1;
  std::vector<cplx> z, w;  // Taylor coefficients, z[0], w[0] = basepoint
  double alpha = 0;
};

struct FunctionCandidate {
  std::vector<std::pair<int, int>> index;  // (i, j) for z^i w^j, i may be negative
  std::vector<cplx> coef;
  PointC2 basepoint;
  cplx value(const PointC2& q) const;  // vanishes at the basepoint
  cplx derivative(const Direction& xi) const;
};

struct SearchOptions {
  int degree = 4;
  int budget = 400;
  int restarts = 4;
  std::uint64_t seed = 1;
  int samples = 4096;
  double margin = 1e-6;
};

struct TracePoint {
  int restart;
  int iteration;
  double objective;
  double feasibility_margin;
};

struct KobayashiEstimate {
  Bound bound;
  DiscCandidate disc;
  double feasibility_margin = 0;
  bool fallback = false;
  std::vector<TracePoint> trace;
};

struct CaratheodoryEstimate {
  Bound bound;
  FunctionCandidate function;
  double sampled_sup = 0;
  std::vector<TracePoint> trace;
};

// Max over boundary samples of the disc of region_defect.
double disc_defect(const LogRegion& r, const DiscCandidate& disc, int samples);

KobayashiEstimate kobayashi_upper_search(const LogRegion& r, const PointC2& p, const Direction& xi,
                                         const SearchOptions& opt = {});

std::vector<std::pair<int, int>> default_index_set(const LogRegion& r, int max_degree);

CaratheodoryEstimate caratheodory_lower_search(const LogRegion& r, const PointC2& p, const Direction& xi,
                                               const std::vector<std::pair<int, int>>& index,
                                               const SearchOptions& opt = {});

enum class ReferenceModel { Disc, Polydisc, Ball };

struct ReferenceValues {
  double kobayashi = 0;
  double caratheodory = 0;
};

ReferenceValues reference_metric(ReferenceModel model, const PointC2& p, const Direction& xi);

struct CoefficientReport {
  bool ok = true;
  bool aliased = false;
  std::vector<cplx> coefficients;
  double worst_ratio = 0;
  int worst_index = 0;
};

// Samples g(r e^{2 pi i k / n}) of g with sup |g| <= bound; checks the
// Cauchy estimate |c_j| r^j <= bound + tol for every recovered coefficient.
CoefficientReport coefficient_bound_check(std::span<const cplx> samples, double radius, double bound = 1.0,
                                          double tol = 1e-9, double alias_threshold = 1e-10);

struct DiscOracleResult {
  int m = 0;
  std::int64_t discs = 0;
  std::int64_t rejected = 0;
  double min_alpha = 0;
  double bound = 0;
  double worst_coefficient_slack = 0;  // max of |b2 + m s^2| - sup|w z^m| (should be <= 0)
};

DiscOracleResult disc_oracle(int m, std::int64_t count, std::uint64_t seed, int max_degree = 6);

}  // namespace sqz
