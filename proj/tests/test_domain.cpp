#include <doctest.h>

#include <random>

#include "sqz/domain.hpp"
#include "sqz/numeric.hpp"

using namespace sqz;

namespace {

ReinhardtDomain tent() {
  return ReinhardtDomain(RadialProfile({-0.5, 0.0, 0.5}, {-1.0, 0.0, -1.0}, {true, true}), -0.7, 0.7);
}

ReinhardtDomain bidisc() { return ReinhardtDomain(RadialProfile({0.0}, {0.0}, {false, true}), -kInf, 0.0); }

// Distance in the (|z|, |w|) quarter plane to the boundary curve, sampled on
// a t grid plus the two end caps. Never below the true distance.
double grid_distance(const ReinhardtDomain& d, const PointC2& p, int n) {
  double rz = std::abs(p.z), rw = std::abs(p.w), best = kInf;
  double lo = std::max(d.t_min(), -30.0), hi = d.t_max();
  for (int i = 0; i <= n; ++i) {
    double t = lo + (hi - lo) * i / n;
    double x = std::exp(t), y = std::exp(profile_eval(d.profile(), t));
    best = std::min(best, std::hypot(rz - x, rw - y));
  }
  for (double t : {d.t_min(), d.t_max()}) {
    if (!std::isfinite(t)) continue;
    double y = std::exp(profile_eval(d.profile(), t));
    best = std::min(best, std::hypot(rz - std::exp(t), rw - std::clamp(rw, 0.0, y)));
  }
  return best;
}

}  // namespace

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(RadialProfile({0.0, 0.0}, {0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(RadialProfile({0.0, 1.0}, {0.0}), ValidationError);
  CHECK_THROWS_AS(RadialProfile({-1.0, 0.0, 2.0}, {0.0, 0.0, 0.0}, {true, false}), ValidationError);
  CHECK_THROWS_AS(RadialProfile({0.0, 1.0}, {0.0, kInf}), ValidationError);
  CHECK_NOTHROW(RadialProfile({-1.0, 1.0}, {0.0, 0.0}, {true, true}));
}

TEST_CASE("evaluation interpolates and extends linearly") {
  RadialProfile p({0.0, 1.0, 3.0}, {0.0, 2.0, 3.0});
  CHECK(p.eval(0.5) == doctest::Approx(1.0));
  CHECK(p.eval(2.0) == doctest::Approx(2.5));
  CHECK(p.eval(-1.0) == doctest::Approx(-2.0));
  CHECK(p.eval(5.0) == doctest::Approx(4.0));
  CHECK(p.eval(kInf) == kInf);
  CHECK(p.max_on(0.0, 3.0) == 3.0);
}

TEST_CASE("symmetric profiles evaluate mirrored points identically") {
  ReinhardtDomain d = tent();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 0.7);
  for (int i = 0; i < 1000; ++i) {
    double t = u(rng);
    CHECK(d.profile().eval(t) == d.profile().eval(-t));
  }
  CHECK(d.reflected() == d);
}

TEST_CASE("membership") {
  ReinhardtDomain d = tent();
  CHECK(contains(d, PointC2{1.0, 0.5}));
  CHECK_FALSE(contains(d, PointC2{1.0, 1.5}));
  CHECK_FALSE(contains(d, PointC2{3.0, 0.0}));
  CHECK_FALSE(contains(d, PointC2{0.0, 0.0}));
  CHECK(contains(bidisc(), PointC2{0.0, 0.0}));
  CHECK(contains(bidisc(), PointC2{0.5, -0.5}));
  CHECK_FALSE(contains(bidisc(), PointC2{0.5, 1.0}));
}

TEST_CASE("pseudoconvexity is concavity of the profile") {
  CHECK(is_pseudoconvex(tent(), true));
  ReinhardtDomain flat(RadialProfile({-0.5, 0.0, 0.5}, {0.0, 0.0, 0.0}), -1, 1);
  CHECK(is_pseudoconvex(flat));
  CHECK_FALSE(is_pseudoconvex(flat, true));
  ReinhardtDomain bad(RadialProfile({-0.5, 0.0, 0.5}, {0.0, -1.0, 0.0}), -1, 1);
  CHECK_FALSE(is_pseudoconvex(bad));
}

TEST_CASE("unit bidisc distance from the centre") {
  double d = boundary_distance_lower(bidisc(), PointC2{0.0, 0.0});
  CHECK(d <= 1.0);
  CHECK(d >= 1.0 - 1e-6);
}

TEST_CASE("certified distance sits below a fine brute-force grid") {
  ReinhardtDomain d = tent();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(-0.65, 0.65), uf(0.05, 0.95), ang(0, 2 * M_PI);
  int checked = 0;
  while (checked < 40) {
    double t = ut(rng);
    double rw = uf(rng) * std::exp(d.profile().eval(t));
    PointC2 p{std::polar(std::exp(t), ang(rng)), std::polar(rw, ang(rng))};
    double cert = boundary_distance_lower(d, p, 2048);
    double oracle = grid_distance(d, p, 20480);
    CHECK(cert <= oracle);
    CHECK(cert >= oracle * (1 - 1e-5) - 1e-9);
    ++checked;
  }
}

TEST_CASE("quarter-plane reduction agrees with a full angular grid") {
  ReinhardtDomain d = tent();
  PointC2 p{std::polar(1.1, 0.3), std::polar(0.4, -1.2)};
  double best = kInf;
  for (int i = 0; i <= 400; ++i) {
    double t = -0.7 + 1.4 * i / 400;
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b) {
        cplx z = std::polar(std::exp(t), 2 * M_PI * a / 64), w = std::polar(std::exp(d.profile().eval(t)), 2 * M_PI * b / 64);
        best = std::min(best, std::sqrt(std::norm(p.z - z) + std::norm(p.w - w)));
      }
  }
  CHECK(boundary_distance_lower(d, p) <= best);
}

TEST_CASE("slice radii and outer radius") {
  ReinhardtDomain d = tent();
  SliceRadii r = slice_radii(d, 1.0);
  CHECK(r.vertical == doctest::Approx(1.0));
  CHECK(r.horizontal == doctest::Approx(1.0 - std::exp(-0.7)));
  double R = outer_radius_upper(d, PointC2{1.0, 0.0});
  CHECK(R >= std::hypot(std::exp(0.7) + 1.0, 1.0) * (1 - 1e-12));
}

TEST_CASE("membership and distance are rotation invariant") {
  ReinhardtDomain d = tent();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI), ut(-0.6, 0.6), uf(0.1, 0.9);
  PointC2 p{std::exp(0.2), 0.3};
  double d0 = boundary_distance_lower(d, p);
  for (int i = 0; i < 1000; ++i) {
    PointC2 q{p.z * std::polar(1.0, ang(rng)), p.w * std::polar(1.0, ang(rng))};
    CHECK(contains(d, q) == contains(d, p));
    CHECK(boundary_distance_lower(d, q) == doctest::Approx(d0).epsilon(1e-9));
  }
}
