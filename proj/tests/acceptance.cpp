// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "sqz/commands.hpp"
#include "sqz/construct.hpp"
#include "sqz/estimate.hpp"
#include "sqz/io.hpp"
#include "sqz/numeric.hpp"
#include "sqz/smooth.hpp"

namespace fs = std::filesystem;
using namespace sqz;

namespace {

fs::path work;
int failures = 0;

struct Outcome {
  bool ok;
  std::string detail;
};

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt >= limit_s) {
    o.ok = false;
    o.detail += " [over time limit " + std::to_string(limit_s) + " s]";
  }
  if (!o.ok) ++failures;
  std::printf("[%s] %d %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
  std::fflush(stdout);
}

std::string str(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

ConstructionParams headline_params() {
  ConstructionParams p;
  p.levels = 2;
  p.schedule = ScheduleKind::Margin;
  p.margin_u = mpq_class(1, 20);
  return p;
}

RunConfig headline_config(const std::string& dir) {
  RunConfig c;
  c.construction.levels = 2;
  c.construction.schedule = "margin";
  c.construction.margin = "0.05";
  c.output = (work / dir).string();
  fs::remove_all(c.output);
  return c;
}

Outcome schedule() {
  auto t0 = std::chrono::steady_clock::now();
  BuildResult b = build({});
  const std::int64_t c[] = {7, 15, 31}, n[] = {99, 1900, 19199}, m[] = {99, 1801, 17299};
  const auto& L = b.certificate.levels;
  if (L.size() != 3) return {false, "expected 3 levels"};
  std::ostringstream os;
  bool ok = true;
  for (int k = 0; k < 3; ++k) {
    long double expect = c[k] * std::sqrt(2.0L / m[k]);
    double rel = static_cast<double>(std::fabs((L[k].s_upper - expect) / expect));
    ok = ok && L[k].c_k == c[k] && L[k].n_k == n[k] && L[k].m_k == m[k] && rel <= 1e-12 &&
         L[k].s_upper < 1.0 / (k + 1) && L[k].target_met;
    os << "C=" << L[k].c_k.get_str() << " n=" << L[k].n_k << " S<=" << str(L[k].s_upper) << " ";
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && dt < 1.0, os.str()};
}

Outcome headline() {
  RunConfig c = headline_config("headline");
  int rc = run_command("certify-smoothed", c);
  json j = json::parse(read_text(fs::path(c.output) / "smoothed_certificate.json"));
  json levi = json::parse(read_text(fs::path(c.output) / "levi_report.json"));
  const json& l2 = j["levels"][1];
  double up = std::max(parse_real(l2["s_upper"].get<std::string>()), parse_real(l2["s_upper_inverse"].get<std::string>()));
  double lo = parse_real(j["s_lower_p"].get<std::string>());
  double lmin = parse_real(levi["minimum"].get<std::string>());
  int pts = levi["grid"]["total_points"].get<int>();
  bool ok = rc == 0 && l2["k"] == 2 && up < lo && lo - up >= 0.01 && lmin > 1e-7 && pts >= 10000;
  return {ok, "exit " + std::to_string(rc) + ", s_upper(a_2)=" + str(up) + " < s_lower(1,0)=" + str(lo) +
                  ", margin " + str(lo - up) + ", Levi min " + str(lmin) + " on " + std::to_string(pts) + " points"};
}

Outcome containment() {
  int levels = 0, tight_caught = 0, tight_total = 0, unsound = 0, exact_fail = 0;
  for (const ConstructionParams& p : {ConstructionParams{}, headline_params()}) {
    BuildResult b = build(p);
    const ReinhardtDomain& d = b.domain;
    auto t = d.profile().breakpoints();
    auto v = d.profile().values();
    for (const auto& l : b.certificate.levels) {
      ++levels;
      const std::size_t k = l.breakpoint;
      const mpq_class n(l.n_k - l.m_k), m(l.m_k);
      auto excess = [&](const ReinhardtDomain& dd, std::size_t i) {
        auto tt = dd.profile().breakpoints();
        auto vv = dd.profile().values();
        mpq_class s = mpq_class(tt[i]) - mpq_class(tt[k]);
        mpq_class g = s < 0 ? mpq_class(0) : mpq_class(-m * s);
        return mpq_class(mpq_class(vv[i]) - mpq_class(vv[k]) + n * s - g);
      };
      auto oracle_ok = [&](const ReinhardtDomain& dd) {
        for (std::size_t i = 0; i < dd.profile().size(); ++i)
          if (excess(dd, i) > 0) return false;
        return true;
      };
      auto caught = [&](const ReinhardtDomain& dd) {
        try {
          Sheared sh = shear_normalize(dd, k);
          return !check_omega2_containment(sh.image, sh.m).ok;
        } catch (const CertificationError&) {
          return true;
        }
      };
      if (!oracle_ok(d) || caught(d)) ++exact_fail;
      for (std::size_t i = 0; i < d.profile().size(); ++i) {
        std::vector<double> vv(v.begin(), v.end());
        vv[i] += 1e-6;
        ReinhardtDomain mut(RadialProfile(std::vector<double>(t.begin(), t.end()), vv), d.t_min(), d.t_max());
        bool c = caught(mut);
        if (!c && !oracle_ok(mut)) ++unsound;
        if (i != k && excess(d, i) == 0) {
          ++tight_total;
          if (c) ++tight_caught;
        }
      }
    }
  }
  bool ok = exact_fail == 0 && unsound == 0 && tight_total >= levels && tight_caught == tight_total;
  return {ok, std::to_string(levels) + " levels exact in rational arithmetic; " + std::to_string(tight_caught) + "/" +
                  std::to_string(tight_total) + " tight-height mutations caught; " + std::to_string(unsound) +
                  " unsound acceptances"};
}

Outcome disc_search() {
  std::ostringstream os;
  bool ok = true;
  for (int m : {2, 8, 32}) {
    DiscOracleResult r = disc_oracle(m, 100000, 2024);
    bool good = r.discs >= 100000 && r.min_alpha >= std::sqrt(m / 2.0) - 1e-9;
    ok = ok && good;
    os << "m=" << m << " min|alpha|=" << str(r.min_alpha) << " (>= " << str(std::sqrt(m / 2.0)) << ") ";
  }
  return {ok, os.str() + "over 1e5 discs each"};
}

Outcome calibration() {
  RunConfig c;
  c.output = (work / "estimate").string();
  fs::remove_all(c.output);
  int rc = run_command("estimate", c);
  json j = json::parse(read_text(fs::path(c.output) / "estimates.json"));
  std::ostringstream os;
  double worst = 0;
  for (const auto& cal : j["calibration"]) {
    worst = std::max({worst, parse_real(cal["kobayashi_rel_error"].get<std::string>()),
                      parse_real(cal["caratheodory_rel_error"].get<std::string>())});
  }
  int checks = 0;
  for (const auto& e : j["entries"]) checks += static_cast<int>(e["sandwich"].size());
  int viol = j["sandwich_violations"].get<int>();
  bool ok = rc == 0 && j["calibration_ok"] == true && viol == 0;
  os << "worst calibration error " << str(100 * worst) << "%, " << viol << " sandwich violations in " << checks
     << " checks";
  return {ok, os.str()};
}

Outcome symmetry() {
  int mirrored = 0, rot_bad = 0, det_bad = 0;
  for (const ConstructionParams& p : {ConstructionParams{}, headline_params()}) {
    BuildResult b = build(p);
    for (const auto& l : b.certificate.levels) {
      Bound r = squeezing_upper_at_breakpoint(b.domain, l.breakpoint, l.window);
      Bound s = squeezing_upper_at_breakpoint(b.domain, b.domain.profile().size() - 1 - l.breakpoint, l.window);
      if (std::memcmp(&r.value, &s.value, sizeof(double)) != 0 ||
          std::memcmp(&l.s_upper, &l.s_upper_inverse, sizeof(double)) != 0)
        return {false, "mirror bounds differ at level " + std::to_string(l.k)};
      ++mirrored;
    }
  }

  BuildResult b = build(headline_params());
  SmoothDomain sd = smooth(b.domain, {});
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI), ut(-0.69, 0.69), ul(-20.0, 1.0);
  const double base = squeezing_lower_inclusion(b.domain, {1.0, 0.0}).value;
  for (int i = 0; i < 1000; ++i) {
    double t = ut(rng);
    double lam = b.domain.profile().eval(t) + ul(rng);
    PointC2 p{std::exp(t), std::exp(lam)};
    cplx rz = std::polar(1.0, ang(rng)), rw = std::polar(1.0, ang(rng));
    PointC2 q{p.z * rz, p.w * rw};
    if (contains(b.domain, p) != contains(b.domain, q) || sd.contains(p) != sd.contains(q)) ++rot_bad;
    double v = squeezing_lower_inclusion(b.domain, {rz, 0.0}).value;
    if (std::fabs(v - base) > 1e-12 * base) ++rot_bad;
  }

  std::vector<fs::path> dirs;
  for (const char* name : {"det_a", "det_b"}) {
    RunConfig c = headline_config(name);
    c.estimator.budget = 40;
    c.estimator.restarts = 2;
    run_command("all", c);
    dirs.push_back(c.output);
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    ++files;
    fs::path other = dirs[1] / e.path().filename();
    if (!fs::exists(other) || read_text(e.path()) != read_text(other)) ++det_bad;
  }
  for (const auto& e : fs::directory_iterator(dirs[1]))
    if (!fs::exists(dirs[0] / e.path().filename())) ++det_bad;
  bool ok = rot_bad == 0 && det_bad == 0 && files > 0;
  return {ok, std::to_string(mirrored) + " mirrored level bounds bit-equal; " + std::to_string(rot_bad) +
                  " rotation mismatches over 1000 rotations; " + std::to_string(files) + " run files, " +
                  std::to_string(det_bad) + " differing"};
}

PointC2 shift(const PointC2& p, int axis, double h) {
  PointC2 q = p;
  if (axis == 0) q.z += h;
  if (axis == 1) q.z += cplx(0, h);
  if (axis == 2) q.w += h;
  if (axis == 3) q.w += cplx(0, h);
  return q;
}

double fd2(const SmoothDomain& s, const PointC2& p, int a, int b, double h) {
  auto one = [&](double e) {
    auto r = [&](double x, double y) { return s.rho(shift(shift(p, a, x), b, y)); };
    if (a == b) return (r(e, 0) - 2 * s.rho(p) + r(-e, 0)) / (e * e);
    return (r(e, e) - r(e, -e) - r(-e, e) + r(-e, -e)) / (4 * e * e);
  };
  return (4 * one(h / 2) - one(h)) / 3;
}

Outcome inner_approximation() {
  BuildResult b = build(headline_params());
  const ReinhardtDomain& d = b.domain;
  SmoothDomain s = smooth(d, {});
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ut(d.t_min(), d.t_max()), ul(-3.0, 0.2), ang(0, 2 * M_PI);
  int inside = 0, escaped = 0;
  while (inside < 100000) {
    double t = ut(rng);
    PointC2 p{std::polar(std::exp(t), ang(rng)), std::polar(std::exp(s.phi(t) + ul(rng)), ang(rng))};
    if (s.rho(p) >= 0) continue;
    ++inside;
    if (!contains(d, p)) ++escaped;
  }
  int above = 0;
  const int grid = 1000000;
  for (int i = 0; i <= grid; ++i) {
    double t = d.t_min() + (d.t_max() - d.t_min()) * i / grid;
    if (!(s.phi(t) <= d.profile().eval(t))) ++above;
  }
  auto [lo, hi] = s.rims();
  std::uniform_real_distribution<double> ur(lo, hi);
  int tested = 0, hess_bad = 0;
  double worst = 0;
  while (tested < 100) {
    double t = ur(rng);
    double lr = s.log_radius(t);
    if (!std::isfinite(lr) || s.phi(t) < -300) continue;
    PointC2 p{std::polar(std::exp(t), ang(rng)), std::polar(std::exp(lr), ang(rng))};
    ComplexHessian H = complex_hessian(s, p);
    double h = 1e-2 * std::abs(p.z) / std::max({1.0, std::fabs(s.dphi(t)), s.params().kappa});
    double q[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) q[i][j] = q[j][i] = fd2(s, p, i, j, h);
    cplx zz(0.25 * (q[0][0] + q[1][1]), 0), ww(0.25 * (q[2][2] + q[3][3]), 0);
    cplx zw(0.25 * (q[0][2] + q[1][3]), 0.25 * (q[0][3] - q[1][2]));
    double norm = std::sqrt(std::norm(H.zz) + std::norm(H.ww) + 2 * std::norm(H.zw));
    double err = std::sqrt(std::norm(H.zz - zz) + std::norm(H.ww - ww) + 2 * std::norm(H.zw - zw)) / norm;
    worst = std::max(worst, err);
    if (!(err <= 1e-6)) ++hess_bad;
    ++tested;
  }
  bool ok = escaped == 0 && above == 0 && hess_bad == 0;
  return {ok, std::to_string(escaped) + "/100000 sublevel samples outside the domain; " + std::to_string(above) +
                  " grid points with smoothed above base; Hessian worst relative error " + str(worst) +
                  " at 100 points"};
}

}  // namespace

int main(int argc, char** argv) {
  work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "squeeze_acceptance";
  fs::create_directories(work);
  criterion(1, "schedule reproduction", 1.0, schedule);
  criterion(2, "headline non-psh certificate", 60.0, headline);
  criterion(3, "model-domain containment exactness", 0, containment);
  criterion(4, "disc-search oracle", 120.0, disc_search);
  criterion(5, "calibration and sandwich", 0, calibration);
  criterion(6, "symmetry and invariance", 0, symmetry);
  criterion(7, "inner approximation", 0, inner_approximation);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
