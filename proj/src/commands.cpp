#include "sqz/commands.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "sqz/construct.hpp"
#include "sqz/estimate.hpp"
#include "sqz/io.hpp"
#include "sqz/numeric.hpp"
#include "sqz/smooth.hpp"

namespace fs = std::filesystem;

namespace sqz {

LogLevel log_level() {
  const char* v = std::getenv("SQUEEZE_LOG");
  if (!v) return LogLevel::Info;
  std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::Quiet;
  if (s == "debug" || s == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

void log_info(const std::string& msg) {
  if (log_level() != LogLevel::Quiet) std::cerr << "squeeze: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() == LogLevel::Debug) std::cerr << "squeeze: " << msg << "\n";
}

namespace {

std::string real(double x) { return format_real(x); }

// The directory itself is the output location, so it is left out.
void write_config(const RunConfig& c, const fs::path& out) {
  json j = config_to_json(c);
  j.erase("output");
  write_text(out / "config.json", dump(j));
}

std::string csv_profile(const ReinhardtDomain& d, const SmoothDomain* s, int n) {
  std::ostringstream os;
  os << "t,phi,phi_smooth,log_radius_smooth\n";
  std::vector<double> ts;
  for (int i = 0; i <= n; ++i) ts.push_back(d.t_min() + (d.t_max() - d.t_min()) * i / n);
  for (double t : d.profile().breakpoints()) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double t : ts) {
    os << real(t) << ',' << real(d.profile().eval(t)) << ',' << real(s ? s->phi(t) : nan) << ','
       << real(s ? s->log_radius(t) : nan) << '\n';
  }
  return os.str();
}

BuildResult build_from(const RunConfig& c) {
  ConstructionParams p = construction_params(c);
  log_info("building " + std::to_string(p.levels) + " levels, " + c.construction.schedule + " schedule");
  return build(p);
}

}  // namespace

int cmd_build(const RunConfig& c, const fs::path& out) {
  BuildResult b = build_from(c);
  write_text(out / "domain.json", dump(domain_to_json(b.domain)));
  write_text(out / "certificate.json", dump(certificate_to_json(b.certificate)));
  write_text(out / "certificate.csv", certificate_csv(b.certificate));
  for (const auto& l : b.certificate.levels)
    log_info("level " + std::to_string(l.k) + ": n=" + std::to_string(l.n_k) + " m=" + std::to_string(l.m_k) +
             " s_upper=" + real(std::max(l.s_upper, l.s_upper_inverse)) + (l.target_met ? "" : " (target missed)"));
  return all_targets_met(b.certificate) ? kExitOk : kExitCertification;
}

int cmd_certify_smoothed(const RunConfig& c, const fs::path& out) {
  BuildResult b = build_from(c);
  SmoothDomain s = smooth(b.domain, smoothing_params(c));
  const double tol = parse_real(c.levi_tolerance);
  LeviReport levi = levi_verify(s, c.grids.levi, tol);
  log_info("Levi minimum " + real(levi.minimum) + " over " + std::to_string(levi.total_points) + " points");
  std::vector<int> levels;
  for (const auto& l : b.certificate.levels) levels.push_back(l.k);
  SmoothedCertificate sc = certify_smoothed(s, b, levels, c.grids.distance);

  write_text(out / "smooth_profile.csv", csv_profile(b.domain, &s, 4000));
  write_text(out / "levi_report.json", dump(levi_to_json(levi, s)));
  json j = certificate_to_json(sc.certificate);
  j["s_lower_distance"] = real(sc.s_lower_distance);
  j["s_lower_radius"] = real(sc.s_lower_radius);
  j["levi"] = {{"minimum", real(levi.minimum)},
               {"tolerance", real(levi.tolerance)},
               {"total_points", levi.total_points},
               {"strictly_pseudoconvex", levi.strictly_pseudoconvex}};
  j["epistemic_status"] =
      "squeezing bounds are certified; strict pseudoconvexity is numerically verified on a finite grid, not proven";
  write_text(out / "smoothed_certificate.json", dump(j));

  const auto& cert = sc.certificate;
  if (cert.violation)
    log_info("violation at level " + std::to_string(*cert.violation_level) + ", margin " + real(*cert.margin));
  else
    log_info("no certified violation");
  if (!levi.strictly_pseudoconvex) log_info("Levi minimum not above tolerance " + real(tol));
  return cert.violation && levi.strictly_pseudoconvex ? kExitOk : kExitCertification;
}

namespace {

struct Entry {
  std::string label;
  LogRegion region;
  PointC2 p;
  Direction xi;
  std::vector<Bound> certified;
  bool estimate_c = true;
};

void trace_rows(const std::string& label, const std::string& q, const std::vector<TracePoint>& tr,
                std::ostringstream& csv) {
  for (const auto& t : tr)
    csv << label << ',' << q << ',' << t.restart << ',' << t.iteration << ',' << real(t.objective) << ','
        << real(t.feasibility_margin) << '\n';
}

}  // namespace

int cmd_estimate(const RunConfig& c, const fs::path& out) {
  BuildResult b = build_from(c);
  const ReinhardtDomain& d = b.domain;
  SearchOptions opt = search_options(c);
  const Direction x11{1.0, 1.0}, x10{1.0, 0.0};
  const PointC2 one{1.0, 0.0}, origin{0.0, 0.0};

  std::vector<Entry> entries;
  for (const auto& l : b.certificate.levels) {
    if (l.k > 2) break;
    std::size_t bp = l.breakpoint;
    Sheared sh = shear_normalize(d, bp);
    Entry e{"level" + std::to_string(l.k) + "_sheared", as_region(sh.image, "sheared level " + std::to_string(l.k)),
            one, x11, {}, true};
    e.certified.push_back(kobayashi_lower_shear(d, bp));
    e.certified.push_back(caratheodory_upper_from_radii(l.window.horizontal_radius, 1.0, one, x11,
                                                        "caratheodory_upper_slices on sheared window"));
    entries.push_back(std::move(e));
  }
  {
    Entry e{"centre", as_region(d), one, x11, {}, true};
    e.certified.push_back(caratheodory_upper_slices(d, one, x11));
    double R = outer_radius_upper(d, one);
    Bound cl{Quantity::Caratheodory, Side::Lower, div_down(sqrt_down(2.0), R), one, x11, true,
             "domain inside the ball of radius " + real(R) + " about the basepoint"};
    e.certified.push_back(cl);
    double r = boundary_distance_lower(d, one, c.grids.distance);
    e.certified.push_back({Quantity::Kobayashi, Side::Upper, div_up(up(std::sqrt(2.0)), r), one, x11, true,
                           "ball of radius " + real(r) + " about the basepoint inside the domain"});
    entries.push_back(std::move(e));
  }
  for (std::int64_t m : {2, 8, 32}) {
    Entry e{"omega2_m" + std::to_string(m), omega2_region(m), one, x11, {}, false};
    e.certified.push_back({Quantity::Kobayashi, Side::Lower, sqrt_down(m / 2.0), one, x11, true,
                           "model domain bound sqrt(m/2)"});
    entries.push_back(std::move(e));
  }
  {
    Entry e{"omega1_m8", omega1_region(8, 0.5, 2.0), one, x11, {}, true};
    e.certified.push_back(caratheodory_upper_from_radii(0.5, 1.0, one, x11, "caratheodory_upper_slices on window"));
    entries.push_back(std::move(e));
  }

  std::ostringstream csv;
  csv << "label,quantity,restart,iteration,objective,feasibility_margin\n";
  json jentries = json::array();
  json warnings = json::array();
  int violations = 0;
  for (const auto& e : entries) {
    log_info("estimating at " + e.label);
    KobayashiEstimate k = kobayashi_upper_search(e.region, e.p, e.xi, opt);
    trace_rows(e.label, "kobayashi", k.trace, csv);
    if (k.fallback) warnings.push_back(e.label + ": Kobayashi search fell back to the linear disc");
    std::optional<CaratheodoryEstimate> cr;
    if (e.estimate_c) {
      cr = caratheodory_lower_search(e.region, e.p, e.xi, default_index_set(e.region, 3), opt);
      trace_rows(e.label, "caratheodory", cr->trace, csv);
    }
    json checks = json::array();
    auto check = [&](const std::string& what, double lo, double hi) {
      bool ok = lo <= hi;
      if (!ok) ++violations;
      checks.push_back({{"check", what}, {"lower", real(lo)}, {"upper", real(hi)}, {"ok", ok}});
    };
    for (const auto& cb : e.certified) {
      if (cb.quantity == Quantity::Kobayashi && cb.side == Side::Lower)
        check("certified K lower <= K estimate", cb.value, k.bound.value);
      if (cr && cb.quantity == Quantity::Caratheodory && cb.side == Side::Upper)
        check("C estimate <= certified C upper", cr->bound.value, cb.value);
      if (cb.quantity == Quantity::Kobayashi && cb.side == Side::Upper)
        check("K estimate <= certified K upper", k.bound.value, cb.value);
      if (cb.quantity == Quantity::Caratheodory && cb.side == Side::Lower)
        check("certified C lower <= K estimate", cb.value, k.bound.value);
    }
    if (cr) check("C estimate <= K estimate", cr->bound.value, k.bound.value);
    json certified = json::array();
    for (const auto& cb : e.certified) certified.push_back(bound_to_json(cb));
    json estimates = json::array();
    json kj = bound_to_json(k.bound);
    kj["feasibility_margin"] = real(k.feasibility_margin);
    kj["fallback"] = k.fallback;
    estimates.push_back(kj);
    if (cr) {
      json cj = bound_to_json(cr->bound);
      cj["sampled_sup"] = real(cr->sampled_sup);
      estimates.push_back(cj);
    }
    jentries.push_back({{"label", e.label},
                        {"region", e.region.name},
                        {"certified", certified},
                        {"estimates", estimates},
                        {"sandwich", checks}});
  }

  json calib = json::array();
  struct Cal {
    std::string name;
    ReferenceModel model;
    LogRegion region;
    Direction xi;
  };
  std::vector<Cal> cals{{"disc", ReferenceModel::Disc, bidisc_region(), x10},
                        {"bidisc", ReferenceModel::Polydisc, bidisc_region(), x11},
                        {"ball", ReferenceModel::Ball, ball_region(), x11}};
  bool calib_ok = true;
  for (const auto& cl : cals) {
    log_info("calibrating on the " + cl.name);
    ReferenceValues ref = reference_metric(cl.model, origin, cl.xi);
    KobayashiEstimate k = kobayashi_upper_search(cl.region, origin, cl.xi, opt);
    CaratheodoryEstimate cr =
        caratheodory_lower_search(cl.region, origin, cl.xi, default_index_set(cl.region, 3), opt);
    trace_rows("calibration_" + cl.name, "kobayashi", k.trace, csv);
    trace_rows("calibration_" + cl.name, "caratheodory", cr.trace, csv);
    double ek = std::abs(k.bound.value - ref.kobayashi) / ref.kobayashi;
    double ec = std::abs(cr.bound.value - ref.caratheodory) / ref.caratheodory;
    bool ok = ek <= 0.05 && ec <= 0.05;
    calib_ok = calib_ok && ok;
    calib.push_back({{"model", cl.name},
                     {"direction", point_to_json({cl.xi.z, cl.xi.w})},
                     {"kobayashi_estimate", real(k.bound.value)},
                     {"kobayashi_reference", real(ref.kobayashi)},
                     {"kobayashi_rel_error", real(ek)},
                     {"caratheodory_estimate", real(cr.bound.value)},
                     {"caratheodory_reference", real(ref.caratheodory)},
                     {"caratheodory_rel_error", real(ec)},
                     {"within_5_percent", ok}});
  }

  json j = {{"version", kFormatVersion},
            {"certified", false},
            {"seed", opt.seed},
            {"budget", opt.budget},
            {"restarts", opt.restarts},
            {"entries", jentries},
            {"calibration", calib},
            {"calibration_ok", calib_ok},
            {"sandwich_violations", violations},
            {"warnings", warnings}};
  write_text(out / "estimates.json", dump(j));
  write_text(out / "estimate_trace.csv", csv.str());
  log_info("sandwich violations: " + std::to_string(violations));
  return violations == 0 ? kExitOk : kExitCertification;
}

int cmd_plotdata(const RunConfig& c, const fs::path& out) {
  BuildResult b = build_from(c);
  const ReinhardtDomain& d = b.domain;
  std::optional<SmoothDomain> s;
  try {
    s = smooth(d, smoothing_params(c));
  } catch (const std::exception& e) {
    log_info(std::string("smoothed profile unavailable: ") + e.what());
  }
  write_text(out / "profile.csv", csv_profile(d, s ? &*s : nullptr, 2000));

  std::ostringstream bp;
  bp << "index,t,phi\n";
  {
    std::vector<double> ts{0.0};
    for (const auto& l : b.certificate.levels) {
      double t = d.profile().breakpoints()[l.breakpoint];
      ts.push_back(t);
      ts.push_back(-t);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i < ts.size(); ++i) bp << i << ',' << real(ts[i]) << ',' << real(d.profile().eval(ts[i])) << '\n';
  }
  write_text(out / "breakpoints.csv", bp.str());

  std::ostringstream sp;
  sp << "level,s,psi\n";
  for (const auto& l : b.certificate.levels) {
    Sheared sh = shear_normalize(d, l.breakpoint);
    const auto& pr = sh.image.profile();
    std::vector<double> ss{sh.image.t_min()};
    for (double t : pr.breakpoints()) ss.push_back(t);
    ss.push_back(sh.image.t_max());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    for (double x : ss) sp << l.k << ',' << real(x) << ',' << real(pr.eval(x)) << '\n';
  }
  write_text(out / "sheared_profiles.csv", sp.str());

  std::ostringstream bc;
  bc << "kind,t,value\n";
  for (const auto& l : b.certificate.levels) {
    double t = d.profile().breakpoints()[l.breakpoint];
    bc << "s_upper," << real(-t) << ',' << real(l.s_upper_inverse) << '\n';
    bc << "s_upper," << real(t) << ',' << real(l.s_upper) << '\n';
  }
  const int n = 40;
  for (int i = 1; i < n; ++i) {
    double t = d.t_min() + (d.t_max() - d.t_min()) * i / n;
    if (i == n / 2) t = 0;
    try {
      Bound lo = squeezing_lower_inclusion(d, {std::exp(t), 0.0}, c.grids.distance);
      bc << "s_lower," << real(t) << ',' << real(lo.value) << '\n';
    } catch (const NumericalError& e) {
      log_debug("no inclusion bound at t=" + real(t) + ": " + e.what());
    }
  }
  write_text(out / "bound_curve.csv", bc.str());
  return kExitOk;
}

int cmd_all(const RunConfig& c, const fs::path& out) {
  int rc = cmd_build(c, out);
  rc = std::max(rc, cmd_certify_smoothed(c, out));
  rc = std::max(rc, cmd_estimate(c, out));
  rc = std::max(rc, cmd_plotdata(c, out));
  return rc;
}

namespace {

class DirLock {
 public:
  explicit DirLock(fs::path p) : path_(std::move(p)) {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) throw ValidationError("output directory is locked by another run: " + path_.string());
  }
  ~DirLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

}  // namespace

int run_command(const std::string& name, const RunConfig& c) {
  try {
    validate(c);
    fs::path out = c.output;
    fs::create_directories(out);
    DirLock lock(out / ".squeeze.lock");
    write_config(c, out);
    if (name == "build") return cmd_build(c, out);
    if (name == "certify-smoothed") return cmd_certify_smoothed(c, out);
    if (name == "estimate") return cmd_estimate(c, out);
    if (name == "plot-data") return cmd_plotdata(c, out);
    if (name == "all") return cmd_all(c, out);
    throw ValidationError("unknown command '" + name + "'");
  } catch (const ValidationError& e) {
    std::cerr << "squeeze: validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CertificationError& e) {
    std::cerr << "squeeze: certification failure: " << e.what() << "\n";
    return kExitCertification;
  } catch (const NumericalError& e) {
    std::cerr << "squeeze: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "squeeze: internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace sqz
