#include "sqz/construct.hpp"

#include <algorithm>
#include <cmath>

#include "sqz/numeric.hpp"

namespace sqz {

namespace {

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::size_t level_index(int levels, int k) { return static_cast<std::size_t>(levels + k); }

}  // namespace

void validate(const ConstructionParams& p) {
  if (!(p.a > 1)) throw ValidationError("annulus radius a must exceed 1");
  if (p.levels < 0) throw ValidationError("levels must be nonnegative");
  if (p.levels > 64) throw ValidationError("levels above 64 are not supported");
  if (!p.a_sequence.empty()) {
    if (static_cast<int>(p.a_sequence.size()) != p.levels)
      throw ValidationError("a_sequence length must equal levels");
    mpq_class prev = 1;
    for (std::size_t i = 0; i < p.a_sequence.size(); ++i) {
      if (!(p.a_sequence[i] > prev)) throw ValidationError("a_sequence must be strictly increasing and above 1");
      prev = p.a_sequence[i];
    }
    if (!(prev < p.a)) throw ValidationError("a_sequence must stay below a");
  }
  if (p.schedule == ScheduleKind::Margin && !(p.margin_u > 0 && p.margin_u < 1))
    throw ValidationError("margin u must lie in (0, 1)");
  if (!(p.margin_guard >= 0) || !std::isfinite(p.margin_guard)) throw ValidationError("margin_guard must be >= 0");
  if (p.distance_grid < 16) throw ValidationError("distance grid must be at least 16");
  if (p.exponent_limit < 1) throw ValidationError("exponent limit must be positive");
}

std::vector<mpq_class> radii_sequence(const ConstructionParams& p) {
  std::vector<mpq_class> r{mpq_class(1)};
  if (!p.a_sequence.empty()) {
    r.insert(r.end(), p.a_sequence.begin(), p.a_sequence.end());
    r.push_back(p.a);
    return r;
  }
  for (int k = 1; k <= p.levels + 1; ++k) {
    mpz_class pow2 = mpz_class(1) << k;
    mpq_class v = p.a - (p.a - 1) / mpq_class(pow2);
    v.canonicalize();
    r.push_back(v);
  }
  return r;
}

mpq_class level_constant(const ConstructionParams& p, int k) {
  if (k < 1 || k > p.levels) throw ValidationError("level out of range");
  auto r = radii_sequence(p);
  mpq_class lo = 1 - r[k - 1] / r[k], hi = r[k + 1] / r[k] - 1;
  mpq_class mn = lo < hi ? lo : hi;
  if (!(mn > 0)) throw ValidationError("degenerate radii at level " + std::to_string(k));
  mpq_class c = 1 / mn + 1;
  c.canonicalize();
  return c;
}

mpq_class level_target(const ConstructionParams& p, int k) {
  if (p.schedule == ScheduleKind::Margin && k == p.levels) return p.margin_u;
  return mpq_class(1, k);
}

std::int64_t choose_exponent(const ConstructionParams& p, int k, const mpq_class& c_k, std::int64_t n_prev) {
  if (n_prev < 0) throw ValidationError("previous exponent must be nonnegative");
  mpq_class q;
  if (p.schedule == ScheduleKind::Paper || k < p.levels) {
    q = mpq_class(2 * k * k) * c_k * c_k;
  } else {
    mpq_class r = c_k / p.margin_u;
    q = 2 * r * r;
  }
  mpz_class n = n_prev + floor_q(q) + 1;
  if (n > mpz_class(std::to_string(p.exponent_limit)))
    throw ValidationError("exponent at level " + std::to_string(k) + " exceeds the configured limit");
  return std::stoll(n.get_str());
}

ShearWindow exact_window(const ConstructionParams& p, int k) {
  auto r = radii_sequence(p);
  mpq_class a = r[k - 1] / r[k], b = r[k + 1] / r[k];
  mpq_class lo = 1 - a, hi = b - 1;
  ShearWindow w;
  w.lower_ratio = to_double_up(a);
  w.upper_ratio = to_double_down(b);
  w.horizontal_radius = to_double_down(lo < hi ? lo : hi);
  return w;
}

namespace {

double ceil_grid(double x, int g) { return std::ldexp(std::ceil(std::ldexp(x, g)), -g); }

bool representable(const mpq_class& q) { return mpq_class(q.get_d()) == q; }

}  // namespace

// Breakpoints sit on the grid 2^-G, shifted outward so every gap is at least
// the exact log-ratio gap. Integer slopes then give heights that are exact
// doubles, and the sheared images are exact.
ReinhardtDomain build_domain(const ConstructionParams& p, std::vector<std::int64_t>* exponents) {
  validate(p);
  const double ta = std::log(p.a.get_d());
  if (p.levels == 0) {
    if (exponents) exponents->clear();
    return ReinhardtDomain(RadialProfile({-ta, ta}, {0.0, 0.0}, {true, true}), -ta, ta);
  }
  auto r = radii_sequence(p);
  std::vector<std::int64_t> n;
  std::int64_t prev = 0;
  for (int k = 1; k <= p.levels; ++k) {
    prev = choose_exponent(p, k, level_constant(p, k), prev);
    n.push_back(prev);
  }
  std::vector<double> t;
  std::vector<mpq_class> phi;
  int g = 40;
  for (;; --g) {
    if (g < 8) throw NumericalError("exponents too large for exact breakpoint heights");
    t.assign(1, 0.0);
    phi.assign(1, mpq_class(0));
    bool ok = true;
    for (int k = 1; k <= p.levels && ok; ++k) {
      t.push_back(ceil_grid(up(std::log(r[k].get_d())), g) + std::ldexp(2.0 * k, -g));
      mpq_class drop = k == 1 ? mpq_class(0) : mpq_class(n[k - 2]) * (mpq_class(t[k]) - mpq_class(t[k - 1]));
      phi.push_back(phi.back() - drop);
      ok = representable(phi.back()) && representable(mpq_class(t[k]) - mpq_class(t[k - 1]));
    }
    if (ok && t.back() < ta) break;
  }
  // The outer edge stays at log a; its height is rounded down, which only
  // steepens the last segment.
  mpq_class end_phi = phi.back() - mpq_class(n.back()) * (mpq_class(ta) - mpq_class(t.back()));
  t.push_back(ta);
  phi.push_back(mpq_class(to_double_down(end_phi)));

  std::vector<double> bt, bphi;
  for (int k = p.levels + 1; k >= 0; --k) {
    if (k == 0) continue;
    bt.push_back(-t[k]);
    bphi.push_back(phi[k].get_d());
  }
  for (int k = 1; k <= p.levels + 1; ++k) {
    bt.push_back(t[k]);
    bphi.push_back(phi[k].get_d());
  }
  if (exponents) *exponents = n;
  return ReinhardtDomain(RadialProfile(std::move(bt), std::move(bphi), {true, true}), -ta, ta);
}

ContainmentReport verify_prime_domain_inclusion(const ReinhardtDomain& d, const LevelRecord& level) {
  Sheared sh = shear_normalize(d, level.breakpoint);
  if (sh.m != level.m_k) return {false, 0.0, "slope drop differs from the recorded m_k"};
  return check_omega1_inclusion(sh.image, sh.m, level.window);
}

void decide_violation(ConstructionCertificate& cert) {
  cert.violation = false;
  cert.violation_level.reset();
  cert.margin.reset();
  double best = kInf;
  for (const auto& lv : cert.levels) {
    double mx = std::max(lv.s_upper, lv.s_upper_inverse);
    best = std::min(best, mx);
    if (!cert.violation && mx < cert.s_lower_p - cert.margin_guard) {
      cert.violation = true;
      cert.violation_level = lv.k;
      cert.margin = cert.s_lower_p - mx;
    }
  }
  if (!cert.violation && !cert.levels.empty()) cert.margin = cert.s_lower_p - best;
}

bool all_targets_met(const ConstructionCertificate& cert) {
  return std::all_of(cert.levels.begin(), cert.levels.end(), [](const LevelRecord& l) { return l.target_met; });
}

BuildResult build(const ConstructionParams& p) {
  std::vector<std::int64_t> n;
  ReinhardtDomain d = build_domain(p, &n);
  ConstructionCertificate cert;
  cert.schedule = p.schedule == ScheduleKind::Paper ? "paper" : "margin";
  cert.a = p.a;
  cert.margin_guard = p.margin_guard;
  auto r = radii_sequence(p);
  const std::size_t last = d.profile().size() - 1;
  for (int k = 1; k <= p.levels; ++k) {
    LevelRecord lv;
    lv.k = k;
    lv.a_k = r[k];
    lv.c_k = level_constant(p, k);
    lv.n_k = n[k - 1];
    lv.m_k = lv.n_k - (k > 1 ? n[k - 2] : 0);
    lv.target = level_target(p, k);
    lv.breakpoint = level_index(p.levels, k);
    lv.window = exact_window(p, k);
    ContainmentReport inc = verify_prime_domain_inclusion(d, lv);
    if (!inc.ok) throw CertificationError("level " + std::to_string(k) + ": " + inc.detail);
    try {
      Bound up_b = squeezing_upper_at_breakpoint(d, lv.breakpoint, lv.window);
      Bound inv_b = squeezing_upper_at_breakpoint(d, last - lv.breakpoint, lv.window);
      lv.s_upper = up_b.value;
      lv.s_upper_inverse = inv_b.value;
      lv.provenance = up_b.provenance;
    } catch (const CertificationError& e) {
      throw CertificationError("level " + std::to_string(k) + ": " + e.what());
    }
    // 2 C^2 / m < target^2, decided in exact arithmetic.
    bool exact = 2 * lv.c_k * lv.c_k < lv.target * lv.target * mpq_class(lv.m_k);
    lv.target_met = exact && std::max(lv.s_upper, lv.s_upper_inverse) < lv.target.get_d();
    cert.levels.push_back(std::move(lv));
  }
  Bound lower = squeezing_lower_inclusion(d, PointC2{1.0, 0.0}, p.distance_grid);
  cert.s_lower_p = lower.value;
  cert.s_lower_provenance = lower.provenance;
  decide_violation(cert);
  cert.notes = {
      "a_0 = 1; a_{K+1} is the next term of the default rule, or a for an explicit sequence",
      "certificates concern only the first K levels of the construction",
      "violation level is the smallest k with max upper < s_lower_p - margin_guard",
  };
  return {std::move(d), std::move(cert)};
}

}  // namespace sqz
