#include "sqz/io.hpp"

#include <fstream>
#include <sstream>

#include "sqz/numeric.hpp"

namespace sqz {

namespace {

std::string real(double x) { return format_real(x); }

double real_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a decimal string");
  return parse_real(v.get<std::string>());
}

std::string rational(const mpq_class& q) { return q.get_str(); }

}  // namespace

json domain_to_json(const ReinhardtDomain& d) {
  json bp = json::array();
  const auto& pr = d.profile();
  for (std::size_t i = 0; i < pr.size(); ++i) bp.push_back({real(pr.breakpoints()[i]), real(pr.values()[i])});
  return {{"version", kFormatVersion},
          {"t_min", real(d.t_min())},
          {"t_max", real(d.t_max())},
          {"breakpoints", bp},
          {"flags", {{"symmetric", pr.flags().symmetric}, {"pseudoconvex", pr.flags().pseudoconvex}}}};
}

ReinhardtDomain domain_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ValidationError("domain document must be an object");
    if (j.value("version", 0) != kFormatVersion) throw ValidationError("unsupported domain version");
    std::vector<double> t, phi;
    for (const auto& row : j.at("breakpoints")) {
      if (!row.is_array() || row.size() != 2) throw ValidationError("breakpoint rows must be [t, phi] pairs");
      t.push_back(parse_real(row[0].get<std::string>()));
      phi.push_back(parse_real(row[1].get<std::string>()));
    }
    ProfileFlags f;
    if (j.contains("flags")) {
      f.symmetric = j["flags"].value("symmetric", false);
      f.pseudoconvex = j["flags"].value("pseudoconvex", false);
    }
    return ReinhardtDomain(RadialProfile(std::move(t), std::move(phi), f), real_field(j, "t_min"),
                           real_field(j, "t_max"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed domain document: ") + e.what());
  }
}

json point_to_json(const PointC2& p) {
  return json::array({real(p.z.real()), real(p.z.imag()), real(p.w.real()), real(p.w.imag())});
}

json bound_to_json(const Bound& b) {
  json dir = nullptr;
  if (b.direction) dir = point_to_json({b.direction->z, b.direction->w});
  return {{"quantity", to_string(b.quantity)}, {"side", to_string(b.side)},   {"value", real(b.value)},
          {"basepoint", point_to_json(b.basepoint)}, {"direction", dir},   {"certified", b.certified},
          {"provenance", b.provenance}};
}

json certificate_to_json(const ConstructionCertificate& c) {
  json levels = json::array();
  for (const auto& l : c.levels) {
    levels.push_back({{"k", l.k},
                      {"a_k", real(l.a_k.get_d())},
                      {"a_k_exact", rational(l.a_k)},
                      {"C_k", real(l.c_k.get_d())},
                      {"C_k_exact", rational(l.c_k)},
                      {"m_k", l.m_k},
                      {"n_k", l.n_k},
                      {"s_upper", real(l.s_upper)},
                      {"s_upper_inverse", real(l.s_upper_inverse)},
                      {"target", real(l.target.get_d())},
                      {"target_exact", rational(l.target)},
                      {"target_met", l.target_met},
                      {"window",
                       {{"a", real(l.window.lower_ratio)},
                        {"b", real(l.window.upper_ratio)},
                        {"r_h", real(l.window.horizontal_radius)}}},
                      {"provenance", l.provenance}});
  }
  json j = {{"version", kFormatVersion},
            {"kind", c.kind},
            {"schedule", c.schedule},
            {"a", rational(c.a)},
            {"levels", levels},
            {"s_lower_p", real(c.s_lower_p)},
            {"s_lower_basepoint", point_to_json({1.0, 0.0})},
            {"s_lower_provenance", c.s_lower_provenance},
            {"margin_guard", real(c.margin_guard)},
            {"violation", c.violation},
            {"violation_level", c.violation_level ? json(*c.violation_level) : json(nullptr)},
            {"margin", c.margin ? json(real(*c.margin)) : json(nullptr)},
            {"notes", c.notes}};
  return j;
}

std::string certificate_csv(const ConstructionCertificate& c) {
  std::ostringstream os;
  os << "k,a_k,C_k,m_k,n_k,s_upper_k,target\n";
  for (const auto& l : c.levels)
    os << l.k << ',' << real(l.a_k.get_d()) << ',' << real(l.c_k.get_d()) << ',' << l.m_k << ',' << l.n_k << ','
       << real(std::max(l.s_upper, l.s_upper_inverse)) << ',' << real(l.target.get_d()) << '\n';
  return os.str();
}

json levi_to_json(const LeviReport& r, const SmoothDomain& s) {
  return {{"version", kFormatVersion},
          {"grid",
           {{"t_lo", real(r.t_lo)},
            {"t_hi", real(r.t_hi)},
            {"uniform_points", r.uniform_points},
            {"refined_points", r.refined_points},
            {"total_points", r.total_points}}},
          {"smoothing",
           {{"h", real(s.params().h)},
            {"epsilon", real(s.params().epsilon)},
            {"kappa", real(s.params().kappa)},
            {"t_minus", real(s.t_minus())},
            {"t_plus", real(s.t_plus())}}},
          {"minimum", real(r.minimum)},
          {"argmin", {{"t", real(r.argmin_t)}, {"lambda", real(r.argmin_lambda)}}},
          {"tolerance", real(r.tolerance)},
          {"strictly_pseudoconvex", r.strictly_pseudoconvex},
          {"status", r.status}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace sqz
