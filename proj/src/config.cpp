#include "sqz/config.hpp"

#include <set>

#include "sqz/numeric.hpp"

namespace sqz {

namespace {

void check_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(std::string("config section '") + section + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ValidationError(std::string("unknown config key '") + section + "." + k + "'");
}

// Decimal fields accept strings or JSON numbers; numbers become their shortest text.
void read_decimal(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_string())
    out = v.get<std::string>();
  else if (v.is_number_integer())
    out = std::to_string(v.get<std::int64_t>());
  else if (v.is_number())
    out = shortest_real(v.get<double>());
  else
    throw ValidationError(std::string("config key '") + key + "' must be a number or decimal string");
}

template <class T>
void read_int(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("config key '") + key + "' must be an integer");
  out = v.get<T>();
}

void read_bool(const json& j, const char* key, bool& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_boolean()) throw ValidationError(std::string("config key '") + key + "' must be a boolean");
  out = j.at(key).get<bool>();
}

double positive(const std::string& text, const char* what, bool allow_zero = false) {
  double x;
  try {
    x = parse_real(text);
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": not a number: '" + text + "'");
  }
  if (!std::isfinite(x) || x < 0 || (!allow_zero && x == 0))
    throw ValidationError(std::string(what) + " must be " + (allow_zero ? "nonnegative" : "positive"));
  return x;
}

}  // namespace

void validate(const RunConfig& c) {
  validate(construction_params(c));
  smoothing_params(c);
  if (c.estimator.degree < 1 || c.estimator.budget < 0 || c.estimator.restarts < 1 || c.estimator.samples < 16)
    throw ValidationError("estimator settings out of range");
  if (c.grids.distance < 16 || c.grids.levi < 100) throw ValidationError("grid resolutions too small");
  positive(c.levi_tolerance, "levi_tolerance");
  if (c.output.empty()) throw ValidationError("output directory must be set");
}

json config_to_json(const RunConfig& c) {
  return {{"version", kFormatVersion},
          {"construction",
           {{"a", c.construction.a},
            {"levels", c.construction.levels},
            {"a_sequence", c.construction.a_sequence},
            {"schedule", c.construction.schedule},
            {"margin", c.construction.margin},
            {"exponent_limit", c.construction.exponent_limit}}},
          {"smoothing",
           {{"h", c.smoothing.h},
            {"epsilon", c.smoothing.epsilon},
            {"kappa", c.smoothing.kappa},
            {"shoulder_margin", c.smoothing.shoulder_margin},
            {"widen", c.smoothing.widen}}},
          {"estimator",
           {{"degree", c.estimator.degree},
            {"budget", c.estimator.budget},
            {"restarts", c.estimator.restarts},
            {"seed", c.estimator.seed},
            {"samples", c.estimator.samples}}},
          {"grids", {{"distance", c.grids.distance}, {"levi", c.grids.levi}}},
          {"levi_tolerance", c.levi_tolerance},
          {"margin_guard", c.margin_guard},
          {"output", c.output}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    check_keys(j, "config",
               {"version", "construction", "smoothing", "estimator", "grids", "levi_tolerance", "margin_guard", "output"});
    if (j.contains("version") && j["version"] != kFormatVersion) throw ValidationError("unsupported config version");
    if (j.contains("construction")) {
      const json& s = j["construction"];
      check_keys(s, "construction", {"a", "levels", "a_sequence", "schedule", "margin", "exponent_limit"});
      read_decimal(s, "a", c.construction.a);
      read_int(s, "levels", c.construction.levels);
      if (s.contains("a_sequence")) {
        if (!s["a_sequence"].is_array()) throw ValidationError("construction.a_sequence must be an array");
        c.construction.a_sequence.clear();
        for (std::size_t i = 0; i < s["a_sequence"].size(); ++i) {
          std::string v;
          json one = {{"v", s["a_sequence"][i]}};
          read_decimal(one, "v", v);
          c.construction.a_sequence.push_back(v);
        }
      }
      if (s.contains("schedule")) c.construction.schedule = s["schedule"].get<std::string>();
      read_decimal(s, "margin", c.construction.margin);
      read_int(s, "exponent_limit", c.construction.exponent_limit);
    }
    if (j.contains("smoothing")) {
      const json& s = j["smoothing"];
      check_keys(s, "smoothing", {"h", "epsilon", "kappa", "shoulder_margin", "widen"});
      read_decimal(s, "h", c.smoothing.h);
      read_decimal(s, "epsilon", c.smoothing.epsilon);
      read_decimal(s, "kappa", c.smoothing.kappa);
      read_decimal(s, "shoulder_margin", c.smoothing.shoulder_margin);
      read_bool(s, "widen", c.smoothing.widen);
    }
    if (j.contains("estimator")) {
      const json& s = j["estimator"];
      check_keys(s, "estimator", {"degree", "budget", "restarts", "seed", "samples"});
      read_int(s, "degree", c.estimator.degree);
      read_int(s, "budget", c.estimator.budget);
      read_int(s, "restarts", c.estimator.restarts);
      read_int(s, "seed", c.estimator.seed);
      read_int(s, "samples", c.estimator.samples);
    }
    if (j.contains("grids")) {
      const json& s = j["grids"];
      check_keys(s, "grids", {"distance", "levi"});
      read_int(s, "distance", c.grids.distance);
      read_int(s, "levi", c.grids.levi);
    }
    read_decimal(j, "levi_tolerance", c.levi_tolerance);
    read_decimal(j, "margin_guard", c.margin_guard);
    if (j.contains("output")) c.output = j["output"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

ConstructionParams construction_params(const RunConfig& c) {
  ConstructionParams p;
  try {
    p.a = parse_decimal(c.construction.a);
    for (const auto& s : c.construction.a_sequence) p.a_sequence.push_back(parse_decimal(s));
    p.margin_u = parse_decimal(c.construction.margin);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("bad construction value: ") + e.what());
  }
  p.levels = c.construction.levels;
  if (c.construction.schedule == "paper")
    p.schedule = ScheduleKind::Paper;
  else if (c.construction.schedule == "margin")
    p.schedule = ScheduleKind::Margin;
  else
    throw ValidationError("construction.schedule must be 'paper' or 'margin'");
  p.margin_guard = positive(c.margin_guard, "margin_guard", true);
  p.distance_grid = c.grids.distance;
  p.exponent_limit = c.construction.exponent_limit;
  return p;
}

SmoothingParams smoothing_params(const RunConfig& c) {
  SmoothingParams s;
  s.h = positive(c.smoothing.h, "smoothing.h");
  s.epsilon = positive(c.smoothing.epsilon, "smoothing.epsilon", true);
  s.kappa = positive(c.smoothing.kappa, "smoothing.kappa");
  s.shoulder_margin = positive(c.smoothing.shoulder_margin, "smoothing.shoulder_margin", true);
  s.widen = c.smoothing.widen;
  return s;
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  o.degree = c.estimator.degree;
  o.budget = c.estimator.budget;
  o.restarts = c.estimator.restarts;
  o.seed = c.estimator.seed;
  o.samples = c.estimator.samples;
  return o;
}

}  // namespace sqz
