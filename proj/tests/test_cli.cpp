#include <doctest.h>

#include <fstream>
#include <map>

#include "sqz/commands.hpp"
#include "sqz/io.hpp"
#include "sqz/numeric.hpp"

namespace fs = std::filesystem;
using namespace sqz;

namespace {

fs::path fresh(const std::string& name) {
  fs::path p = fs::current_path() / "cli_runs" / name;
  fs::remove_all(p);
  return p;
}

RunConfig headline(const std::string& name) {
  RunConfig c;
  c.construction.levels = 2;
  c.construction.schedule = "margin";
  c.output = fresh(name).string();
  return c;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string s; std::getline(f, s);) out.push_back(s);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("build with defaults") {
  RunConfig c;
  c.output = fresh("build").string();
  CHECK(run_command("build", c) == 0);
  auto rows = lines(fs::path(c.output) / "certificate.csv");
  CHECK(rows.size() == 4);
  CHECK(fs::exists(fs::path(c.output) / "domain.json"));
  CHECK(fs::exists(fs::path(c.output) / "certificate.json"));
  CHECK_FALSE(fs::exists(fs::path(c.output) / ".squeeze.lock"));
}

TEST_CASE("build with no levels is vacuous") {
  RunConfig c;
  c.construction.levels = 0;
  c.output = fresh("build0").string();
  CHECK(run_command("build", c) == 0);
  CHECK(lines(fs::path(c.output) / "certificate.csv").size() == 1);
}

TEST_CASE("validation failures exit 2") {
  RunConfig c;
  c.construction.levels = 2;
  c.construction.a_sequence = {"1.5", "1.2"};
  c.output = fresh("badseq").string();
  CHECK(run_command("build", c) == 2);

  RunConfig h = headline("wide");
  h.smoothing.h = "0.5";
  CHECK(run_command("certify-smoothed", h) == 2);

  RunConfig u = headline("unknown");
  CHECK(run_command("frobnicate", u) == 2);
}

TEST_CASE("headline smoothed certificate") {
  RunConfig c = headline("smoothed");
  CHECK(run_command("certify-smoothed", c) == 0);
  json j = json::parse(read_text(fs::path(c.output) / "smoothed_certificate.json"));
  CHECK(j["violation"] == true);
  CHECK(j["violation_level"] == 2);
  CHECK(parse_real(j["margin"].get<std::string>()) >= 0.01);
  CHECK(lines(fs::path(c.output) / "smooth_profile.csv").size() > 4000);
}

TEST_CASE("Levi-flat smoothing exits 3") {
  RunConfig c = headline("flat");
  c.smoothing.epsilon = "0";
  CHECK(run_command("certify-smoothed", c) == 3);
}

TEST_CASE("no certified violation exits 3 for certify-smoothed") {
  RunConfig c;
  c.output = fresh("paper_smoothed").string();
  CHECK(run_command("certify-smoothed", c) == 3);
}

TEST_CASE("a locked directory is refused") {
  RunConfig c;
  c.output = fresh("locked").string();
  fs::create_directories(c.output);
  std::ofstream(fs::path(c.output) / ".squeeze.lock") << "";
  CHECK(run_command("build", c) == 2);
  CHECK(fs::exists(fs::path(c.output) / ".squeeze.lock"));
}

TEST_CASE("plot data") {
  RunConfig c = headline("plot");
  CHECK(run_command("plot-data", c) == 0);
  fs::path out = c.output;
  CHECK(lines(out / "breakpoints.csv").size() == 1 + 2 * 2 + 1);

  // Each sheared profile passes through the origin, with nothing above 0.
  auto rows = lines(out / "sheared_profiles.csv");
  std::map<std::string, bool> origin;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto f = split(rows[i]);
    if (parse_real(f[1]) == 0.0 && parse_real(f[2]) == 0.0) origin[f[0]] = true;
    CHECK(parse_real(f[2]) <= 0.0);
  }
  CHECK(origin.size() == 2);

  double s_upper_2 = 0, s_lower_1 = 0;
  auto bc = lines(out / "bound_curve.csv");
  double t2 = 0;
  for (std::size_t i = 1; i < bc.size(); ++i) {
    auto f = split(bc[i]);
    double t = parse_real(f[1]), v = parse_real(f[2]);
    if (f[0] == "s_upper" && t > t2) t2 = t, s_upper_2 = v;
    if (f[0] == "s_lower" && t == 0.0) s_lower_1 = v;
  }
  CHECK(s_upper_2 < s_lower_1);
}

TEST_CASE("identical configs give identical run directories") {
  RunConfig a = headline("det_a"), b = headline("det_b");
  for (RunConfig* c : {&a, &b}) {
    c->estimator.budget = 10;
    c->estimator.restarts = 1;
    c->estimator.samples = 256;
    CHECK(run_command("all", *c) == 0);
  }
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a.output)) names.push_back(e.path().filename().string());
  CHECK(names.size() == 13);
  for (const auto& n : names) CHECK(read_text(fs::path(a.output) / n) == read_text(fs::path(b.output) / n));
}
