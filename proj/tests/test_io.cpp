#include <doctest.h>

#include "sqz/config.hpp"
#include "sqz/construct.hpp"
#include "sqz/io.hpp"
#include "sqz/numeric.hpp"

using namespace sqz;

TEST_CASE("domain documents round-trip bit-exactly") {
  ConstructionParams p;
  p.levels = 3;
  ReinhardtDomain d = build(p).domain;
  ReinhardtDomain back = domain_from_json(json::parse(dump(domain_to_json(d))));
  CHECK(back == d);
  ReinhardtDomain bidisc(RadialProfile({0.0}, {0.0}), -kInf, 0.0);
  CHECK(domain_from_json(domain_to_json(bidisc)) == bidisc);
}

TEST_CASE("malformed domain documents are rejected") {
  CHECK_THROWS_AS(domain_from_json(json::parse("[]")), ValidationError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"version": 1, "t_min": "0", "t_max": "1"})")), ValidationError);
  CHECK_THROWS_AS(
      domain_from_json(json::parse(
          R"({"version": 1, "t_min": "0", "t_max": "1", "breakpoints": [["0.5", "x"]]})")),
      ValidationError);
}

TEST_CASE("config round-trips unchanged") {
  RunConfig c;
  c.construction.levels = 2;
  c.construction.schedule = "margin";
  c.construction.margin = "0.05";
  c.construction.a_sequence = {"1.5", "1.75"};
  c.smoothing.h = "2.5e-6";
  c.estimator.seed = 12345678901234ull;
  std::string once = dump(config_to_json(c));
  std::string twice = dump(config_to_json(config_from_json(json::parse(once))));
  CHECK(once == twice);
}

TEST_CASE("config accepts numbers and keeps their shortest text") {
  RunConfig c = config_from_json(json::parse(R"({"construction": {"margin": 0.05, "a": 2}})"));
  CHECK(c.construction.margin == "0.05");
  CHECK(c.construction.a == "2");
  CHECK(construction_params(c).margin_u == mpq_class(1, 20));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"nope": 1})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"construction": {"schedule": "other"}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"construction": {"a_sequence": ["1.5", "1.2"], "levels": 2}})")),
                  ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"smoothing": {"h": "-1"}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"estimator": {"budget": "many"}})")), ValidationError);
  CHECK_NOTHROW(config_from_json(json::parse("{}")));
}

TEST_CASE("certificate table") {
  BuildResult b = build({});
  std::string csv = certificate_csv(b.certificate);
  CHECK(csv.rfind("k,a_k,C_k,m_k,n_k,s_upper_k,target\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("\n2,1.75,15,1801,1900,") != std::string::npos);
  json j = certificate_to_json(b.certificate);
  CHECK(j["levels"][2]["C_k_exact"] == "31");
  CHECK(j["levels"][2]["n_k"] == 19199);
  CHECK(parse_real(j["levels"][0]["s_upper"].get<std::string>()) == b.certificate.levels[0].s_upper);
}
