#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sqz/construct.hpp"
#include "sqz/estimate.hpp"
#include "sqz/io.hpp"
#include "sqz/smooth.hpp"

namespace sqz {

// Real-valued fields keep the decimal text they were given so a config
// file round-trips unchanged.
struct RunConfig {
  struct Construction {
    std::string a = "2";
    int levels = 3;
    std::vector<std::string> a_sequence;
    std::string schedule = "paper";  // paper | margin
    std::string margin = "0.05";
    std::int64_t exponent_limit = std::int64_t(1) << 40;
  } construction;

  struct Smoothing {
    std::string h = "1e-6";
    std::string epsilon = "1e-5";
    std::string kappa = "50";
    std::string shoulder_margin = "2";
    bool widen = true;
  } smoothing;

  struct Estimator {
    int degree = 4;
    int budget = 400;
    int restarts = 4;
    std::uint64_t seed = 1;
    int samples = 4096;
  } estimator;

  struct Grids {
    int distance = 2048;
    int levi = 10000;
  } grids;

  std::string levi_tolerance = "1e-7";
  std::string margin_guard = "0.01";
  std::string output = "run";
};

void validate(const RunConfig& c);

json config_to_json(const RunConfig& c);
RunConfig config_from_json(const json& j);
RunConfig load_config(const std::filesystem::path& path);

ConstructionParams construction_params(const RunConfig& c);
SmoothingParams smoothing_params(const RunConfig& c);
SearchOptions search_options(const RunConfig& c);

}  // namespace sqz
