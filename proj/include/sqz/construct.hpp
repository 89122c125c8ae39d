#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqz/domain.hpp"
#include "sqz/metrics.hpp"

namespace sqz {

enum class ScheduleKind { Paper, Margin };

struct ConstructionParams {
  mpq_class a = 2;
  int levels = 3;
  std::vector<mpq_class> a_sequence;  // empty: a_k = a - (a - 1) 2^-k
  ScheduleKind schedule = ScheduleKind::Paper;
  mpq_class margin_u = mpq_class(1, 20);
  double margin_guard = 0.01;
  int distance_grid = 2048;
  std::int64_t exponent_limit = std::int64_t(1) << 40;
};

void validate(const ConstructionParams& p);

// a_0 = 1, a_1 .. a_K, then a_{K+1}: next rule term, or a for an explicit sequence.
std::vector<mpq_class> radii_sequence(const ConstructionParams& p);
mpq_class level_constant(const ConstructionParams& p, int k);
std::int64_t choose_exponent(const ConstructionParams& p, int k, const mpq_class& c_k, std::int64_t n_prev);
mpq_class level_target(const ConstructionParams& p, int k);

struct LevelRecord {
  int k = 0;
  mpq_class a_k, c_k, target;
  std::int64_t m_k = 0, n_k = 0;
  std::size_t breakpoint = 0;  // index of +t_k in the profile
  ShearWindow window;
  double s_upper = 1;          // at (a_k, 0)
  double s_upper_inverse = 1;  // at (1/a_k, 0)
  bool target_met = false;
  std::string provenance;
};

struct ConstructionCertificate {
  std::string kind = "construction";
  std::string schedule;
  mpq_class a;
  std::vector<LevelRecord> levels;
  double s_lower_p = 0;
  std::string s_lower_provenance;
  double margin_guard = 0.01;
  bool violation = false;
  std::optional<int> violation_level;
  std::optional<double> margin;
  std::vector<std::string> notes;
};

struct BuildResult {
  ReinhardtDomain domain;
  ConstructionCertificate certificate;
};

ReinhardtDomain build_domain(const ConstructionParams& p, std::vector<std::int64_t>* exponents = nullptr);
BuildResult build(const ConstructionParams& p);

ContainmentReport verify_prime_domain_inclusion(const ReinhardtDomain& d, const LevelRecord& level);
ShearWindow exact_window(const ConstructionParams& p, int k);

// Fills violation fields from s_lower_p and the level uppers.
void decide_violation(ConstructionCertificate& cert);

bool all_targets_met(const ConstructionCertificate& cert);

}  // namespace sqz
