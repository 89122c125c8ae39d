#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sqz/domain.hpp"

namespace sqz {

struct Direction {
  cplx z, w;
  Direction() = default;
  Direction(cplx z_, cplx w_);
  double norm() const;
  bool operator==(const Direction&) const = default;
};

enum class Quantity { Kobayashi, Caratheodory, Squeezing };
enum class Side { Upper, Lower };

std::string to_string(Quantity q);
std::string to_string(Side s);

struct Bound {
  Quantity quantity = Quantity::Squeezing;
  Side side = Side::Upper;
  double value = 0;
  PointC2 basepoint;
  std::optional<Direction> direction;
  bool certified = false;
  std::string provenance;
};

Bound caratheodory_upper_from_radii(double r_h, double r_v, const PointC2& p, const Direction& xi,
                                    std::string provenance);
Bound caratheodory_upper_slices(const ReinhardtDomain& d, const PointC2& p, const Direction& xi);

// Affine map in log coordinates realising (z, w) -> (z / e^{t_k}, e^{-phi_k} w z^{n_left}).
struct ShearMap {
  double t_k = 0, phi_k = 0;
  std::int64_t n_left = 0;
  LogPoint forward(LogPoint p) const;
  LogPoint inverse(LogPoint p) const;
};

struct Sheared {
  ReinhardtDomain image;
  ShearMap map;
  std::int64_t m = 0;  // slope drop at the peak
};

// Integer nearest to s when within the breakpoint tolerance.
std::optional<std::int64_t> integer_slope(double s);

Sheared shear_normalize(const ReinhardtDomain& d, std::size_t k);

struct ContainmentReport {
  bool ok = true;
  double first_violation = 0;  // image log-radius of the first failing check
  std::string detail;
};

// psi(s) <= min(0, -m s) on the whole image range.
ContainmentReport check_omega2_containment(const ReinhardtDomain& image, std::int64_t m);

struct ShearWindow {
  double lower_ratio = 0;        // a in Omega'_m
  double upper_ratio = 0;        // b in Omega'_m
  double horizontal_radius = 0;  // certified lower bound on min(1 - a, b - 1)
  static ShearWindow from_ratios(double a, double b);
};

// psi(s) >= min(0, -m s) for log(a) < s < log(b), and the window inside the image range.
ContainmentReport check_omega1_inclusion(const ReinhardtDomain& image, std::int64_t m, const ShearWindow& w);

Bound kobayashi_lower_shear(const ReinhardtDomain& d, std::size_t k);
Bound squeezing_upper_lemma1(const Bound& c_upper, const Bound& k_lower);
Bound squeezing_lower_inclusion(const ReinhardtDomain& d, const PointC2& p, int grid = 2048);

ShearWindow default_window(const ReinhardtDomain& d, std::size_t k);
Bound squeezing_upper_at_breakpoint(const ReinhardtDomain& d, std::size_t k,
                                    std::optional<ShearWindow> window = std::nullopt);

}  // namespace sqz
