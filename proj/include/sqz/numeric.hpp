#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sqz {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kGuard = 1e-10;
inline constexpr double kBreakTol = 1e-12;

inline double up(double x) { return std::nextafter(x, kInf); }
inline double down(double x) { return std::nextafter(x, -kInf); }

// Results bracket the exact value of the correctly rounded operation.
inline double add_up(double a, double b) { return up(a + b); }
inline double add_down(double a, double b) { return down(a + b); }
inline double mul_up(double a, double b) { return up(a * b); }
inline double mul_down(double a, double b) { return down(a * b); }
inline double div_up(double a, double b) { return up(a / b); }
inline double div_down(double a, double b) { return down(a / b); }
inline double sqrt_up(double a) { return up(std::sqrt(a)); }
inline double sqrt_down(double a) { return a <= 0 ? 0.0 : down(std::sqrt(a)); }

inline double guard_lower(double x) { return x >= 0 ? x * (1 - kGuard) : x * (1 + kGuard); }
inline double guard_upper(double x) { return x >= 0 ? x * (1 + kGuard) : x * (1 - kGuard); }

bool near_rel(double a, double b, double rel = kBreakTol);

double to_double_down(const mpq_class& q);
double to_double_up(const mpq_class& q);

// Exact decimal literal ("2", "0.05", "1.5e-3") as a rational.
mpq_class parse_decimal(std::string_view text);

std::string format_real(double x);
double parse_real(std::string_view text);
std::string shortest_real(double x);

}  // namespace sqz
