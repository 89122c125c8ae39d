#include "sqz/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace sqz {

bool near_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

double to_double_down(const mpq_class& q) {
  double d = q.get_d();
  if (mpq_class(d) > q) d = down(d);
  return d;
}

double to_double_up(const mpq_class& q) {
  double d = q.get_d();
  if (mpq_class(d) < q) d = up(d);
  return d;
}

mpq_class parse_decimal(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ValidationError("empty decimal literal");
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.') {
      if (seen_point) throw ValidationError("bad decimal literal: " + s);
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits.push_back(s[i]);
      seen_digit = true;
      if (seen_point) --scale;
    } else {
      throw ValidationError("bad decimal literal: " + s);
    }
  }
  if (!seen_digit) throw ValidationError("bad decimal literal: " + s);
  if (i < s.size()) {
    std::string e = s.substr(i + 1);
    long ev = 0;
    auto [p, ec] = std::from_chars(e.data() + (e.size() && e[0] == '+' ? 1 : 0), e.data() + e.size(), ev);
    if (ec != std::errc() || p != e.data() + e.size() || e.empty())
      throw ValidationError("bad decimal exponent: " + s);
    if (std::labs(ev) > 4000) throw ValidationError("decimal exponent out of range: " + s);
    scale += ev;
  }
  mpz_class num(digits, 10);
  if (neg) num = -num;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
  q.canonicalize();
  return q;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || std::isnan(v))
    throw ValidationError("not a real number: '" + s + "'");
  return v;
}

std::string shortest_real(double x) {
  if (!std::isfinite(x)) return format_real(x);
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace sqz
