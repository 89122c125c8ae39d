#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace sqz::kernels {

// Powers of unit-circle samples: cos/sin of j*2*pi*k/n, row j, column k.
struct CircleTable {
  int n = 0;
  int max_degree = 0;
  std::vector<double> c, s;
};

CircleTable make_circle_table(int n, int max_degree);

struct Poly {
  std::span<const double> re, im;  // coefficients 0..degree
};

struct Omega2Sup {
  double w_sq = 0;    // max |w|^2
  double wzm_sq = 0;  // max |w|^2 |z|^(2m)
};

enum class Isa { Scalar, Avx2 };

Isa active_isa();
Isa best_isa();
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im);
Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m);

namespace scalar {
void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im);
Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m);
}  // namespace scalar

namespace avx2 {
void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im);
Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m);
}  // namespace avx2

}  // namespace sqz::kernels
