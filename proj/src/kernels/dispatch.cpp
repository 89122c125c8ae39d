#include "sqz/kernels.hpp"

#include <atomic>

namespace sqz::kernels {

namespace {

Isa detect() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa best_isa() { return detect(); }
Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && detect() != Isa::Avx2) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void eval_on_circle(const CircleTable& t, Poly p, double* out_re, double* out_im) {
  if (active_isa() == Isa::Avx2) return avx2::eval_on_circle(t, p, out_re, out_im);
  scalar::eval_on_circle(t, p, out_re, out_im);
}

Omega2Sup omega2_sup(const CircleTable& t, Poly z, Poly w, int m) {
  if (active_isa() == Isa::Avx2) return avx2::omega2_sup(t, z, w, m);
  return scalar::omega2_sup(t, z, w, m);
}

}  // namespace sqz::kernels
