#include <doctest.h>

#include <complex>
#include <cstring>
#include <random>

#include "sqz/kernels.hpp"

using namespace sqz::kernels;

namespace {

std::vector<double> random_coefs(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  std::vector<double> v(deg + 1);
  for (auto& x : v) x = g(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("circle evaluation matches direct summation") {
  std::mt19937_64 rng(3);
  for (int n : {8, 13, 64}) {
    CircleTable t = make_circle_table(n, 6);
    auto re = random_coefs(rng, 6), im = random_coefs(rng, 6);
    std::vector<double> ore(n), oim(n);
    scalar::eval_on_circle(t, {re, im}, ore.data(), oim.data());
    for (int k = 0; k < n; ++k) {
      std::complex<double> z = std::polar(1.0, 2 * M_PI * k / n), acc = 0, zp = 1;
      for (int j = 0; j <= 6; ++j, zp *= z) acc += std::complex<double>(re[j], im[j]) * zp;
      CHECK(std::abs(acc - std::complex<double>(ore[k], oim[k])) < 1e-12);
    }
  }
}

TEST_CASE("vector kernels agree bit for bit with the reference") {
  if (best_isa() != Isa::Avx2) {
    MESSAGE("AVX2 unavailable; skipping equivalence");
    return;
  }
  std::mt19937_64 rng(11);
  for (int n : {4, 8, 13, 64, 257, 1024}) {
    for (int deg = 0; deg <= 6; ++deg) {
      CircleTable t = make_circle_table(n, 40);
      auto re = random_coefs(rng, deg), im = random_coefs(rng, deg);
      std::vector<double> a_re(n), a_im(n), b_re(n), b_im(n);
      scalar::eval_on_circle(t, {re, im}, a_re.data(), a_im.data());
      avx2::eval_on_circle(t, {re, im}, b_re.data(), b_im.data());
      CHECK(bit_equal(a_re, b_re));
      CHECK(bit_equal(a_im, b_im));

      auto wre = random_coefs(rng, deg), wim = random_coefs(rng, deg);
      for (int m : {1, 2, 8, 32}) {
        Omega2Sup s = scalar::omega2_sup(t, {re, im}, {wre, wim}, m);
        Omega2Sup v = avx2::omega2_sup(t, {re, im}, {wre, wim}, m);
        CHECK(std::memcmp(&s.w_sq, &v.w_sq, sizeof(double)) == 0);
        CHECK(std::memcmp(&s.wzm_sq, &v.wzm_sq, sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("model-domain sup matches brute force") {
  std::mt19937_64 rng(5);
  const int n = 128, m = 8;
  CircleTable t = make_circle_table(n, 6);
  auto zr = random_coefs(rng, 3), zi = random_coefs(rng, 3), wr = random_coefs(rng, 3), wi = random_coefs(rng, 3);
  Omega2Sup s = scalar::omega2_sup(t, {zr, zi}, {wr, wi}, m);
  double w_sq = 0, wzm_sq = 0;
  for (int k = 0; k < n; ++k) {
    std::complex<double> x = std::polar(1.0, 2 * M_PI * k / n), z = 0, w = 0, p = 1;
    for (int j = 0; j <= 3; ++j, p *= x) {
      z += std::complex<double>(zr[j], zi[j]) * p;
      w += std::complex<double>(wr[j], wi[j]) * p;
    }
    w_sq = std::max(w_sq, std::norm(w));
    wzm_sq = std::max(wzm_sq, std::norm(w) * std::pow(std::norm(z), m));
  }
  CHECK(s.w_sq == doctest::Approx(w_sq).epsilon(1e-12));
  CHECK(s.wzm_sq == doctest::Approx(wzm_sq).epsilon(1e-10));
}

TEST_CASE("dispatch can be forced") {
  Isa best = best_isa();
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  force_isa(best);
  CHECK(active_isa() == best);
  CHECK(isa_name(Isa::Scalar) == "scalar");
}
