#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <vector>

#include "lportho/fft.hpp"
#include "support/oracles.hpp"

namespace {

using lportho::fft::complex;

double max_abs_diff(const std::vector<complex>& a, const std::vector<complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<complex>& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

std::vector<complex> random_complex(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<complex> x(n);
  for (auto& v : x) v = {d(gen), d(gen)};
  return x;
}

TEST(Fft, TwoPointSum) {
  const std::vector<double> s{1.0, 1.0};
  const auto out = lportho::fft::dft(s);
  EXPECT_NEAR(out[0].real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(out[1]), 0.0, 1e-15);
}

TEST(Fft, ImpulseIsFlat) {
  const std::vector<double> s{1.0, 0.0, 0.0, 0.0};
  for (const auto& v : lportho::fft::dft(s)) {
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
}

TEST(Fft, MatchesNaiveDftForAllSmallLengths) {
  std::mt19937_64 gen(7);
  for (std::size_t n = 1; n <= 72; ++n) {
    const auto x = random_complex(gen, n);
    const auto expect = lportho::testing::naive_dft(x);
    const auto got = lportho::fft::dft(x);
    EXPECT_LE(max_abs_diff(got, expect), 1e-12 * max_abs(expect)) << "n = " << n;
  }
}

TEST(Fft, MatchesNaiveDftAtBenchmarkLengths) {
  std::mt19937_64 gen(11);
  for (std::size_t n : {100u, 128u, 400u, 500u, 700u, 1000u, 1024u}) {
    const auto x = random_complex(gen, n);
    const auto expect = lportho::testing::naive_dft(x);
    EXPECT_LE(max_abs_diff(lportho::fft::dft(x), expect), 1e-12 * max_abs(expect)) << "n = " << n;
  }
}

TEST(Fft, InverseRoundTrip) {
  std::mt19937_64 gen(3);
  for (std::size_t n : {1u, 2u, 3u, 17u, 64u, 99u, 250u, 1000u}) {
    const auto x = random_complex(gen, n);
    const auto y = lportho::fft::idft(lportho::fft::dft(x));
    EXPECT_LE(max_abs_diff(x, y), 1e-12 * max_abs(x)) << "n = " << n;
  }
}

TEST(Fft, ParsevalWithUnnormalizedScaling) {
  std::mt19937_64 gen(5);
  for (std::size_t n : {8u, 30u, 127u, 500u}) {
    const auto x = random_complex(gen, n);
    double time = 0.0, freq = 0.0;
    for (const auto& v : x) time += std::norm(v);
    for (const auto& v : lportho::fft::dft(x)) freq += std::norm(v);
    EXPECT_NEAR(freq, static_cast<double>(n) * time, 1e-11 * freq);
  }
}

}  // namespace
