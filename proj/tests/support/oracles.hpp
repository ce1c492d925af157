#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lportho::testing {

/// O(n^2) DFT with long double accumulation and exact integer phase reduction.
inline std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> x, bool inverse = false) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const long double sign = inverse ? 1.0L : -1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t phase = (j * k) % n;
      const long double a = sign * 2.0L * std::numbers::pi_v<long double> * phase / n;
      const long double c = std::cos(a), s = std::sin(a);
      re += x[j].real() * c - x[j].imag() * s;
      im += x[j].real() * s + x[j].imag() * c;
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
  std::vector<std::complex<double>> c(x.begin(), x.end());
  return naive_dft(c);
}

/// Golden-section search for the minimizer of a unimodal function on
/// [lo, hi], carried out in extended precision so that very flat minima
/// (large p) are still resolved.
inline long double golden_section_minimize(const std::function<long double(long double)>& f, long double lo,
                                           long double hi, long double tol = 1e-13L) {
  const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double a = lo, b = hi;
  long double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  long double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 400 && (b - a) > tol * (1.0L + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2.0L;
}

/// Minimizer of (n-k)|a - c|^p + k|b - c|^p by golden section on [min, max].
inline double diagonal_class_oracle(double a, double b, std::size_t n, std::size_t k, double p) {
  if (a == b) return a;
  const long double wa = static_cast<long double>(n - k), wb = static_cast<long double>(k);
  const long double pl = p;
  auto f = [&](long double c) {
    return wa * std::pow(std::abs(static_cast<long double>(a) - c), pl) +
           wb * std::pow(std::abs(static_cast<long double>(b) - c), pl);
  };
  const long double lo = std::min(a, b), hi = std::max(a, b);
  return static_cast<double>(golden_section_minimize(f, lo, hi));
}

/// Frobenius-nearest circulant by dense least squares over the circulant
/// basis {P^k}.
inline std::vector<double> frobenius_projection(const Eigen::MatrixXd& t) {
  const Eigen::Index n = t.rows();
  Eigen::MatrixXd basis(n * n, n);
  basis.setZero();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) basis(((j + k) % n) + j * n, k) = 1.0;
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(t.data(), n * n);
  const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(rhs);
  return {c.data(), c.data() + n};
}

/// Cyclic Jacobi eigenvalues of a dense symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * a.norm()) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double l2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

inline double l2_diff(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(acc);
}

/// Random real vector; a share of entries are exact zeros so that the sign
/// conventions at zero are exercised.
inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double zero_share = 0.1) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = z(gen) < zero_share ? 0.0 : u(gen);
  return v;
}

}  // namespace lportho::testing
