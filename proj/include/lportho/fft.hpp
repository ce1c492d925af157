#pragma once

// Arbitrary-length discrete Fourier transform.
//
// Power-of-two lengths use an iterative radix-2 kernel; every other length is
// reduced to a power-of-two circular convolution with Bluestein's chirp-z
// identity  jk = (j^2 + k^2 - (k-j)^2) / 2.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace lportho::fft {

using complex = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

namespace detail {

// exp(-2 pi i k / n) for k < n/2, computed directly per entry.
inline std::vector<complex> twiddles(std::size_t n) {
  std::vector<complex> w(n / 2);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

inline void radix2(std::span<complex> a, std::span<const complex> tw, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        complex w = tw[k * stride];
        if (inverse) w = std::conj(w);
        const complex u = a[start + k];
        const complex v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

/// Precomputed transform of a fixed length. Immutable after construction, so
/// one plan may be shared by concurrent callers.
class Plan {
 public:
  explicit Plan(std::size_t n) : n_(n) {
    if (n_ < 2) return;
    if (is_power_of_two(n_)) {
      twiddles_ = detail::twiddles(n_);
      return;
    }
    m_ = next_power_of_two(2 * n_ - 1);
    twiddles_ = detail::twiddles(m_);
    chirp_.resize(n_);
    // k^2 mod 2n keeps the chirp argument small for large k.
    const std::size_t two_n = 2 * n_;
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t k2 = (k * k) % two_n;
      const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n_);
      chirp_[k] = {std::cos(angle), std::sin(angle)};
    }
    kernel_.assign(m_, complex{});
    kernel_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      kernel_[k] = std::conj(chirp_[k]);
      kernel_[m_ - k] = std::conj(chirp_[k]);
    }
    detail::radix2(kernel_, twiddles_, false);
  }

  std::size_t size() const { return n_; }

  /// In-place unnormalized transform; `inverse` flips the exponent sign but
  /// does not divide by n.
  void execute(std::span<complex> data, bool inverse = false) const {
    if (n_ < 2) return;
    if (chirp_.empty()) {
      detail::radix2(data, twiddles_, inverse);
      return;
    }
    // The inverse transform is conj(F conj(x)).
    std::vector<complex> a(m_, complex{});
    for (std::size_t k = 0; k < n_; ++k) a[k] = (inverse ? std::conj(data[k]) : data[k]) * chirp_[k];
    detail::radix2(a, twiddles_, false);
    for (std::size_t k = 0; k < m_; ++k) a[k] *= kernel_[k];
    detail::radix2(a, twiddles_, true);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < n_; ++k) {
      const complex y = a[k] * scale * chirp_[k];
      data[k] = inverse ? std::conj(y) : y;
    }
  }

 private:
  std::size_t n_;
  std::size_t m_ = 0;
  std::vector<complex> twiddles_;
  std::vector<complex> chirp_;
  std::vector<complex> kernel_;
};

/// Forward transform  X_k = sum_j x_j exp(-2 pi i j k / n).
inline std::vector<complex> dft(std::span<const complex> x) {
  std::vector<complex> out(x.begin(), x.end());
  Plan(out.size()).execute(out, false);
  return out;
}

inline std::vector<complex> dft(std::span<const double> x) {
  std::vector<complex> out(x.begin(), x.end());
  Plan(out.size()).execute(out, false);
  return out;
}

/// Inverse of `dft`, including the 1/n factor.
inline std::vector<complex> idft(std::span<const complex> x) {
  std::vector<complex> out(x.begin(), x.end());
  Plan(out.size()).execute(out, true);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

/// Real part of `idft`, for spectra known to be Hermitian.
inline std::vector<double> idft_real(std::span<const complex> x) {
  const auto c = idft(x);
  std::vector<double> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k].real();
  return out;
}

}  // namespace lportho::fft
