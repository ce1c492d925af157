#pragma once

// L1 Fourier-energy accounting for signal decompositions, plus a spectral
// iterative-filtering decomposer whose components never over-count the signal
// spectrum.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lportho/banach_geometry.hpp"
#include "lportho/error.hpp"
#include "lportho/fft.hpp"

namespace lportho {

/// Real time series sampled at t_j = j / (2B), j = 0..n-1, with n = 2B.
class Signal {
 public:
  explicit Signal(std::vector<double> samples) : samples_(std::move(samples)) {
    bandwidth_ = static_cast<double>(samples_.size()) / 2.0;
    validate();
  }

  Signal(std::vector<double> samples, double bandwidth) : samples_(std::move(samples)), bandwidth_(bandwidth) {
    validate();
  }

  static Signal zeros(std::size_t n) { return Signal(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return samples_.size(); }
  double bandwidth() const { return bandwidth_; }
  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }
  double time(std::size_t j) const { return static_cast<double>(j) / (2.0 * bandwidth_); }

  double l2_norm() const {
    double acc = 0.0;
    for (double v : samples_) acc += v * v;
    return std::sqrt(acc);
  }

 private:
  void validate() const {
    const std::size_t n = samples_.size();
    if (n < 2 || n % 2 != 0) throw invalid_argument("signal length must be even and >= 2, got " + std::to_string(n));
    if (!(bandwidth_ > 0.0)) throw invalid_argument("signal bandwidth must be positive");
    if (std::abs(2.0 * bandwidth_ - static_cast<double>(n)) > 1e-9 * static_cast<double>(n)) {
      throw invalid_argument("signal length " + std::to_string(n) + " does not equal 2B = " +
                             std::to_string(2.0 * bandwidth_));
    }
    for (double v : samples_) {
      if (!std::isfinite(v)) throw invalid_argument("signal samples must be finite");
    }
  }

  std::vector<double> samples_;
  double bandwidth_;
};

/// DFT coefficients on the integer frequency grid xi_k = k.
class Spectrum {
 public:
  explicit Spectrum(std::vector<std::complex<double>> coefficients) : coefficients_(std::move(coefficients)) {}

  std::size_t size() const { return coefficients_.size(); }
  std::span<const std::complex<double>> coefficients() const { return coefficients_; }
  const std::complex<double>& operator[](std::size_t k) const { return coefficients_[k]; }
  static double frequency(std::size_t k) { return static_cast<double>(k); }

  std::vector<double> magnitudes() const {
    std::vector<double> m(coefficients_.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::abs(coefficients_[k]);
    return m;
  }

 private:
  std::vector<std::complex<double>> coefficients_;
};

/// Unnormalized forward transform  s^(xi_k) = sum_j s_j exp(-2 pi i t_j xi_k).
inline Spectrum dft(const Signal& s) { return Spectrum(fft::dft(s.samples())); }

/// Inverse of `dft`; the imaginary residue of a Hermitian spectrum is dropped.
inline Signal idft(const Spectrum& spectrum, double bandwidth) {
  return Signal(fft::idft_real(spectrum.coefficients()), bandwidth);
}

/// E1(s) = ||s^||_1.
inline double l1_fourier_energy(const Spectrum& spectrum) {
  double acc = 0.0;
  for (const auto& c : spectrum.coefficients()) acc += std::abs(c);
  return acc;
}

inline double l1_fourier_energy(const Signal& s) { return l1_fourier_energy(dft(s)); }

/// Bookkeeping of one iterative-filtering stage.
struct StageInfo {
  std::size_t halfwidth = 0;
  std::size_t inner_iterations = 0;
  double achieved_delta = 0.0;
  bool converged = true;
};

struct DecompositionMeta {
  std::vector<std::size_t> halfwidths;
  double delta = 0.0;
  std::size_t max_inner = 0;
  std::vector<StageInfo> stages;
};

/// Ordered components plus a trend; all of the same length and bandwidth.
class Decomposition {
 public:
  Decomposition(std::vector<Signal> components, Signal trend, std::optional<DecompositionMeta> meta = std::nullopt)
      : components_(std::move(components)), trend_(std::move(trend)), meta_(std::move(meta)) {
    for (const auto& c : components_) {
      if (c.size() != trend_.size()) throw dimension_error("decomposition components differ in length");
      if (c.bandwidth() != trend_.bandwidth()) throw dimension_error("decomposition components differ in bandwidth");
    }
  }

  std::span<const Signal> components() const { return components_; }
  const Signal& trend() const { return trend_; }
  const std::optional<DecompositionMeta>& meta() const { return meta_; }
  std::size_t size() const { return trend_.size(); }

  /// Components followed by the trend.
  std::vector<Signal> parts() const {
    std::vector<Signal> all(components_.begin(), components_.end());
    all.push_back(trend_);
    return all;
  }

  Signal reconstruct() const {
    std::vector<double> sum(trend_.samples().begin(), trend_.samples().end());
    for (const auto& c : components_) {
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += c[j];
    }
    return Signal(std::move(sum), trend_.bandwidth());
  }

 private:
  std::vector<Signal> components_;
  Signal trend_;
  std::optional<DecompositionMeta> meta_;
};

struct UnwantedOscillation {
  std::size_t frequency_index = 0;
  double excess = 0.0;
};

struct EnergyReport {
  double total_energy = 0.0;
  std::vector<double> component_energies;  // trend last
  double conservation_gap = 0.0;
  bool conserved = true;
  std::vector<UnwantedOscillation> unwanted_frequencies;
};

inline constexpr double default_conservation_tol = 1e-10;

namespace detail {

inline void require_reconstruction(const Signal& source, const Decomposition& d) {
  if (source.size() != d.size()) throw inconsistent_decomposition("decomposition length differs from the signal");
  const Signal sum = d.reconstruct();
  double diff = 0.0;
  for (std::size_t j = 0; j < sum.size(); ++j) diff += (sum[j] - source[j]) * (sum[j] - source[j]);
  double scale = source.l2_norm();
  for (const auto& part : d.parts()) scale += part.l2_norm();
  if (std::sqrt(diff) > 1e-10 * scale) {
    throw inconsistent_decomposition("components and trend do not reconstruct the signal (l2 residual " +
                                     std::to_string(std::sqrt(diff)) + ")");
  }
}

}  // namespace detail

/// Frequencies where sum_k |phi^_k(xi)| exceeds |s^(xi)| by more than
/// 1e-12 max_k |s^(xi_k)|. The trend counts as a component.
inline std::vector<UnwantedOscillation> detect_unwanted_oscillations(const Signal& source, const Decomposition& d) {
  const auto reference = dft(source).magnitudes();
  std::vector<double> sum(reference.size(), 0.0);
  for (const auto& part : d.parts()) {
    const auto mag = dft(part).magnitudes();
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += mag[k];
  }
  double peak = 0.0;
  for (double m : reference) peak = std::max(peak, m);
  const double threshold = 1e-12 * peak;
  std::vector<UnwantedOscillation> out;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const double excess = sum[k] - reference[k];
    if (excess > threshold) out.push_back({k, excess});
  }
  return out;
}

inline std::vector<UnwantedOscillation> detect_unwanted_oscillations(const Decomposition& d) {
  return detect_unwanted_oscillations(d.reconstruct(), d);
}

/// Energy bookkeeping against an explicit source signal; throws
/// inconsistent_decomposition when the parts do not add up to it.
inline EnergyReport check_energy_conservation(const Signal& source, const Decomposition& d,
                                              double tol = default_conservation_tol) {
  detail::require_reconstruction(source, d);
  EnergyReport r;
  r.total_energy = l1_fourier_energy(source);
  double sum = 0.0;
  for (const auto& part : d.parts()) {
    r.component_energies.push_back(l1_fourier_energy(part));
    sum += r.component_energies.back();
  }
  r.conservation_gap = sum - r.total_energy;
  r.conserved = std::abs(r.conservation_gap) <= tol * r.total_energy;
  r.unwanted_frequencies = detect_unwanted_oscillations(source, d);
  return r;
}

inline EnergyReport check_energy_conservation(const Decomposition& d, double tol = default_conservation_tol) {
  return check_energy_conservation(d.reconstruct(), d, tol);
}

/// Transfer function of the circular moving average of half-width L,
/// w^(xi) = (1 + 2 sum_{j=1..L} cos(2 pi j xi / n)) / (2L + 1).
inline std::vector<double> moving_average_transfer(std::size_t n, std::size_t halfwidth) {
  std::vector<double> out(n);
  const double norm = 1.0 / static_cast<double>(2 * halfwidth + 1);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 1.0;
    for (std::size_t j = 1; j <= halfwidth; ++j) {
      const std::size_t phase = (j * k) % n;
      acc += 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n));
    }
    out[k] = acc * norm;
  }
  return out;
}

struct FifOptions {
  double delta = 1e-3;
  std::size_t max_inner = 200;
};

/// Spectral iterative filtering. Stage i sifts the current remainder with the
/// double convolution of a moving average of half-width halfwidths[i]
/// (transfer w^2 in [0, 1]) until the relative l2 change of the iterate drops
/// below delta, so the extracted component is (1 - w^2)^N times the remainder
/// spectrum. Per-frequency extraction factors lie in [0, 1] and sum to one over
/// components and trend.
inline Decomposition fif_decompose(const Signal& s, std::span<const std::size_t> halfwidths,
                                   const FifOptions& options = {}) {
  const std::size_t n = s.size();
  if (halfwidths.empty()) throw invalid_argument("filter schedule must not be empty");
  if (!(options.delta > 0.0)) throw invalid_argument("delta must be positive");
  if (options.max_inner == 0) throw invalid_argument("max_inner must be positive");
  for (std::size_t i = 0; i < halfwidths.size(); ++i) {
    if (halfwidths[i] == 0) throw invalid_argument("filter half-widths must be positive");
    if (2 * halfwidths[i] >= n) throw invalid_argument("filter half-width must be < n/2");
    if (i > 0 && halfwidths[i] <= halfwidths[i - 1]) throw invalid_argument("filter half-widths must increase strictly");
  }

  DecompositionMeta meta;
  meta.halfwidths.assign(halfwidths.begin(), halfwidths.end());
  meta.delta = options.delta;
  meta.max_inner = options.max_inner;

  std::vector<Signal> components;
  Signal remainder = s;
  for (std::size_t halfwidth : halfwidths) {
    const auto rhat = fft::dft(remainder.samples());
    auto transfer = moving_average_transfer(n, halfwidth);
    std::vector<double> keep(n), power(n), retained(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double g = transfer[k] * transfer[k];
      keep[k] = 1.0 - g;
      power[k] = std::norm(rhat[k]);
    }

    // retained[k] = (1 - g_k)^(m-1) while testing step m.
    StageInfo info{halfwidth, 0, 0.0, false};
    for (std::size_t m = 1; m <= options.max_inner; ++m) {
      double before = 0.0;
      double change = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double r2 = retained[k] * retained[k] * power[k];
        before += r2;
        change += (1.0 - keep[k]) * (1.0 - keep[k]) * r2;
      }
      for (std::size_t k = 0; k < n; ++k) retained[k] *= keep[k];
      info.inner_iterations = m;
      info.achieved_delta = before > 0.0 ? std::sqrt(change / before) : 0.0;
      if (info.achieved_delta <= options.delta) {
        info.converged = true;
        break;
      }
    }
    meta.stages.push_back(info);

    std::vector<std::complex<double>> phihat(n);
    for (std::size_t k = 0; k < n; ++k) phihat[k] = retained[k] * rhat[k];
    auto phi = fft::idft_real(phihat);
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) next[j] = remainder[j] - phi[j];
    components.emplace_back(std::move(phi), s.bandwidth());
    remainder = Signal(std::move(next), s.bandwidth());
  }
  return Decomposition(std::move(components), std::move(remainder), std::move(meta));
}

inline Decomposition fif_decompose(const Signal& s, std::initializer_list<std::size_t> halfwidths,
                                   const FifOptions& options = {}) {
  const std::vector<std::size_t> h(halfwidths);
  return fif_decompose(s, std::span<const std::size_t>(h), options);
}

enum class AngleDomain { time, frequency };

/// Symmetric matrix of pairwise L1 Pythagorean defects between components
/// (trend excluded); zero diagonal.
inline std::vector<std::vector<double>> pairwise_l1_defects(const Decomposition& d, AngleDomain domain) {
  const auto comps = d.components();
  const std::size_t m = comps.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
  const PExponent p1(1.0);
  if (domain == AngleDomain::time) {
    std::vector<RealFunction> fs;
    for (const auto& c : comps) fs.emplace_back(std::vector<double>(c.samples().begin(), c.samples().end()));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) out[i][j] = out[j][i] = pythagorean_defect(fs[i], fs[j], p1);
  } else {
    std::vector<ComplexFunction> fs;
    for (const auto& c : comps) fs.emplace_back(fft::dft(c.samples()));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) out[i][j] = out[j][i] = pythagorean_defect(fs[i], fs[j], p1);
  }
  return out;
}

/// Pairwise L1 angles arccot(defect) between components; zero diagonal.
inline std::vector<std::vector<double>> pairwise_l1_angles(const Decomposition& d, AngleDomain domain) {
  auto out = pairwise_l1_defects(d, domain);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[i][j] = i == j ? 0.0 : arccot(out[i][j]);
  return out;
}

/// One row per frequency: |s^(xi)|, sum_k |phi^_k(xi)| and their difference.
struct SpectrumComparisonRow {
  std::size_t frequency_index = 0;
  double signal_magnitude = 0.0;
  double component_sum = 0.0;
  double difference = 0.0;
  std::vector<double> part_magnitudes;
};

inline std::vector<SpectrumComparisonRow> spectrum_comparison(const Signal& source, const Decomposition& d) {
  const auto reference = dft(source).magnitudes();
  std::vector<std::vector<double>> parts;
  for (const auto& part : d.parts()) parts.push_back(dft(part).magnitudes());
  std::vector<SpectrumComparisonRow> rows(reference.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto& row = rows[k];
    row.frequency_index = k;
    row.signal_magnitude = reference[k];
    for (const auto& m : parts) {
      row.part_magnitudes.push_back(m[k]);
      row.component_sum += m[k];
    }
    row.difference = reference[k] - row.component_sum;
  }
  return rows;
}

}  // namespace lportho
