#pragma once

// Toeplitz operators from generating functions, entrywise l^p-optimal
// circulant approximations and circulant spectral tools.
//
// Conventions: T_n(f) = [t_{i-j}], so the first column holds t_0 .. t_{n-1}
// and the first row t_0, t_{-1}, .., t_{1-n}. A circulant is [c_{(i-j) mod n}].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lportho/error.hpp"
#include "lportho/fft.hpp"

namespace lportho {

/// f(theta) = alpha + beta (2 - 2cos theta) + gamma (2 - 2cos theta)^2, i.e.
/// phi + psi (e^{i theta} + e^{-i theta}) + gamma (e^{2i theta} + e^{-2i theta}).
struct ModelSymbol {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double phi() const { return alpha + 2.0 * beta + 6.0 * gamma; }
  double psi() const { return -beta - 4.0 * gamma; }

  double operator()(double theta) const {
    const double s = 2.0 - 2.0 * std::cos(theta);
    return alpha + beta * s + gamma * s * s;
  }

  double min_value() const { return alpha; }
  double max_value() const { return alpha + 4.0 * beta + 16.0 * gamma; }
};

/// Real Fourier coefficients t_k of a generating function, finitely supported.
class ToeplitzSymbol {
 public:
  static ToeplitzSymbol from_coefficients(std::map<long, double> coefficients) {
    ToeplitzSymbol s;
    for (const auto& [k, v] : coefficients) {
      if (!std::isfinite(v)) throw invalid_argument("symbol coefficients must be finite");
      if (v != 0.0) s.coefficients_[k] = v;
    }
    return s;
  }

  static ToeplitzSymbol from_model(const ModelSymbol& m) {
    if (m.alpha < 0.0 || m.beta < 0.0 || m.gamma < 0.0) {
      throw invalid_argument("model parameters alpha, beta, gamma must be nonnegative");
    }
    auto s = from_coefficients({{0, m.phi()}, {1, m.psi()}, {-1, m.psi()}, {2, m.gamma}, {-2, m.gamma}});
    s.model_ = m;
    return s;
  }

  double coefficient(long k) const {
    const auto it = coefficients_.find(k);
    return it == coefficients_.end() ? 0.0 : it->second;
  }

  const std::map<long, double>& coefficients() const { return coefficients_; }
  const std::optional<ModelSymbol>& model() const { return model_; }

  bool is_symmetric() const {
    return std::all_of(coefficients_.begin(), coefficients_.end(),
                       [this](const auto& kv) { return coefficient(-kv.first) == kv.second; });
  }

 private:
  std::map<long, double> coefficients_;
  std::optional<ModelSymbol> model_;
};

/// n x n Toeplitz matrix. Products use a power-of-two circulant embedding of
/// length >= 2n - 1 whose eigenvalues are cached at construction.
class ToeplitzOperator {
 public:
  /// `coefficients[k + n - 1]` holds t_k for k = -(n-1) .. n-1.
  ToeplitzOperator(std::size_t n, std::vector<double> coefficients, std::optional<ModelSymbol> model = std::nullopt)
      : n_(n), coefficients_(std::move(coefficients)), model_(model) {
    if (n_ < 1) throw invalid_argument("Toeplitz dimension must be >= 1");
    if (coefficients_.size() != 2 * n_ - 1) throw dimension_error("Toeplitz operator needs 2n - 1 coefficients");
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      if (coefficients_[i] != 0.0) {
        const auto k = static_cast<std::size_t>(std::abs(static_cast<long>(i) - static_cast<long>(n_ - 1)));
        bandwidth_ = std::max(bandwidth_, k);
      }
    }
    embed_size_ = fft::next_power_of_two(2 * n_ - 1);
    plan_ = std::make_shared<const fft::Plan>(embed_size_);
    // Embedding circulant column: t_0 .. t_{n-1}, zeros, t_{-(n-1)} .. t_{-1}.
    std::vector<std::complex<double>> col(embed_size_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) col[k] = coefficient(static_cast<long>(k));
    for (std::size_t k = 1; k < n_; ++k) col[embed_size_ - k] = coefficient(-static_cast<long>(k));
    plan_->execute(col, false);
    embed_eigenvalues_ = std::move(col);
  }

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bandwidth_; }
  std::size_t embedding_size() const { return embed_size_; }
  const std::optional<ModelSymbol>& model() const { return model_; }

  double coefficient(long k) const {
    if (std::abs(k) >= static_cast<long>(n_)) return 0.0;
    return coefficients_[static_cast<std::size_t>(k + static_cast<long>(n_) - 1)];
  }

  bool is_symmetric() const {
    for (std::size_t k = 1; k < n_; ++k) {
      if (coefficient(static_cast<long>(k)) != coefficient(-static_cast<long>(k))) return false;
    }
    return true;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != n_) {
      throw dimension_error("Toeplitz matvec: vector length " + std::to_string(x.size()) + " != " + std::to_string(n_));
    }
    std::vector<std::complex<double>> buf(embed_size_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) buf[i] = x[i];
    plan_->execute(buf, false);
    for (std::size_t k = 0; k < embed_size_; ++k) buf[k] *= embed_eigenvalues_[k];
    plan_->execute(buf, true);
    const double scale = 1.0 / static_cast<double>(embed_size_);
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = buf[i].real() * scale;
    return y;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a(i, j) = coefficient(static_cast<long>(i) - static_cast<long>(j));
    return a;
  }

 private:
  std::size_t n_;
  std::vector<double> coefficients_;
  std::optional<ModelSymbol> model_;
  std::size_t bandwidth_ = 0;
  std::size_t embed_size_ = 0;
  std::shared_ptr<const fft::Plan> plan_;
  std::vector<std::complex<double>> embed_eigenvalues_;
};

/// T_n(f) = [f^_{i-j}].
inline ToeplitzOperator build_toeplitz(const ToeplitzSymbol& symbol, std::size_t n) {
  if (n < 1) throw invalid_argument("Toeplitz dimension must be >= 1");
  std::vector<double> t(2 * n - 1, 0.0);
  for (const auto& [k, v] : symbol.coefficients()) {
    if (std::abs(k) < static_cast<long>(n)) t[static_cast<std::size_t>(k + static_cast<long>(n) - 1)] = v;
  }
  return ToeplitzOperator(n, std::move(t), symbol.model());
}

inline ToeplitzOperator build_toeplitz(const ModelSymbol& model, std::size_t n) {
  return build_toeplitz(ToeplitzSymbol::from_model(model), n);
}

inline std::vector<double> toeplitz_matvec(const ToeplitzOperator& t, std::span<const double> x) { return t.apply(x); }

/// Real circulant given by its first column; eigenvalues are the unnormalized
/// DFT of that column and are cached at construction.
class CirculantMatrix {
 public:
  explicit CirculantMatrix(std::vector<double> first_column, std::optional<double> source_p = std::nullopt)
      : column_(std::move(first_column)), source_p_(source_p) {
    if (column_.empty()) throw invalid_argument("circulant dimension must be >= 1");
    plan_ = std::make_shared<const fft::Plan>(column_.size());
    eigenvalues_.assign(column_.begin(), column_.end());
    plan_->execute(eigenvalues_, false);
  }

  /// Circulant with the given real spectrum, which must satisfy
  /// lambda_j = lambda_{n-j} so that the first column is real.
  static CirculantMatrix from_spectrum(std::span<const double> eigenvalues, std::optional<double> source_p = std::nullopt) {
    std::vector<std::complex<double>> lam(eigenvalues.begin(), eigenvalues.end());
    auto c = fft::idft_real(lam);
    const std::size_t n = c.size();
    for (std::size_t k = 1; k < n - k; ++k) c[k] = c[n - k] = 0.5 * (c[k] + c[n - k]);
    return CirculantMatrix(std::move(c), source_p);
  }

  std::size_t size() const { return column_.size(); }
  std::span<const double> first_column() const { return column_; }
  std::span<const std::complex<double>> eigenvalues() const { return eigenvalues_; }
  std::optional<double> source_p() const { return source_p_; }

  /// c_k = c_{n-k}; implies a real spectrum.
  bool is_symmetric() const {
    const std::size_t n = column_.size();
    for (std::size_t k = 1; k < n; ++k) {
      if (column_[k] != column_[n - k]) return false;
    }
    return true;
  }

  double max_abs_eigenvalue() const {
    double m = 0.0;
    for (const auto& l : eigenvalues_) m = std::max(m, std::abs(l));
    return m;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != size()) throw dimension_error("circulant matvec: dimension mismatch");
    std::vector<std::complex<double>> buf(x.begin(), x.end());
    plan_->execute(buf, false);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= eigenvalues_[k];
    plan_->execute(buf, true);
    std::vector<double> y(size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = buf[i].real() / static_cast<double>(size());
    return y;
  }

  const fft::Plan& plan() const { return *plan_; }

  Eigen::MatrixXd to_dense() const {
    const std::size_t n = size();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = column_[(i + n - j) % n];
    return a;
  }

 private:
  std::vector<double> column_;
  std::optional<double> source_p_;
  std::shared_ptr<const fft::Plan> plan_;
  std::vector<std::complex<double>> eigenvalues_;
};

/// (sum_{j,k} |x_jk|^p)^(1/p).
inline double lp_matrix_norm(const Eigen::MatrixXd& x, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw invalid_argument("l^p matrix norm needs finite p >= 1");
  if (p == 2.0) return x.norm();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) acc += std::pow(std::abs(x(i, j)), p);
  return std::pow(acc, 1.0 / p);
}

/// Minimizer of  w_a |a - c|^p + w_b |b - c|^p  over real c, w_a + w_b > 0.
/// For p > 1 a weighted mean with weights w^(1/(p-1)); for p = 1 the value
/// with the larger weight, `a` on ties. Symmetric in swapping (a, w_a) with
/// (b, w_b) bit for bit, except for the p = 1 tie rule.
inline double weighted_lp_center(double a, double w_a, double b, double w_b, double p) {
  if (w_b == 0.0 || a == b) return a;
  if (w_a == 0.0) return b;
  if (p == 1.0) return w_a >= w_b ? a : b;
  if (w_a < w_b) {
    std::swap(a, b);
    std::swap(w_a, w_b);
  }
  // r = (w_b / w_a)^(1/(p-1)) <= 1, evaluated in logs since the exponent
  // grows without bound as p -> 1.
  const double r = std::exp(std::log(w_b / w_a) / (p - 1.0));
  return (a + b * r) / (1.0 + r);
}

/// Circulant minimizing ||T - C||_{l^p}. The objective separates over the
/// circulant diagonal classes k, each meeting Toeplitz offsets k (n-k entries)
/// and k-n (k entries).
inline CirculantMatrix lp_circulant_minimizer(const ToeplitzOperator& t, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw invalid_argument("circulant minimizer needs finite p >= 1");
  const std::size_t n = t.size();
  std::vector<double> c(n);
  c[0] = t.coefficient(0);
  for (std::size_t k = 1; k < n; ++k) {
    c[k] = weighted_lp_center(t.coefficient(static_cast<long>(k)), static_cast<double>(n - k),
                              t.coefficient(static_cast<long>(k) - static_cast<long>(n)), static_cast<double>(k), p);
  }
  return CirculantMatrix(std::move(c), p);
}

struct CirculantSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  bool real = true;
  double min_real = 0.0;
  double max_real = 0.0;
  std::size_t negative_count = 0;
};

inline CirculantSpectrum circulant_spectrum(const CirculantMatrix& c) {
  CirculantSpectrum s;
  s.eigenvalues.assign(c.eigenvalues().begin(), c.eigenvalues().end());
  s.real = c.is_symmetric();
  if (s.real) {
    for (auto& l : s.eigenvalues) l = {l.real(), 0.0};
  }
  s.min_real = s.max_real = s.eigenvalues.front().real();
  for (const auto& l : s.eigenvalues) {
    s.min_real = std::min(s.min_real, l.real());
    s.max_real = std::max(s.max_real, l.real());
    if (l.real() < 0.0) ++s.negative_count;
  }
  return s;
}

/// Closed-form eigenvalues of a symmetric circulant supported on the model
/// band {0, ±1, ±2}: f(theta_j) + 2(c1 - psi)cos(theta_j) + 2(c2 - gamma)cos(2 theta_j)
/// with theta_j = 2 pi j / n, j = 0..n-1.
inline std::vector<double> model_circulant_eigenvalues(const ModelSymbol& m, double c1, double c2, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    out[j] = m(theta) + 2.0 * (c1 - m.psi()) * std::cos(theta) + 2.0 * (c2 - m.gamma) * std::cos(2.0 * theta);
  }
  return out;
}

/// Eigenvalues at or below `threshold` become |lambda| when that exceeds the
/// threshold, otherwise the smallest eigenvalue above it.
inline std::vector<double> corrected_spectrum(std::span<const double> eigenvalues, double threshold) {
  double floor_value = 0.0;
  bool found = false;
  for (double l : eigenvalues) {
    if (l > threshold && (!found || l < floor_value)) {
      floor_value = l;
      found = true;
    }
  }
  if (!found) throw uncorrectable_spectrum("no eigenvalue exceeds the correction threshold");
  std::vector<double> out(eigenvalues.begin(), eigenvalues.end());
  for (double& l : out) {
    if (l <= threshold) l = std::abs(l) > threshold ? std::abs(l) : floor_value;
  }
  return out;
}

inline constexpr double default_singularity_ratio = 1e-13;

/// Strang-type low-rank spectral fix yielding a positive definite circulant.
/// The default threshold is the singularity level 1e-13 max|lambda|.
inline CirculantMatrix strang_type_correction(const CirculantMatrix& c, std::optional<double> threshold = std::nullopt) {
  if (!c.is_symmetric()) throw invalid_argument("Strang-type correction needs a real spectrum");
  const double thr = threshold.value_or(default_singularity_ratio * c.max_abs_eigenvalue());
  std::vector<double> lam(c.size());
  for (std::size_t j = 0; j < lam.size(); ++j) lam[j] = c.eigenvalues()[j].real();
  const auto fixed = corrected_spectrum(lam, thr);
  if (fixed == lam) return c;
  return CirculantMatrix::from_spectrum(fixed, c.source_p());
}

/// Solves C z = r by division in the Fourier basis. Throws
/// preconditioner_singular when min|lambda| <= ratio * max|lambda|.
inline std::vector<double> circulant_solve(const CirculantMatrix& c, std::span<const double> r,
                                           double singularity_ratio = default_singularity_ratio) {
  if (r.size() != c.size()) throw dimension_error("circulant solve: dimension mismatch");
  const auto lam = c.eigenvalues();
  const double threshold = singularity_ratio * c.max_abs_eigenvalue();
  for (const auto& l : lam) {
    if (std::abs(l) <= threshold) throw preconditioner_singular("circulant is singular to machine precision");
  }
  std::vector<std::complex<double>> buf(r.begin(), r.end());
  c.plan().execute(buf, false);
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] /= lam[k];
  c.plan().execute(buf, true);
  std::vector<double> z(c.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = buf[i].real() / static_cast<double>(c.size());
  return z;
}

}  // namespace lportho
