#pragma once

// Dense spectral diagnostics for circulant-preconditioned Toeplitz matrices.
// These are O(n^3) and limited to n <= max_dense_dimension; the solve path
// never calls them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lportho/error.hpp"
#include "lportho/toeplitz.hpp"

namespace lportho {

inline constexpr std::size_t max_dense_dimension = 256;

struct ClusterReport {
  std::vector<double> eigenvalues;  // ascending

  /// Share of eigenvalues in [1 - rho, 1 + rho].
  double fraction_within(double rho) const {
    if (eigenvalues.empty()) return 0.0;
    const auto count = std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                     [rho](double l) { return std::abs(l - 1.0) <= rho; });
    return static_cast<double>(count) / static_cast<double>(eigenvalues.size());
  }
};

namespace detail {

inline void require_dense_size(std::size_t n) {
  if (n > max_dense_dimension) {
    throw invalid_argument("dense diagnostics are limited to n <= " + std::to_string(max_dense_dimension));
  }
}

inline bool is_spd(const CirculantMatrix& c, double singularity_ratio = default_singularity_ratio) {
  if (!c.is_symmetric()) return false;
  const double threshold = singularity_ratio * c.max_abs_eigenvalue();
  return std::all_of(c.eigenvalues().begin(), c.eigenvalues().end(),
                     [threshold](const auto& l) { return l.real() > threshold; });
}

// C^{-1/2} as a dense symmetric circulant.
inline Eigen::MatrixXd inverse_sqrt(const CirculantMatrix& c) {
  std::vector<double> lam(c.size());
  for (std::size_t j = 0; j < lam.size(); ++j) lam[j] = 1.0 / std::sqrt(c.eigenvalues()[j].real());
  return CirculantMatrix::from_spectrum(lam).to_dense();
}

}  // namespace detail

/// Eigenvalues of C^{-1/2} T C^{-1/2} (similar to C^{-1} T) for an SPD
/// circulant C.
inline ClusterReport preconditioned_spectrum_diagnostic(const ToeplitzOperator& t, const CirculantMatrix& c) {
  if (t.size() != c.size()) throw dimension_error("operator and preconditioner differ in size");
  detail::require_dense_size(t.size());
  if (!t.is_symmetric()) throw invalid_argument("preconditioned spectrum needs a symmetric operator");
  if (!detail::is_spd(c)) throw invalid_argument("preconditioned spectrum needs an SPD circulant");
  const Eigen::MatrixXd h = detail::inverse_sqrt(c);
  const Eigen::MatrixXd s = h * t.to_dense() * h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  ClusterReport r;
  r.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  return r;
}

/// Eigenvalues of C^{-1} T by a dense nonsymmetric eigensolve.
inline std::vector<std::complex<double>> preconditioned_eigenvalues(const ToeplitzOperator& t, const CirculantMatrix& c) {
  if (t.size() != c.size()) throw dimension_error("operator and preconditioner differ in size");
  detail::require_dense_size(t.size());
  const std::size_t n = t.size();
  const Eigen::MatrixXd dense = t.to_dense();
  Eigen::MatrixXd m(n, n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto z = circulant_solve(c, col);
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

enum class PTildeMode {
  /// Smallest p whose minimizer is positive definite.
  circulant_positivity,
  /// Smallest p for which every eigenvalue of C^{-1} T has |Im| < epsilon and
  /// a positive real part, by dense eigensolves (n <= max_dense_dimension).
  exact,
};

/// Smallest grid exponent whose l^p circulant minimizer is a usable
/// preconditioner. Throws none_found when no grid point qualifies.
inline double select_p_tilde(const ToeplitzOperator& t, std::span<const double> p_grid, double epsilon = 1e-6,
                             PTildeMode mode = PTildeMode::circulant_positivity) {
  if (p_grid.empty()) throw invalid_argument("p grid must not be empty");
  if (!(epsilon > 0.0)) throw invalid_argument("epsilon must be positive");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 1.0)) throw invalid_argument("p grid entries must be >= 1");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw invalid_argument("p grid must be ascending");
  }
  if (mode == PTildeMode::exact) detail::require_dense_size(t.size());

  for (double p : p_grid) {
    const auto c = lp_circulant_minimizer(t, p);
    if (mode == PTildeMode::circulant_positivity) {
      if (detail::is_spd(c)) return p;
      continue;
    }
    const double threshold = default_singularity_ratio * c.max_abs_eigenvalue();
    const bool singular = std::any_of(c.eigenvalues().begin(), c.eigenvalues().end(),
                                      [threshold](const auto& l) { return std::abs(l) <= threshold; });
    if (singular) continue;
    if (detail::is_spd(c) && t.is_symmetric()) {
      const auto report = preconditioned_spectrum_diagnostic(t, c);
      if (report.eigenvalues.front() > 0.0) return p;
      continue;
    }
    const auto ev = preconditioned_eigenvalues(t, c);
    const bool ok = std::all_of(ev.begin(), ev.end(), [epsilon](const auto& l) {
      return std::abs(l.imag()) < epsilon && l.real() > 0.0;
    });
    if (ok) return p;
  }
  throw none_found("no exponent in the grid yields a positive definite preconditioner");
}

inline double select_p_tilde(const ToeplitzOperator& t, std::initializer_list<double> p_grid, double epsilon = 1e-6,
                             PTildeMode mode = PTildeMode::circulant_positivity) {
  const std::vector<double> g(p_grid);
  return select_p_tilde(t, std::span<const double>(g), epsilon, mode);
}

}  // namespace lportho
