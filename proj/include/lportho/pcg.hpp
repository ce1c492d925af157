#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lportho/error.hpp"
#include "lportho/toeplitz.hpp"

namespace lportho {

enum class SolveStatus {
  converged,
  max_iterations,
  preconditioner_singular,
  preconditioner_indefinite,
  breakdown,
};

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::preconditioner_singular: return "preconditioner_singular";
    case SolveStatus::preconditioner_indefinite: return "preconditioner_indefinite";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

struct SolveReport {
  std::size_t iterations = 0;
  /// ||b - T x_k|| / ||b|| for k = 0..iterations.
  std::vector<double> relative_residuals;
  SolveStatus status = SolveStatus::converged;
  std::optional<double> p_used;
  std::vector<double> solution;

  bool ok() const { return status == SolveStatus::converged; }
};

struct PcgOptions {
  double tol = 1e-9;
  /// 0 selects 10 n.
  std::size_t max_iterations = 0;
  double singularity_ratio = default_singularity_ratio;
};

/// Preconditioned conjugate gradients for a symmetric Toeplitz system from
/// x0 = 0, stopping on ||b - T x|| <= tol ||b||. A preconditioner must be a
/// symmetric positive definite circulant; a singular or indefinite one is
/// reported without iterating.
inline SolveReport pcg_solve(const ToeplitzOperator& t, std::span<const double> b,
                             const CirculantMatrix* preconditioner = nullptr, const PcgOptions& options = {}) {
  const std::size_t n = t.size();
  if (b.size() != n) throw dimension_error("right-hand side length does not match the operator");
  if (preconditioner && preconditioner->size() != n) throw dimension_error("preconditioner dimension mismatch");
  if (!(options.tol > 0.0)) throw invalid_argument("PCG tolerance must be positive");
  if (!t.is_symmetric()) throw invalid_argument("PCG requires a symmetric Toeplitz operator");
  for (double v : b) {
    if (!std::isfinite(v)) throw invalid_argument("right-hand side must be finite");
  }

  SolveReport report;
  report.solution.assign(n, 0.0);
  if (preconditioner) report.p_used = preconditioner->source_p();

  if (preconditioner) {
    const double threshold = options.singularity_ratio * preconditioner->max_abs_eigenvalue();
    for (const auto& l : preconditioner->eigenvalues()) {
      if (std::abs(l) <= threshold) {
        report.status = SolveStatus::preconditioner_singular;
        return report;
      }
    }
  }

  const auto dot = [](std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
  };

  const double bnorm = std::sqrt(dot(b, b));
  report.relative_residuals.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) return report;

  if (preconditioner) {
    bool spd = preconditioner->is_symmetric();
    for (const auto& l : preconditioner->eigenvalues()) spd = spd && l.real() > 0.0;
    if (!spd) {
      report.status = SolveStatus::preconditioner_indefinite;
      return report;
    }
  }

  const auto precondition = [&](std::span<const double> r) {
    if (!preconditioner) return std::vector<double>(r.begin(), r.end());
    return circulant_solve(*preconditioner, r, options.singularity_ratio);
  };

  const std::size_t maxit = options.max_iterations ? options.max_iterations : 10 * n;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z = precondition(r);
  std::vector<double> d = z;
  double rz = dot(r, z);

  for (std::size_t it = 1; it <= maxit; ++it) {
    const auto q = t.apply(d);
    const double curvature = dot(d, q);
    if (!(curvature > 0.0) || !(rz > 0.0)) {
      report.status = SolveStatus::breakdown;
      return report;
    }
    const double step = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      report.solution[i] += step * d[i];
      r[i] -= step * q[i];
    }
    report.iterations = it;
    const double rel = std::sqrt(dot(r, r)) / bnorm;
    report.relative_residuals.push_back(rel);
    if (rel <= options.tol) {
      report.status = SolveStatus::converged;
      return report;
    }
    z = precondition(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  report.status = SolveStatus::max_iterations;
  return report;
}

}  // namespace lportho
