#pragma once

// Weak inner products, angles and orthogonality for sampled functions in L^p,
// p in [1, inf). Dual elements are produced by the L^p duality map
//
//   f* = sign(f) |f|^(p-1)          (real samples)
//   f* = f |f|^(p-2),  0 -> 0       (complex samples)
//
// which is the sign function for p = 1 and the identity for p = 2. Integrals
// become sums with a uniform quadrature weight.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "lportho/error.hpp"

namespace lportho {

template <class T>
concept Sample = std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>;

/// Exponent p >= 1 together with its conjugate q (1/p + 1/q = 1).
class PExponent {
 public:
  explicit PExponent(double p) : p_(p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw invalid_argument("exponent p must be a finite real >= 1, got " + std::to_string(p));
    }
  }

  double p() const { return p_; }
  double q() const { return p_ == 1.0 ? std::numeric_limits<double>::infinity() : p_ / (p_ - 1.0); }

 private:
  double p_;
};

/// Finite sequence of samples with a positive uniform quadrature weight.
template <Sample Scalar>
class DiscreteFunction {
 public:
  explicit DiscreteFunction(std::vector<Scalar> values, double weight = 1.0)
      : values_(std::move(values)), weight_(weight) {
    if (values_.empty()) throw invalid_argument("discrete function must have at least one sample");
    if (!(weight_ > 0.0) || !std::isfinite(weight_)) throw invalid_argument("quadrature weight must be positive");
    for (const auto& v : values_) {
      if (!finite(v)) throw invalid_argument("discrete function samples must be finite");
    }
  }

  std::span<const Scalar> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double weight() const { return weight_; }
  const Scalar& operator[](std::size_t i) const { return values_[i]; }

 private:
  static bool finite(double v) { return std::isfinite(v); }
  static bool finite(const std::complex<double>& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

  std::vector<Scalar> values_;
  double weight_;
};

/// Weak inner product, the Pythagorean defect and the derived angle.
struct GeometryResult {
  double weak_inner_product = 0.0;
  double cot_angle = 0.0;
  double angle = std::numbers::pi / 2;
  double defect = 0.0;
  bool orthogonal = true;
};

namespace detail {

inline double dual_sample(double x, double p) {
  if (x == 0.0) return 0.0;
  if (p == 1.0) return x > 0.0 ? 1.0 : -1.0;
  if (p == 2.0) return x;
  return std::copysign(std::pow(std::abs(x), p - 1.0), x);
}

inline std::complex<double> dual_sample(const std::complex<double>& x, double p) {
  const double r = std::abs(x);
  if (r == 0.0) return {0.0, 0.0};
  if (p == 2.0) return x;
  if (p == 1.0) return x / r;
  return x * std::pow(r, p - 2.0);
}

// Re(a conj(b)); the pairing of a primal sample with a dual sample.
inline double pairing(double a, double b) { return a * b; }
inline double pairing(const std::complex<double>& a, const std::complex<double>& b) {
  return a.real() * b.real() + a.imag() * b.imag();
}

template <Sample Scalar>
void require_compatible(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g) {
  if (f.size() != g.size()) {
    throw dimension_error("length mismatch: " + std::to_string(f.size()) + " vs " + std::to_string(g.size()));
  }
  if (f.weight() != g.weight()) throw dimension_error("quadrature weights differ");
}

template <Sample Scalar>
DiscreteFunction<Scalar> add(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g) {
  std::vector<Scalar> s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f[i] + g[i];
  return DiscreteFunction<Scalar>(std::move(s), f.weight());
}

}  // namespace detail

/// Image of `f` under the L^p duality map. Satisfies
/// sum_i w Re(f_i conj(f*_i)) = ||f||_p^p.
template <Sample Scalar>
DiscreteFunction<Scalar> dualize(const DiscreteFunction<Scalar>& f, const PExponent& p) {
  std::vector<Scalar> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::dual_sample(f[i], p.p());
  return DiscreteFunction<Scalar>(std::move(out), f.weight());
}

/// ||f||_p^p  =  sum_i w |f_i|^p.
template <Sample Scalar>
double lp_power(const DiscreteFunction<Scalar>& f, const PExponent& p) {
  double acc = 0.0;
  for (const auto& v : f.values()) {
    const double a = std::abs(v);
    acc += p.p() == 1.0 ? a : (p.p() == 2.0 ? a * a : std::pow(a, p.p()));
  }
  return f.weight() * acc;
}

/// Duality pairing  sum_i w Re(f_i conj(h_i)).
template <Sample Scalar>
double pair(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& h) {
  detail::require_compatible(f, h);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += detail::pairing(f[i], h[i]);
  return f.weight() * acc;
}

/// 1/2 sum w Re[ f ((f+g)* - f*)^ + g ((f+g)* - g*)^ ]  (^ = conjugate).
template <Sample Scalar>
double weak_inner_product(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p) {
  detail::require_compatible(f, g);
  const double e = p.p();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Scalar h = detail::dual_sample(f[i] + g[i], e);
    const Scalar fd = detail::dual_sample(f[i], e);
    const Scalar gd = detail::dual_sample(g[i], e);
    acc += detail::pairing(f[i], h - fd) + detail::pairing(g[i], h - gd);
  }
  return 0.5 * f.weight() * acc;
}

/// <f+g, (f+g)*> - <f, f*> - <g, g*>; zero exactly when f and g are
/// orthogonal. For p = 1 this is ||f+g||_1 - ||f||_1 - ||g||_1.
template <Sample Scalar>
double pythagorean_defect(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p) {
  detail::require_compatible(f, g);
  const auto s = detail::add(f, g);
  return pair(s, dualize(s, p)) - pair(f, dualize(f, p)) - pair(g, dualize(g, p));
}

/// arccot on the branch (0, pi), arccot(0) = pi/2.
inline double arccot(double x) { return std::numbers::pi / 2 - std::atan(x); }

/// Angle whose cotangent is the full (un-halved) defect integral.
template <Sample Scalar>
double angle(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p) {
  return arccot(pythagorean_defect(f, g, p));
}

/// Tolerance scale for orthogonality decisions: max(1, ||f||_p^p, ||g||_p^p).
template <Sample Scalar>
double orthogonality_scale(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p) {
  return std::max({1.0, lp_power(f, p), lp_power(g, p)});
}

inline constexpr double default_orthogonality_tol = 1e-10;

template <Sample Scalar>
bool is_orthogonal(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p,
                   double tol = default_orthogonality_tol) {
  if (!(tol > 0.0)) throw invalid_argument("orthogonality tolerance must be positive");
  return std::abs(weak_inner_product(f, g, p)) <= tol * orthogonality_scale(f, g, p);
}

template <Sample Scalar>
GeometryResult evaluate(const DiscreteFunction<Scalar>& f, const DiscreteFunction<Scalar>& g, const PExponent& p,
                        double tol = default_orthogonality_tol) {
  GeometryResult r;
  r.weak_inner_product = weak_inner_product(f, g, p);
  r.defect = pythagorean_defect(f, g, p);
  r.cot_angle = r.defect;
  r.angle = arccot(r.cot_angle);
  r.orthogonal = is_orthogonal(f, g, p, tol);
  return r;
}

using RealFunction = DiscreteFunction<double>;
using ComplexFunction = DiscreteFunction<std::complex<double>>;

}  // namespace lportho
