// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lportho/lportho.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lportho;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double l1(std::span<const double> v) {
  double a = 0.0;
  for (double x : v) a += std::abs(x);
  return a;
}

const std::vector<std::size_t> kTableN{100, 400, 700, 1000};
const std::vector<double> kTableP{1, 1.4, 1.6, 1.8, 3, 5, 10};

Signal chirp_plus_tone(std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n);
    s[j] = std::cos(2.0 * std::numbers::pi * (90.0 * x * x + 10.0 * x)) + std::cos(2.0 * std::numbers::pi * x);
  }
  return Signal(std::move(s));
}

Outcome l1_pythagorean_identity() {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::size_t> len(1, 256);
  double worst_closed = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(gen);
    const auto a = testing::random_vector(gen, n);
    const auto b = testing::random_vector(gen, n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] + b[i];
    const RealFunction f(a), g(b);
    const double closed = 0.5 * (l1(s) - l1(a) - l1(b));
    const double scale1 = l1(s) + l1(a) + l1(b);
    worst_closed = std::max(worst_closed, std::abs(weak_inner_product(f, g, PExponent(1.0)) - closed) / scale1);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const PExponent pe(p);
      const double scale = lp_power(RealFunction(s), pe) + lp_power(f, pe) + lp_power(g, pe);
      const double gap = std::abs(pythagorean_defect(f, g, pe) - 2.0 * weak_inner_product(f, g, pe));
      worst_identity = std::max(worst_identity, gap / scale);
    }
  }
  return {worst_closed <= 1e-12 && worst_identity <= 1e-12,
          "max rel err closed form " + fmt(worst_closed) + ", defect-2WIP " + fmt(worst_identity)};
}

Outcome l2_coincidence() {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<std::size_t> len(1, 256);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(gen);
    const auto a = testing::random_vector(gen, n);
    const auto b = testing::random_vector(gen, n);
    double dot = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += a[i] * b[i];
      scale += std::abs(a[i] * b[i]);
    }
    if (scale == 0.0) scale = 1.0;
    worst = std::max(worst, std::abs(weak_inner_product(RealFunction(a), RealFunction(b), PExponent(2.0)) - dot) / scale);
  }
  return {worst <= 1e-12, "max rel err " + fmt(worst)};
}

Outcome energy_conservation() {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  const std::size_t sizes[] = {128, 256, 500};
  std::uniform_int_distribution<std::size_t> first(1, 6), step(1, 20), count(1, 4);
  double worst = 0.0;
  std::size_t unwanted = 0, runs = 0;
  auto check = [&](const Signal& s, const std::vector<std::size_t>& schedule) {
    const auto d = fif_decompose(s, schedule);
    const auto r = check_energy_conservation(s, d);
    worst = std::max(worst, std::abs(r.conservation_gap) / r.total_energy);
    unwanted += r.unwanted_frequencies.size();
    ++runs;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = sizes[trial % 3];
    std::vector<double> v(n);
    for (auto& x : v) x = nd(gen);
    std::vector<std::size_t> schedule{first(gen)};
    for (std::size_t i = 1, c = count(gen); i < c; ++i) schedule.push_back(schedule.back() + step(gen));
    check(Signal(std::move(v)), schedule);
  }
  check(chirp_plus_tone(1000), {4, 20});
  check(chirp_plus_tone(1000), {20});
  return {worst <= 1e-10 && unwanted == 0,
          std::to_string(runs) + " decompositions, max |gap|/E1 " + fmt(worst) + ", unwanted " + std::to_string(unwanted)};
}

Outcome non_uniqueness() {
  const auto s = chirp_plus_tone(1000);
  const auto a = fif_decompose(s, {4, 20});
  const auto b = fif_decompose(s, {20});
  const bool ca = check_energy_conservation(s, a).conserved;
  const bool cb = check_energy_conservation(s, b).conserved;
  // Components compared index by index; a missing component counts as zero.
  const std::size_t m = std::max(a.components().size(), b.components().size());
  double dist2 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double x = k < a.components().size() ? a.components()[k][j] : 0.0;
      const double y = k < b.components().size() ? b.components()[k][j] : 0.0;
      dist2 += (x - y) * (x - y);
    }
  }
  const double rel = std::sqrt(dist2) / s.l2_norm();
  return {ca && cb && rel > 1e-3,
          "schedules {4,20} and {20}: conserved " + std::string(ca && cb ? "both" : "not both") +
              ", component distance / ||s|| = " + fmt(rel)};
}

const std::vector<ModelSymbol> kConfigs{{1, 2, 3}, {0, 2, 8}, {0, 1, 0}};
const std::vector<double> kMinimizerP{1, 1.4, 1.6, 1.8, 2, 3, 5, 10};

Outcome closed_form_minimizer() {
  double worst_oracle = 0.0, worst_frob = 0.0, worst_pyth = 0.0;
  for (const auto& m : kConfigs) {
    for (std::size_t n : {10u, 100u, 1000u}) {
      const auto t = build_toeplitz(m, n);
      const Eigen::MatrixXd td = t.to_dense();
      for (double p : kMinimizerP) {
        const auto c = lp_circulant_minimizer(t, p);
        for (std::size_t k = 1; k < n; ++k) {
          const double a = td(static_cast<Eigen::Index>(k), 0);
          const double b = td(0, static_cast<Eigen::Index>(n - k));
          double ref;
          if (p == 1.0) {
            ref = (n - k) >= k ? a : b;
          } else {
            ref = testing::diagonal_class_oracle(a, b, n, k, p);
          }
          worst_oracle = std::max(worst_oracle, std::abs(c.first_column()[k] - ref));
        }
        worst_oracle = std::max(worst_oracle, std::abs(c.first_column()[0] - td(0, 0)));
        if (p != 2.0) continue;
        // Frobenius projection: mean of T over each wrapped diagonal, read off
        // the dense matrix; dense least squares as well where affordable.
        std::vector<double> proj(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) proj[(i + n - j) % n] += td(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        for (auto& v : proj) v /= static_cast<double>(n);
        std::vector<std::vector<double>> oracles{proj};
        if (n <= 16) oracles.push_back(testing::frobenius_projection(td));
        for (const auto& o : oracles)
          for (std::size_t k = 0; k < n; ++k) worst_frob = std::max(worst_frob, std::abs(c.first_column()[k] - o[k]));
        const Eigen::MatrixXd cd = c.to_dense();
        const double lhs = td.squaredNorm();
        worst_pyth = std::max(worst_pyth, std::abs(lhs - (td - cd).squaredNorm() - cd.squaredNorm()) / lhs);
      }
    }
  }
  return {worst_oracle <= 1e-8 && worst_frob <= 1e-12 && worst_pyth <= 1e-10,
          "max |c_k - oracle| " + fmt(worst_oracle) + ", Frobenius " + fmt(worst_frob) + ", Pythagorean rel " +
              fmt(worst_pyth)};
}

Outcome spectrum_formula() {
  double worst = 0.0;
  for (const auto& m : kConfigs) {
    for (std::size_t n : {10u, 100u, 1000u}) {
      for (double p : kMinimizerP) {
        const auto c = lp_circulant_minimizer(build_toeplitz(m, n), p);
        const auto formula = model_circulant_eigenvalues(m, c.first_column()[1], c.first_column()[2], n);
        const auto s = circulant_spectrum(c);
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(s.eigenvalues[j] - formula[j]));
      }
    }
  }
  return {worst <= 1e-10, "max |lambda_dft - lambda_formula| " + fmt(worst)};
}

bench::BenchTable table(const ModelSymbol& m, double tol) {
  bench::BenchConfig c;
  c.symbol = m;
  c.n_list = kTableN;
  c.p_list = kTableP;
  c.tol = tol;
  return bench::run_benchmark(c, 1);
}

// Tabulated reference counts; -1 marks a failure entry.
const int kTable2[4][8] = {{3, 4, 5, 6, 17, 28, 36, 50},
                           {3, 4, 4, 5, 13, 23, 32, 74},
                           {3, 4, 4, 5, 11, 22, 31, 73},
                           {3, 4, 4, 5, 10, 21, 31, 73}};

std::size_t table2_misses(const bench::BenchTable& t, std::string& worst) {
  std::size_t misses = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      const auto& cell = t.at(r, c);
      const double ref = kTable2[r][c];
      const bool unpre = c == 7;
      const double band = unpre ? 0.2 * ref : std::max(2.0, 0.2 * ref);
      bool ok = cell.status == SolveStatus::converged && std::abs(static_cast<double>(cell.iterations) - ref) <= band;
      if (c == 0) ok = ok && cell.iterations <= 5;
      if (!ok) {
        ++misses;
        if (!worst.empty()) worst += "; ";
        worst += "n=" + std::to_string(kTableN[r]) + " " + (unpre ? std::string("n.p.") : "p=" + io::format_label(kTableP[c])) +
                 ": " + bench::cell_text(cell) + " vs " + std::to_string(kTable2[r][c]);
      }
    }
  }
  return misses;
}

Outcome table2_reproduction() {
  const auto t = table({1, 2, 3}, 1e-7);
  std::string worst;
  const std::size_t misses = table2_misses(t, worst);
  Outcome o{misses == 0, "tol 1e-7: " + std::to_string(misses) + "/32 cells outside band" +
                             (worst.empty() ? std::string() : " (" + worst + ")")};
  std::string w9;
  const std::size_t m9 = table2_misses(table({1, 2, 3}, 1e-9), w9);
  o.notes.push_back("same table at the library default tol 1e-9: " + std::to_string(m9) + "/32 cells outside band");
  return o;
}

Outcome table3_reproduction() {
  const auto t = table({0, 2, 8}, 1e-7);
  const int ref16[4] = {11, 13, 13, 15};
  bool fail_cols = true, p16 = true, mono = true;
  std::ostringstream os;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 2; ++c) fail_cols = fail_cols && t.at(r, c).status != SolveStatus::converged;
    const auto& cell = t.at(r, 2);
    p16 = p16 && cell.status == SolveStatus::converged &&
          std::abs(static_cast<double>(cell.iterations) - ref16[r]) <= std::max(3.0, 0.25 * ref16[r]);
    for (std::size_t c = 3; c < 7; ++c) {
      mono = mono && t.at(r, c).status == SolveStatus::converged && t.at(r, c).iterations >= t.at(r, c - 1).iterations;
    }
    os << (r ? "; " : "") << "n=" << kTableN[r] << ": " << to_string(t.at(r, 0).status) << ", "
       << to_string(t.at(r, 1).status) << ", p=1.6 " << bench::cell_text(cell);
  }
  return {fail_cols && p16 && mono, "tol 1e-7: " + os.str() + (mono ? "; monotone" : "; NOT monotone")};
}

Outcome p_tilde_selection() {
  bool ok = true;
  std::ostringstream os;
  for (std::size_t n : kTableN) {
    const double a = select_p_tilde(build_toeplitz(ModelSymbol{1, 2, 3}, n), kTableP);
    const double b = select_p_tilde(build_toeplitz(ModelSymbol{0, 2, 8}, n), kTableP);
    ok = ok && a == 1.0 && b == 1.6;
    os << (n == kTableN.front() ? "" : "; ") << "n=" << n << ": " << io::format_label(a) << ", " << io::format_label(b);
  }
  return {ok, "(1,2,3), (0,2,8) -> " + os.str()};
}

Outcome clustering() {
  std::vector<double> fr;
  for (std::size_t n : {64u, 128u, 256u}) {
    const auto t = build_toeplitz(ModelSymbol{1, 2, 3}, n);
    fr.push_back(preconditioned_spectrum_diagnostic(t, lp_circulant_minimizer(t, 1.0)).fraction_within(0.1));
  }
  const bool ok = fr[1] >= 0.9 && fr[0] <= fr[1] && fr[1] <= fr[2];
  return {ok, "fraction in [0.9, 1.1] at n=64,128,256: " + fmt(fr[0]) + ", " + fmt(fr[1]) + ", " + fmt(fr[2])};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "L1 Pythagorean identity and defect = 2 WIP", 1.0, l1_pythagorean_identity},
      {2, "L2 coincidence with the dot product", 0.0, l2_coincidence},
      {3, "L1 Fourier energy conservation, no unwanted oscillations", 10.0, energy_conservation},
      {4, "non-uniqueness of conserving decompositions", 0.0, non_uniqueness},
      {5, "closed-form l^p circulant minimizer", 0.0, closed_form_minimizer},
      {6, "circulant spectrum closed form", 0.0, spectrum_formula},
      {7, "well-conditioned iteration table (1,2,3)", 60.0, table2_reproduction},
      {8, "ill-conditioned iteration table (0,2,8)", 0.0, table3_reproduction},
      {9, "p-tilde selection", 0.0, p_tilde_selection},
      {10, "clustering of the preconditioned spectrum", 0.0, clustering},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += ", runtime limit " + fmt(c.time_limit_s) + " s exceeded";
    }
    if (!o.pass) ++failed;
    std::printf("%s  [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), secs);
    for (const auto& note : o.notes) std::printf("        note: %s\n", note.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
