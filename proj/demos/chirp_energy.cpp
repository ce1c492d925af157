// Two filter schedules on a chirp plus slow tone: both conserve the L1
// Fourier energy, yet they split the signal differently.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "lportho/lportho.hpp"

int main() {
  const std::size_t n = 1000;
  std::vector<double> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    samples[j] = std::cos(2 * std::numbers::pi * (90 * x * x + 10 * x)) + std::cos(2 * std::numbers::pi * x);
  }
  const lportho::Signal s(samples);

  for (const std::vector<std::size_t>& schedule : {std::vector<std::size_t>{4, 20}, std::vector<std::size_t>{20}}) {
    const auto d = lportho::fif_decompose(s, schedule);
    const auto report = lportho::check_energy_conservation(s, d);
    std::printf("schedule {");
    for (std::size_t i = 0; i < schedule.size(); ++i) std::printf(i ? ", %zu" : "%zu", schedule[i]);
    std::printf("}\n%s", lportho::io::energy_report_table(report).c_str());
    const auto angles = lportho::pairwise_l1_angles(d, lportho::AngleDomain::frequency);
    for (std::size_t i = 0; i < angles.size(); ++i)
      for (std::size_t k = i + 1; k < angles.size(); ++k)
        std::printf("  frequency-domain L1 angle(imf%zu, imf%zu) = %.17g\n", i + 1, k + 1, angles[i][k]);
    std::printf("\n");
  }
}
