// Iteration tables for the two model problems, p-tilde, and the effect of a
// Strang-type correction on the failing columns.

#include <cstdio>
#include <thread>

#include "lportho/lportho.hpp"

int main() {
  using namespace lportho;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  for (const ModelSymbol m : {ModelSymbol{1, 2, 3}, ModelSymbol{0, 2, 8}}) {
    bench::BenchConfig c;
    c.symbol = m;
    c.n_list = {100, 400, 700, 1000};
    c.p_list = {1, 1.4, 1.6, 1.8, 3, 5, 10};
    std::printf("%s\n", bench::render_markdown(bench::run_benchmark(c, workers)).c_str());
    std::printf("p-tilde at n = 1000: %g\n\n", select_p_tilde(build_toeplitz(m, 1000), c.p_list));
  }

  bench::BenchConfig fixed;
  fixed.symbol = {0, 2, 8};
  fixed.n_list = {100, 400, 700, 1000};
  fixed.p_list = {1, 1.4};
  fixed.correction = true;
  fixed.unpreconditioned = false;
  std::printf("with Strang-type correction\n%s", bench::render_markdown(bench::run_benchmark(fixed, workers)).c_str());
}
