#pragma once

// Iteration-count benchmark of l^p circulant preconditioners on the model
// Toeplitz family, rendered as n-by-p tables.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lportho/error.hpp"
#include "lportho/io.hpp"
#include "lportho/pcg.hpp"
#include "lportho/spectral_diagnostics.hpp"
#include "lportho/toeplitz.hpp"

namespace lportho::bench {

using json = nlohmann::json;

enum class RhsKind { ones, random };

struct BenchConfig {
  ModelSymbol symbol;
  std::vector<std::size_t> n_list;
  std::vector<double> p_list;
  double tol = PcgOptions{}.tol;
  std::size_t maxit = 0;  // 0: 10 n
  bool correction = false;
  RhsKind rhs = RhsKind::ones;
  std::uint64_t seed = 0;
  bool unpreconditioned = true;
};

namespace detail {

inline RhsKind parse_rhs(const std::string& text, std::uint64_t& seed) {
  if (text == "ones") return RhsKind::ones;
  if (text == "random") return RhsKind::random;
  if (text.rfind("random(", 0) == 0 && text.back() == ')') {
    const std::string inner = text.substr(7, text.size() - 8);
    try {
      std::size_t used = 0;
      seed = std::stoull(inner, &used);
      if (used != inner.size()) throw std::invalid_argument(inner);
    } catch (const std::exception&) {
      throw parse_error("rhs seed must be an unsigned integer: '" + text + "'");
    }
    return RhsKind::random;
  }
  throw parse_error("rhs must be 'ones' or 'random(<seed>)', got '" + text + "'");
}

}  // namespace detail

/// {alpha, beta, gamma, n_list, p_list, tol?, maxit?, correction?: on|off,
///  rhs?: ones|random(seed), unpreconditioned?: bool}
inline BenchConfig parse_config(const json& j) {
  if (!j.is_object()) throw parse_error("benchmark config must be a JSON object");
  for (const char* key : {"alpha", "beta", "gamma", "n_list", "p_list"}) {
    if (!j.contains(key)) throw parse_error(std::string("benchmark config is missing '") + key + "'");
  }
  BenchConfig c;
  try {
    c.symbol = {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("gamma").get<double>()};
    c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
    c.p_list = j.at("p_list").get<std::vector<double>>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("maxit")) c.maxit = j.at("maxit").get<std::size_t>();
    if (j.contains("correction")) {
      const auto& v = j.at("correction");
      if (v.is_boolean()) c.correction = v.get<bool>();
      else if (v == "on") c.correction = true;
      else if (v == "off") c.correction = false;
      else throw parse_error("correction must be 'on' or 'off'");
    }
    if (j.contains("rhs")) c.rhs = detail::parse_rhs(j.at("rhs").get<std::string>(), c.seed);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("unpreconditioned")) c.unpreconditioned = j.at("unpreconditioned").get<bool>();
  } catch (const json::exception& e) {
    throw parse_error(std::string("benchmark config: ") + e.what());
  }
  if (c.symbol.alpha < 0 || c.symbol.beta < 0 || c.symbol.gamma < 0) {
    throw parse_error("alpha, beta, gamma must be nonnegative");
  }
  if (c.n_list.empty() || c.p_list.empty()) throw parse_error("n_list and p_list must be nonempty");
  if (std::any_of(c.n_list.begin(), c.n_list.end(), [](std::size_t n) { return n < 1; })) {
    throw parse_error("n_list entries must be >= 1");
  }
  if (std::any_of(c.p_list.begin(), c.p_list.end(), [](double p) { return !(p >= 1.0); })) {
    throw parse_error("p_list entries must be >= 1");
  }
  if (!(c.tol > 0.0)) throw parse_error("tol must be positive");
  return c;
}

inline json to_json(const BenchConfig& c) {
  return json{{"alpha", c.symbol.alpha},
              {"beta", c.symbol.beta},
              {"gamma", c.symbol.gamma},
              {"n_list", c.n_list},
              {"p_list", c.p_list},
              {"tol", c.tol},
              {"maxit", c.maxit},
              {"correction", c.correction ? "on" : "off"},
              {"rhs", c.rhs == RhsKind::ones ? std::string("ones") : "random(" + std::to_string(c.seed) + ")"},
              {"unpreconditioned", c.unpreconditioned}};
}

/// All-ones, or uniform on [-1, 1] from a generator seeded by (seed, n).
inline std::vector<double> make_rhs(const BenchConfig& c, std::size_t n) {
  if (c.rhs == RhsKind::ones) return std::vector<double>(n, 1.0);
  std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                    static_cast<std::uint32_t>(n)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> b(n);
  for (auto& v : b) v = dist(gen);
  return b;
}

struct BenchCell {
  std::size_t n = 0;
  std::optional<double> p;  // empty: not preconditioned
  SolveStatus status = SolveStatus::converged;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  bool corrected = false;
  std::size_t negative_eigenvalues = 0;
};

struct BenchTable {
  BenchConfig config;
  /// Row-major: one row per n; columns p_list, then the unpreconditioned run.
  std::vector<BenchCell> cells;

  std::size_t columns() const { return config.p_list.size() + (config.unpreconditioned ? 1 : 0); }
  const BenchCell& at(std::size_t row, std::size_t col) const { return cells[row * columns() + col]; }
};

inline BenchCell run_cell(const BenchConfig& config, std::size_t n, std::optional<double> p) {
  const auto t = build_toeplitz(config.symbol, n);
  const auto b = make_rhs(config, n);
  PcgOptions opts;
  opts.tol = config.tol;
  opts.max_iterations = config.maxit;
  BenchCell cell;
  cell.n = n;
  cell.p = p;
  SolveReport report;
  if (p) {
    auto c = lp_circulant_minimizer(t, *p);
    cell.negative_eigenvalues = circulant_spectrum(c).negative_count;
    if (config.correction) {
      auto fixed = strang_type_correction(c);
      cell.corrected = !std::ranges::equal(fixed.first_column(), c.first_column());
      c = std::move(fixed);
    }
    report = pcg_solve(t, b, &c, opts);
  } else {
    report = pcg_solve(t, b, nullptr, opts);
  }
  cell.status = report.status;
  cell.iterations = report.iterations;
  cell.final_residual = report.relative_residuals.empty() ? 0.0 : report.relative_residuals.back();
  return cell;
}

/// Runs every (n, p) cell on a bounded pool of `workers` threads. Cells are
/// independent and results are stored by index, so output order does not
/// depend on scheduling.
inline BenchTable run_benchmark(const BenchConfig& config, std::size_t workers = 1) {
  BenchTable table;
  table.config = config;
  const std::size_t cols = table.columns();
  table.cells.resize(config.n_list.size() * cols);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < table.cells.size(); idx = next.fetch_add(1)) {
      const std::size_t row = idx / cols;
      const std::size_t col = idx % cols;
      const std::optional<double> p = col < config.p_list.size() ? std::optional<double>(config.p_list[col]) : std::nullopt;
      table.cells[idx] = run_cell(config, config.n_list[row], p);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, table.cells.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return table;
}

/// Iteration count, or "#" when the run did not converge.
inline std::string cell_text(const BenchCell& c) {
  return c.status == SolveStatus::converged ? std::to_string(c.iterations) : std::string("#");
}

inline std::vector<std::string> column_labels(const BenchConfig& c) {
  std::vector<std::string> labels;
  for (double p : c.p_list) labels.push_back(io::format_label(p));
  if (c.unpreconditioned) labels.push_back("n. p.");
  return labels;
}

inline std::string render_csv(const BenchTable& t) {
  std::ostringstream os;
  os << "n";
  for (const auto& l : column_labels(t.config)) os << ',' << l;
  os << '\n';
  for (std::size_t r = 0; r < t.config.n_list.size(); ++r) {
    os << t.config.n_list[r];
    for (std::size_t c = 0; c < t.columns(); ++c) os << ',' << cell_text(t.at(r, c));
    os << '\n';
  }
  return os.str();
}

inline std::string render_markdown(const BenchTable& t) {
  std::ostringstream os;
  const auto& s = t.config.symbol;
  os << "(alpha, beta, gamma) = (" << io::format_label(s.alpha) << ", " << io::format_label(s.beta) << ", "
     << io::format_label(s.gamma) << ")\n\n";
  os << "| n \\ p |";
  for (const auto& l : column_labels(t.config)) os << ' ' << l << " |";
  os << "\n|---|";
  for (std::size_t c = 0; c < t.columns(); ++c) os << "---|";
  os << '\n';
  for (std::size_t r = 0; r < t.config.n_list.size(); ++r) {
    os << "| " << t.config.n_list[r] << " |";
    for (std::size_t c = 0; c < t.columns(); ++c) os << ' ' << cell_text(t.at(r, c)) << " |";
    os << '\n';
  }
  os << "\nn. p.: not preconditioned; #: failure (singular or indefinite preconditioner, breakdown, or iteration cap)\n";
  return os.str();
}

/// Long format with solver status per cell.
inline std::string render_cells_csv(const BenchTable& t) {
  std::ostringstream os;
  os << "n,p,status,iterations,final_relative_residual,corrected,negative_circulant_eigenvalues\n";
  for (const auto& c : t.cells) {
    os << c.n << ',' << (c.p ? io::format_label(*c.p) : std::string("n.p.")) << ',' << to_string(c.status) << ','
       << c.iterations << ',' << io::format_double(c.final_residual) << ',' << (c.corrected ? "true" : "false") << ','
       << c.negative_eigenvalues << '\n';
  }
  return os.str();
}

/// j, Re lambda_j, Im lambda_j.
inline std::string circulant_spectrum_csv(const CirculantMatrix& c) {
  std::ostringstream os;
  os << "j,lambda_re,lambda_im\n";
  const auto s = circulant_spectrum(c);
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    os << j << ',' << io::format_double(s.eigenvalues[j].real()) << ',' << io::format_double(s.eigenvalues[j].imag())
       << '\n';
  }
  return os.str();
}

inline std::string eigenvalues_csv(std::span<const double> eigenvalues) {
  std::ostringstream os;
  os << "j,lambda\n";
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) os << j << ',' << io::format_double(eigenvalues[j]) << '\n';
  return os.str();
}

}  // namespace lportho::bench
