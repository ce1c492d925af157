#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lportho/lportho.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lportho;

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("lportho");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("LPORTHO_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

RealFunction read_function(const std::string& path) {
  return RealFunction(io::read_samples(fs::path(path)).values);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

/// Writes outputs under `dir` and records them in the manifest.
class OutputSet {
 public:
  OutputSet(std::string dir, io::RunManifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {
    manifest_.output_directory = dir_;
  }

  bool enabled() const { return !dir_.empty(); }

  void text(const std::string& name, const std::string& body) {
    if (!enabled()) return;
    io::write_text(fs::path(dir_) / name, body);
    manifest_.outputs.push_back(name);
    spdlog::debug("wrote {}", (fs::path(dir_) / name).string());
  }

  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  void finish() {
    if (!enabled()) return;
    io::write_json(fs::path(dir_) / "manifest.json", manifest_.to_json());
  }

 private:
  std::string dir_;
  io::RunManifest manifest_;
};

struct Common {
  std::string out_dir;
};

int cmd_angle(const std::string& f_path, const std::string& g_path, double p, double tol, const Common& common) {
  const auto f = read_function(f_path);
  const auto g = read_function(g_path);
  const auto result = evaluate(f, g, PExponent(p), tol);
  const json j = io::to_json(result);
  std::cout << j.dump(2) << '\n';
  OutputSet out(common.out_dir, {"angle", {f_path, g_path}, {{"p", p}, {"tol", tol}}});
  out.json_file("angle.json", j);
  out.finish();
  return 0;
}

int cmd_ortho(const std::string& f_path, const std::string& g_path, double p, double tol, const Common& common) {
  const auto f = read_function(f_path);
  const auto g = read_function(g_path);
  const PExponent pe(p);
  const json j{{"orthogonal", is_orthogonal(f, g, pe, tol)},
               {"wip", weak_inner_product(f, g, pe)},
               {"tol", tol},
               {"scale", orthogonality_scale(f, g, pe)}};
  std::cout << j.dump(2) << '\n';
  OutputSet out(common.out_dir, {"ortho", {f_path, g_path}, {{"p", p}, {"tol", tol}}});
  out.json_file("ortho.json", j);
  out.finish();
  return 0;
}

int cmd_energy(const std::string& path, const Common& common) {
  const auto signal = io::to_signal(io::read_samples(fs::path(path)));
  const auto spectrum = dft(signal);
  const json j{{"n", signal.size()}, {"bandwidth", signal.bandwidth()}, {"l1_fourier_energy", l1_fourier_energy(spectrum)}};
  std::cout << j.dump(2) << '\n';
  OutputSet out(common.out_dir, {"energy", {path}, json::object()});
  out.json_file("energy.json", j);
  std::ostringstream csv;
  csv << "xi,abs\n";
  const auto mags = spectrum.magnitudes();
  for (std::size_t k = 0; k < mags.size(); ++k) csv << k << ',' << io::format_double(mags[k]) << '\n';
  out.text("spectrum.csv", csv.str());
  out.finish();
  return 0;
}

json angles_json(const Decomposition& d) {
  return json{{"time", pairwise_l1_angles(d, AngleDomain::time)},
              {"frequency", pairwise_l1_angles(d, AngleDomain::frequency)},
              {"time_defects", pairwise_l1_defects(d, AngleDomain::time)},
              {"frequency_defects", pairwise_l1_defects(d, AngleDomain::frequency)}};
}

void emit_energy(OutputSet& out, const Signal& source, const Decomposition& d, const EnergyReport& report) {
  std::cout << io::energy_report_table(report);
  out.json_file("energy_report.json", io::to_json(report));
  out.text("energy_report.txt", io::energy_report_table(report));
  out.text("spectrum_comparison.csv", io::spectrum_comparison_csv(spectrum_comparison(source, d)));
  out.text("components.csv", io::decomposition_csv(source, d));
  out.json_file("angles.json", angles_json(d));
}

int cmd_decompose(const std::string& path, const std::vector<std::size_t>& halfwidths, const FifOptions& options,
                  double tol, const Common& common) {
  const auto signal = io::to_signal(io::read_samples(fs::path(path)));
  spdlog::info("decomposing {} samples with {} stage(s)", signal.size(), halfwidths.size());
  const auto d = fif_decompose(signal, halfwidths, options);
  if (d.meta()) {
    for (const auto& s : d.meta()->stages) {
      if (!s.converged) {
        spdlog::warn("stage L={} stopped at max_inner={} with change ratio {}", s.halfwidth, s.inner_iterations,
                     s.achieved_delta);
      }
    }
  }
  const auto report = check_energy_conservation(signal, d, tol);
  OutputSet out(common.out_dir, {"decompose",
                                 {path},
                                 {{"halfwidths", halfwidths},
                                  {"delta", options.delta},
                                  {"max_inner", options.max_inner},
                                  {"tol", tol}}});
  out.json_file("decomposition.json", io::to_json(d, &signal));
  emit_energy(out, signal, d, report);
  out.finish();
  return 0;
}

int cmd_audit(const std::string& path, const std::optional<std::string>& signal_path, double tol, const Common& common) {
  auto file = io::decomposition_from_json(read_json(path));
  std::vector<std::string> inputs{path};
  if (signal_path) {
    file.source = io::to_signal(io::read_samples(fs::path(*signal_path)));
    inputs.push_back(*signal_path);
  }
  const Signal source = file.source ? *file.source : file.decomposition.reconstruct();
  if (!file.source) spdlog::info("no source signal given; auditing against the sum of the parts");
  const auto report = check_energy_conservation(source, file.decomposition, tol);
  OutputSet out(common.out_dir, {"audit", inputs, {{"tol", tol}}});
  emit_energy(out, source, file.decomposition, report);
  out.finish();
  return 0;
}

std::string cell_tag(std::size_t n, double p) { return "n" + std::to_string(n) + "_p" + io::format_label(p); }

int cmd_precond_bench(const std::string& config_path, const std::optional<std::string>& correction,
                      const std::optional<std::uint64_t>& seed, std::size_t workers, const Common& common) {
  auto config = bench::parse_config(read_json(config_path));
  if (correction) config.correction = *correction == "on";
  if (seed) config.seed = *seed;
  spdlog::info("benchmark: {} sizes x {} exponents on {} worker(s)", config.n_list.size(), config.p_list.size(), workers);
  const auto table = bench::run_benchmark(config, workers);
  std::cout << bench::render_markdown(table);

  io::RunManifest manifest{"precond-bench", {config_path}, bench::to_json(config)};
  manifest.seed = config.seed;
  manifest.parameters["workers"] = workers;
  OutputSet out(common.out_dir, manifest);
  out.text("table.csv", bench::render_csv(table));
  out.text("table.md", bench::render_markdown(table));
  out.text("cells.csv", bench::render_cells_csv(table));
  if (out.enabled()) {
    for (std::size_t n : config.n_list) {
      const auto t = build_toeplitz(config.symbol, n);
      for (double p : config.p_list) {
        auto c = lp_circulant_minimizer(t, p);
        if (config.correction) c = strang_type_correction(c);
        out.text("spectra/circulant_" + cell_tag(n, p) + ".csv", bench::circulant_spectrum_csv(c));
      }
    }
  }
  out.finish();
  return 0;
}

int cmd_spectrum(const ModelSymbol& symbol, std::size_t n, double p, bool correction, const std::vector<double>& grid,
                 const Common& common) {
  const auto t = build_toeplitz(symbol, n);
  auto c = lp_circulant_minimizer(t, p);
  if (correction) c = strang_type_correction(c);
  const auto s = circulant_spectrum(c);
  const double threshold = default_singularity_ratio * c.max_abs_eigenvalue();
  bool singular = false;
  for (const auto& l : s.eigenvalues) singular = singular || std::abs(l) <= threshold;

  json j{{"n", n},
         {"p", p},
         {"correction", correction},
         {"c1", n > 1 ? c.first_column()[1] : 0.0},
         {"c2", n > 2 ? c.first_column()[2] : 0.0},
         {"min_eigenvalue", s.min_real},
         {"max_eigenvalue", s.max_real},
         {"negative_count", s.negative_count},
         {"singular", singular}};
  try {
    j["p_tilde"] = select_p_tilde(t, grid);
  } catch (const none_found&) {
    j["p_tilde"] = nullptr;
  }

  OutputSet out(common.out_dir, {"spectrum",
                                 {},
                                 {{"alpha", symbol.alpha},
                                  {"beta", symbol.beta},
                                  {"gamma", symbol.gamma},
                                  {"n", n},
                                  {"p", p},
                                  {"correction", correction},
                                  {"grid", grid}}});
  out.text("circulant_spectrum.csv", bench::circulant_spectrum_csv(c));
  if (n <= max_dense_dimension && !singular && s.negative_count == 0 && c.is_symmetric()) {
    const auto report = preconditioned_spectrum_diagnostic(t, c);
    j["cluster_fraction"] = {{"0.1", report.fraction_within(0.1)}, {"0.01", report.fraction_within(0.01)}};
    out.text("preconditioned_eigenvalues.csv", bench::eigenvalues_csv(report.eigenvalues));
  }
  std::cout << j.dump(2) << '\n';
  out.json_file("spectrum.json", j);
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"L^p orthogonality, L1 Fourier energy and l^p circulant preconditioning"};
  app.set_version_flag("--version", std::string(io::tool_version));
  app.require_subcommand(1);

  Common common;
  double p = 1.0;
  double tol = default_orthogonality_tol;
  std::string f_path, g_path;

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("f", f_path, "first function (one sample per line)")->required()->check(CLI::ExistingFile);
    sub->add_option("g", g_path, "second function")->required()->check(CLI::ExistingFile);
    sub->add_option("--p", p, "exponent p >= 1")->capture_default_str();
    sub->add_option("--tol", tol, "orthogonality tolerance")->capture_default_str();
    sub->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");
  };

  auto* angle = app.add_subcommand("angle", "weak inner product, Pythagorean defect and angle");
  add_pair(angle);
  auto* ortho = app.add_subcommand("ortho", "L^p orthogonality test");
  add_pair(ortho);

  std::string signal_path;
  auto* energy = app.add_subcommand("energy", "L1 Fourier energy of a signal");
  energy->add_option("signal", signal_path, "signal file")->required()->check(CLI::ExistingFile);
  energy->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");

  std::vector<std::size_t> halfwidths;
  FifOptions fif;
  double energy_tol = default_conservation_tol;
  auto* decompose = app.add_subcommand("decompose", "spectral iterative filtering with energy report");
  decompose->add_option("signal", signal_path, "signal file")->required()->check(CLI::ExistingFile);
  decompose->add_option("--halfwidths", halfwidths, "increasing filter half-widths, e.g. 4,20")
      ->required()
      ->delimiter(',');
  decompose->add_option("--delta", fif.delta, "inner stopping threshold")->capture_default_str();
  decompose->add_option("--max-inner", fif.max_inner, "inner iteration cap")->capture_default_str();
  decompose->add_option("--tol", energy_tol, "conservation tolerance relative to E1(s)")->capture_default_str();
  decompose->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");

  std::string decomposition_path;
  std::optional<std::string> audit_signal;
  auto* audit = app.add_subcommand("audit", "energy report for an external decomposition JSON");
  audit->add_option("decomposition", decomposition_path, "JSON with components, trend, signal")
      ->required()
      ->check(CLI::ExistingFile);
  audit->add_option("--signal", audit_signal, "source signal file, overriding the JSON")->check(CLI::ExistingFile);
  audit->add_option("--tol", energy_tol, "conservation tolerance relative to E1(s)")->capture_default_str();
  audit->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");

  std::string config_path;
  std::optional<std::string> correction;
  std::optional<std::uint64_t> seed;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  auto* bench_cmd = app.add_subcommand("precond-bench", "PCG iteration tables for l^p circulant preconditioners");
  bench_cmd->add_option("--config", config_path, "benchmark JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--correction", correction, "Strang-type correction")->check(CLI::IsMember({"on", "off"}));
  bench_cmd->add_option("--seed", seed, "seed for random right-hand sides");
  bench_cmd->add_option("--workers", workers, "concurrent benchmark cells")->capture_default_str()->check(
      CLI::PositiveNumber);
  bench_cmd->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");

  ModelSymbol symbol{1, 2, 3};
  std::size_t n = 100;
  std::string spectrum_correction = "off";
  std::vector<double> grid{1, 1.4, 1.6, 1.8, 3, 5, 10};
  auto* spectrum = app.add_subcommand("spectrum", "circulant minimizer spectrum and p-tilde");
  spectrum->add_option("--alpha", symbol.alpha)->capture_default_str();
  spectrum->add_option("--beta", symbol.beta)->capture_default_str();
  spectrum->add_option("--gamma", symbol.gamma)->capture_default_str();
  spectrum->add_option("--n", n)->capture_default_str()->check(CLI::PositiveNumber);
  spectrum->add_option("--p", p, "exponent p >= 1")->capture_default_str();
  spectrum->add_option("--grid", grid, "ascending p grid for p-tilde")->delimiter(',')->capture_default_str();
  spectrum->add_option("--correction", spectrum_correction, "Strang-type correction")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  spectrum->add_option("--out-dir", common.out_dir, "write outputs and a manifest here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*angle) return cmd_angle(f_path, g_path, p, tol, common);
    if (*ortho) return cmd_ortho(f_path, g_path, p, tol, common);
    if (*energy) return cmd_energy(signal_path, common);
    if (*decompose) return cmd_decompose(signal_path, halfwidths, fif, energy_tol, common);
    if (*audit) return cmd_audit(decomposition_path, audit_signal, energy_tol, common);
    if (*bench_cmd) return cmd_precond_bench(config_path, correction, seed, workers, common);
    if (*spectrum) {
      if (symbol.alpha < 0 || symbol.beta < 0 || symbol.gamma < 0) throw invalid_argument("alpha, beta, gamma must be nonnegative");
      return cmd_spectrum(symbol, n, p, spectrum_correction == "on", grid, common);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
