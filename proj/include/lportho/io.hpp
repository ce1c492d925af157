#pragma once

// File formats: sample CSVs, decomposition and energy-report JSON, plot-ready
// spectrum CSVs, and run manifests.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lportho/banach_geometry.hpp"
#include "lportho/error.hpp"
#include "lportho/signal_decomposition.hpp"

namespace lportho::io {

using json = nlohmann::json;

inline constexpr const char* tool_version = "0.1.0";

/// 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest of the common renderings, for table labels such as p = 1.4.
inline std::string format_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct SampleFile {
  std::vector<double> values;
  std::optional<double> bandwidth;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n,");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, std::size_t line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw parse_error("line " + std::to_string(line) + ": not a finite number: '" + text + "'");
  }
  return v;
}

}  // namespace detail

/// One sample per line; '#' starts a comment line, and a `# B=<value>`
/// comment sets the bandwidth.
inline SampleFile read_samples(std::istream& in) {
  SampleFile out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = detail::trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string body = detail::trim(text.substr(1));
      if (body.rfind("B=", 0) == 0 || body.rfind("B =", 0) == 0) {
        out.bandwidth = detail::parse_number(detail::trim(body.substr(body.find('=') + 1)), line);
      }
      continue;
    }
    out.values.push_back(detail::parse_number(text, line));
  }
  return out;
}

inline SampleFile read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path.string());
  try {
    return read_samples(in);
  } catch (const parse_error& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

inline Signal to_signal(const SampleFile& f) {
  if (f.bandwidth) return Signal(f.values, *f.bandwidth);
  return Signal(f.values);
}

inline std::string samples_csv(std::span<const double> values, std::optional<double> bandwidth = std::nullopt) {
  std::ostringstream os;
  if (bandwidth) os << "# B=" << format_double(*bandwidth) << '\n';
  for (double v : values) os << format_double(v) << '\n';
  return os.str();
}

inline json to_json(const GeometryResult& r) {
  return json{{"wip", r.weak_inner_product},
              {"defect", r.defect},
              {"cot_angle", r.cot_angle},
              {"angle", r.angle},
              {"orthogonal", r.orthogonal}};
}

inline json to_json(const DecompositionMeta& m) {
  json stages = json::array();
  json counts = json::array();
  for (const auto& s : m.stages) {
    stages.push_back({{"halfwidth", s.halfwidth},
                      {"inner_iterations", s.inner_iterations},
                      {"achieved_delta", s.achieved_delta},
                      {"converged", s.converged}});
    counts.push_back(s.inner_iterations);
  }
  return json{{"halfwidths", m.halfwidths},
              {"delta", m.delta},
              {"max_inner", m.max_inner},
              {"inner_iterations", counts},
              {"stages", stages}};
}

/// {signal?, bandwidth, components, trend, meta?}
inline json to_json(const Decomposition& d, const Signal* source = nullptr) {
  json j;
  if (source) j["signal"] = std::vector<double>(source->samples().begin(), source->samples().end());
  j["bandwidth"] = d.trend().bandwidth();
  json comps = json::array();
  for (const auto& c : d.components()) comps.push_back(std::vector<double>(c.samples().begin(), c.samples().end()));
  j["components"] = comps;
  j["trend"] = std::vector<double>(d.trend().samples().begin(), d.trend().samples().end());
  if (d.meta()) j["meta"] = to_json(*d.meta());
  return j;
}

struct DecompositionFile {
  std::optional<Signal> source;
  Decomposition decomposition;
};

/// Accepts the output of `to_json(Decomposition)` or a hand-written
/// {components, trend?, signal?, bandwidth?} document for auditing.
inline DecompositionFile decomposition_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("components") || !j.at("components").is_array()) {
      throw parse_error("decomposition JSON needs a 'components' array");
    }
    std::vector<std::vector<double>> comps = j.at("components").get<std::vector<std::vector<double>>>();
    std::optional<std::vector<double>> signal;
    if (j.contains("signal")) signal = j.at("signal").get<std::vector<double>>();
    std::size_t n = 0;
    if (signal) n = signal->size();
    else if (j.contains("trend")) n = j.at("trend").size();
    else if (!comps.empty()) n = comps.front().size();
    const double bandwidth = j.contains("bandwidth") ? j.at("bandwidth").get<double>() : static_cast<double>(n) / 2.0;
    std::vector<double> trend = j.contains("trend") ? j.at("trend").get<std::vector<double>>() : std::vector<double>(n, 0.0);

    std::vector<Signal> components;
    for (auto& c : comps) components.emplace_back(std::move(c), bandwidth);
    std::optional<Signal> source;
    if (signal) source.emplace(std::move(*signal), bandwidth);
    std::optional<DecompositionMeta> meta;
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      DecompositionMeta dm;
      dm.halfwidths = m.value("halfwidths", std::vector<std::size_t>{});
      dm.delta = m.value("delta", 0.0);
      dm.max_inner = m.value("max_inner", std::size_t{0});
      for (const auto& s : m.value("stages", json::array())) {
        dm.stages.push_back({s.value("halfwidth", std::size_t{0}), s.value("inner_iterations", std::size_t{0}),
                             s.value("achieved_delta", 0.0), s.value("converged", true)});
      }
      meta = std::move(dm);
    }
    return {std::move(source), Decomposition(std::move(components), Signal(std::move(trend), bandwidth), meta)};
  } catch (const json::exception& e) {
    throw parse_error(std::string("malformed decomposition JSON: ") + e.what());
  }
}

inline json to_json(const EnergyReport& r) {
  json unwanted = json::array();
  for (const auto& u : r.unwanted_frequencies) unwanted.push_back({{"xi", u.frequency_index}, {"excess", u.excess}});
  return json{{"total_energy", r.total_energy},
              {"component_energies", r.component_energies},
              {"conservation_gap", r.conservation_gap},
              {"conserved", r.conserved},
              {"unwanted_frequencies", unwanted}};
}

inline std::string energy_report_table(const EnergyReport& r) {
  std::ostringstream os;
  os << "L1 Fourier energy report\n";
  os << "  signal E1            " << format_double(r.total_energy) << '\n';
  for (std::size_t k = 0; k < r.component_energies.size(); ++k) {
    const bool trend = k + 1 == r.component_energies.size();
    std::string label = trend ? "trend" : "component " + std::to_string(k + 1);
    label.resize(20, ' ');
    os << "  " << label << " " << format_double(r.component_energies[k]) << '\n';
  }
  os << "  conservation gap     " << format_double(r.conservation_gap) << '\n';
  os << "  conserved            " << (r.conserved ? "true" : "false") << '\n';
  os << "  unwanted oscillations ";
  if (r.unwanted_frequencies.empty()) {
    os << "none\n";
  } else {
    os << r.unwanted_frequencies.size() << '\n';
    for (const auto& u : r.unwanted_frequencies) {
      os << "    xi = " << u.frequency_index << "  excess " << format_double(u.excess) << '\n';
    }
  }
  return os.str();
}

/// xi, |s^|, sum_k |phi^_k|, difference, then one column per part.
inline std::string spectrum_comparison_csv(const std::vector<SpectrumComparisonRow>& rows) {
  std::ostringstream os;
  os << "xi,signal_abs,components_abs_sum,difference";
  const std::size_t parts = rows.empty() ? 0 : rows.front().part_magnitudes.size();
  for (std::size_t k = 0; k < parts; ++k) os << (k + 1 == parts ? ",trend_abs" : ",imf" + std::to_string(k + 1) + "_abs");
  os << '\n';
  for (const auto& r : rows) {
    os << r.frequency_index << ',' << format_double(r.signal_magnitude) << ',' << format_double(r.component_sum) << ','
       << format_double(r.difference);
    for (double m : r.part_magnitudes) os << ',' << format_double(m);
    os << '\n';
  }
  return os.str();
}

/// j, t_j, s_j, one column per component, trend.
inline std::string decomposition_csv(const Signal& source, const Decomposition& d) {
  std::ostringstream os;
  os << "j,t,signal";
  for (std::size_t k = 0; k < d.components().size(); ++k) os << ",imf" << k + 1;
  os << ",trend\n";
  for (std::size_t j = 0; j < source.size(); ++j) {
    os << j << ',' << format_double(source.time(j)) << ',' << format_double(source[j]);
    for (const auto& c : d.components()) os << ',' << format_double(c[j]);
    os << ',' << format_double(d.trend()[j]) << '\n';
  }
  return os.str();
}

/// Provenance record written next to every set of outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::string output_directory;
  std::vector<std::string> outputs;
  std::string version = tool_version;

  json to_json() const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream ts;
    ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return json{{"command", command},
                {"inputs", inputs},
                {"parameters", parameters},
                {"seed", seed ? json(*seed) : json(nullptr)},
                {"output_directory", output_directory},
                {"outputs", outputs},
                {"tool_version", version},
                {"timestamp", ts.str()}};
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace lportho::io
