#include "ciprec/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ciprec {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" +
                                            std::string(v) + "'",
                      line);
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v, std::size_t line) {
  const std::string s(v);
  char* end = nullptr;
  errno = 0;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError(std::string(key), "expected a number, got '" + s + "'", line);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'",
                    line);
}

std::vector<Scheme> parse_schemes_at(std::string_view text, std::size_t line) {
  std::vector<Scheme> out;
  for (std::string_view item : split_list(text)) {
    const auto s = parse_scheme(item);
    if (!s) {
      throw ConfigError("schemes",
                        "unknown scheme '" + std::string(item) +
                            "' (expected ci-1bit, zf-1bit, zf-hybrid-ideal or zf-fd)",
                        line);
    }
    out.push_back(*s);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_ber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

double sweep_value(SweepMode mode, const BerRecord& r) {
  return mode == SweepMode::kBerVsRf ? static_cast<double>(r.n_rf) : r.snr_db;
}

double other_value(SweepMode mode, const BerRecord& r) {
  return mode == SweepMode::kBerVsRf ? r.snr_db : static_cast<double>(r.n_rf);
}

}  // namespace

std::string_view mode_name(SweepMode mode) {
  return mode == SweepMode::kBerVsRf ? "ber-vs-rf" : "ber-vs-snr";
}

std::optional<SweepMode> parse_mode(std::string_view name) {
  if (name == "ber-vs-snr") return SweepMode::kBerVsSnr;
  if (name == "ber-vs-rf") return SweepMode::kBerVsRf;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  config.validate();
  if (mode == SweepMode::kBerVsRf && config.n_rf_points.empty()) {
    throw ConfigError("n_rf_points", "mode ber-vs-rf requires a non-empty n_rf_points list");
  }
  if (output_path.empty()) throw ConfigError("output_path", "must not be empty");
}

std::vector<Scheme> parse_scheme_list(std::string_view text) {
  return parse_schemes_at(text, 0);
}

ExperimentSpec parse_config_text(std::string_view text) {
  ExperimentSpec spec;
  SimConfig& c = spec.config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("syntax", "expected 'key = value', got '" + std::string(line) + "'",
                        line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("syntax", "missing key before '='", line_no);
    if (value.empty()) throw ConfigError(std::string(key), "missing value", line_no);
    if (!seen.emplace(key).second) throw ConfigError(std::string(key), "repeated key", line_no);

    if (key == "mode") {
      const auto m = parse_mode(value);
      if (!m) {
        throw ConfigError("mode", "expected ber-vs-snr or ber-vs-rf, got '" + std::string(value) + "'",
                          line_no);
      }
      spec.mode = *m;
    } else if (key == "nt") {
      c.nt = parse_u64(key, value, line_no);
    } else if (key == "k") {
      c.k = parse_u64(key, value, line_no);
    } else if (key == "n_rf") {
      c.n_rf = parse_u64(key, value, line_no);
    } else if (key == "mod_order") {
      const std::uint64_t m = parse_u64(key, value, line_no);
      if (m > 1024) throw ConfigError("mod_order", "value too large", line_no);
      c.mod_order = static_cast<unsigned>(m);
    } else if (key == "snr_db_points") {
      c.snr_db_points.clear();
      for (auto item : split_list(value)) c.snr_db_points.push_back(parse_double(key, item, line_no));
    } else if (key == "n_rf_points") {
      c.n_rf_points.clear();
      for (auto item : split_list(value)) c.n_rf_points.push_back(parse_u64(key, item, line_no));
    } else if (key == "symbols_per_channel") {
      c.symbols_per_channel = parse_u64(key, value, line_no);
    } else if (key == "channel_realizations") {
      c.channel_realizations = parse_u64(key, value, line_no);
    } else if (key == "master_seed") {
      c.master_seed = parse_u64(key, value, line_no);
    } else if (key == "schemes") {
      c.schemes = parse_schemes_at(value, line_no);
    } else if (key == "output_path") {
      spec.output_path = std::string(value);
    } else if (key == "emit_plot_series") {
      spec.emit_plot_series = parse_bool(key, value, line_no);
    } else {
      throw ConfigError(std::string(key), "unknown key", line_no);
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentSpec& spec) {
  const SimConfig& c = spec.config;
  std::ostringstream out;
  auto join = [&out](const auto& items, auto fmt) {
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << fmt(items[i]);
    out << '\n';
  };
  out << "mode = " << mode_name(spec.mode) << '\n';
  out << "nt = " << c.nt << '\n';
  out << "k = " << c.k << '\n';
  out << "n_rf = " << c.n_rf << '\n';
  out << "mod_order = " << c.mod_order << '\n';
  out << "snr_db_points = ";
  join(c.snr_db_points, format_double);
  if (!c.n_rf_points.empty()) {
    out << "n_rf_points = ";
    join(c.n_rf_points, [](std::size_t v) { return std::to_string(v); });
  }
  out << "symbols_per_channel = " << c.symbols_per_channel << '\n';
  out << "channel_realizations = " << c.channel_realizations << '\n';
  out << "master_seed = " << c.master_seed << '\n';
  out << "schemes = ";
  join(c.schemes, [](Scheme s) { return std::string(scheme_name(s)); });
  out << "output_path = " << spec.output_path.string() << '\n';
  out << "emit_plot_series = " << (spec.emit_plot_series ? "true" : "false") << '\n';
  return out.str();
}

std::vector<BerRecord> sorted_for_output(const ExperimentSpec& spec,
                                         std::vector<BerRecord> records) {
  std::stable_sort(records.begin(), records.end(), [&](const BerRecord& a, const BerRecord& b) {
    const auto na = scheme_name(a.scheme), nb = scheme_name(b.scheme);
    if (na != nb) return na < nb;
    const double sa = sweep_value(spec.mode, a), sb = sweep_value(spec.mode, b);
    if (sa != sb) return sa < sb;
    return other_value(spec.mode, a) < other_value(spec.mode, b);
  });
  return records;
}

void write_csv(std::ostream& out, const ExperimentSpec& spec,
               const std::vector<BerRecord>& records) {
  const SimConfig& c = spec.config;
  out << kCsvHeader << '\n';
  for (const BerRecord& r : sorted_for_output(spec, records)) {
    out << scheme_name(r.scheme) << ',' << c.mod_order << ',' << c.nt << ',' << c.k << ','
        << r.n_rf << ',' << format_short(r.snr_db) << ',' << r.bits_total << ','
        << r.bit_errors << ',' << format_ber(r.ber) << ',' << c.master_seed << '\n';
  }
}

void write_plot_series(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<BerRecord>& records) {
  const auto sorted = sorted_for_output(spec, records);
  const bool multi_other = spec.mode == SweepMode::kBerVsRf
                               ? spec.config.snr_db_points.size() > 1
                               : spec.config.rf_sweep().size() > 1;
  std::string current;
  bool first = true;
  for (const BerRecord& r : sorted) {
    std::string label(scheme_name(r.scheme));
    if (multi_other) {
      label += spec.mode == SweepMode::kBerVsRf ? " snr_db=" + format_short(r.snr_db)
                                                : " n_rf=" + std::to_string(r.n_rf);
    }
    if (first || label != current) {
      if (!first) out << "\n\n";
      out << "# " << label << '\n';
      current = label;
      first = false;
    }
    out << format_short(sweep_value(spec.mode, r)) << ' ' << format_ber(r.ber) << '\n';
  }
}

std::filesystem::path plot_series_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".dat");
  return p;
}

std::vector<BerRecord> run_experiment(const ExperimentSpec& spec, std::size_t workers,
                                      const ProgressFn& progress) {
  spec.validate();
  // Fail on an unwritable path before spending time on the sweep.
  {
    std::ofstream probe(spec.output_path, std::ios::binary | std::ios::app);
    if (!probe) {
      throw std::runtime_error("cannot write output file '" + spec.output_path.string() + "'");
    }
  }
  std::vector<BerRecord> records = run_ber(spec.config, workers, progress);

  std::ofstream csv(spec.output_path, std::ios::binary | std::ios::trunc);
  write_csv(csv, spec, records);
  csv.flush();
  if (!csv) throw std::runtime_error("failed writing '" + spec.output_path.string() + "'");
  if (spec.emit_plot_series) {
    const auto dat_path = plot_series_path(spec.output_path);
    std::ofstream dat(dat_path, std::ios::binary | std::ios::trunc);
    write_plot_series(dat, spec, records);
    dat.flush();
    if (!dat) throw std::runtime_error("failed writing '" + dat_path.string() + "'");
  }
  return sorted_for_output(spec, std::move(records));
}

}  // namespace ciprec
