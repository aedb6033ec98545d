#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ciprec/simulate.hpp"

namespace ciprec {

enum class SweepMode { kBerVsSnr, kBerVsRf };

std::string_view mode_name(SweepMode mode);
std::optional<SweepMode> parse_mode(std::string_view name);

struct ExperimentSpec {
  SweepMode mode = SweepMode::kBerVsSnr;
  SimConfig config;
  std::filesystem::path output_path = "ber.csv";
  bool emit_plot_series = false;

  /// Checks the config plus the mode requirement (ber-vs-rf needs
  /// n_rf_points). Throws ConfigError.
  void validate() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Config grammar, one entry per line:
///
///   # comment
///   key = value
///   list_key = v1, v2, v3
///
/// Keys: mode, nt, k, n_rf, mod_order, snr_db_points, n_rf_points,
/// symbols_per_channel, channel_realizations, master_seed, schemes,
/// output_path, emit_plot_series. Omitted keys keep their defaults. Unknown
/// or repeated keys and malformed lines are rejected with the line number.
ExperimentSpec parse_config_text(std::string_view text);
ExperimentSpec parse_config(const std::filesystem::path& path);

/// Writes every key; parse_config_text(serialize_config(s)) == s.
std::string serialize_config(const ExperimentSpec& spec);

/// Parses a comma-separated scheme list ("ci-1bit,zf-fd"). Throws ConfigError.
std::vector<Scheme> parse_scheme_list(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "scheme,mod_order,nt,k,n_rf,snr_db,bits,bit_errors,ber,seed";

/// Returns records sorted by (scheme name, sweep value, other axis).
std::vector<BerRecord> sorted_for_output(const ExperimentSpec& spec,
                                         std::vector<BerRecord> records);

void write_csv(std::ostream& out, const ExperimentSpec& spec,
               const std::vector<BerRecord>& records);

/// Whitespace-separated blocks, one per scheme, each headed by
/// "# <scheme>" and separated by two blank lines (gnuplot `index`).
/// Columns: sweep value, BER.
void write_plot_series(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<BerRecord>& records);

/// Path of the plot-series file that accompanies `csv_path`.
std::filesystem::path plot_series_path(const std::filesystem::path& csv_path);

/// Runs the sweep and writes the CSV (and plot series when enabled). Output
/// files are written only after every sweep point has completed. Throws on
/// invalid config or unwritable output.
std::vector<BerRecord> run_experiment(const ExperimentSpec& spec, std::size_t workers = 1,
                                      const ProgressFn& progress = {});

}  // namespace ciprec
