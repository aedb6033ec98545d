#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ciprec/analog.hpp"
#include "ciprec/channel.hpp"
#include "ciprec/numlin.hpp"

namespace ciprec {

enum class Scheme { kCiOneBit, kZfOneBit, kZfHybridIdeal, kZfFullyDigital };

inline constexpr std::array<Scheme, 4> kAllSchemes = {
    Scheme::kCiOneBit, Scheme::kZfOneBit, Scheme::kZfHybridIdeal,
    Scheme::kZfFullyDigital};

/// "ci-1bit", "zf-1bit", "zf-hybrid-ideal", "zf-fd".
std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Invalid configuration value; `field()` names the offending key and
/// `line()` is the config-file line (0 when not from a file).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

struct SimConfig {
  std::size_t nt = 128;
  std::size_t k = 4;
  std::size_t n_rf = 32;
  unsigned mod_order = 4;
  std::vector<double> snr_db_points = {-10.0, -5.0, 0.0, 5.0, 10.0};
  /// When non-empty, the RF-chain sweep; otherwise {n_rf}.
  std::vector<std::size_t> n_rf_points;
  std::size_t symbols_per_channel = 100;
  std::size_t channel_realizations = 100;
  std::uint64_t master_seed = 1;
  std::vector<Scheme> schemes = {kAllSchemes.begin(), kAllSchemes.end()};

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  std::vector<std::size_t> rf_sweep() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct BerRecord {
  Scheme scheme = Scheme::kCiOneBit;
  double snr_db = 0.0;
  std::size_t n_rf = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t symbols_total = 0;
  double ber = 0.0;

  friend bool operator==(const BerRecord&, const BerRecord&) = default;
};

struct Received {
  std::vector<cplx> y;
  double f = 0.0;  // power normalization factor ||F_RF x_BB||
};

/// y = sqrt(P) / f * H F_RF x_BB + n with f = sqrt(tr{F x x^H F^H}).
/// Throws std::invalid_argument if f == 0.
Received transmit_chain(const AnalogPrecoder& f_rf, std::span<const cplx> x_bb,
                        const ChannelRealization& channel, std::span<const cplx> noise,
                        double power);

/// Fully-digital variant: F_RF is the Nt x Nt identity.
Received transmit_chain_digital(std::span<const cplx> x, const ChannelRealization& channel,
                                std::span<const cplx> noise, double power);

/// Per-realization precomputation of H_eff = H F_RF and G = F_RF^H F_RF so a
/// slot costs O(K N_RF + N_RF^2) instead of O(Nt N_RF).
class TransmitPath {
 public:
  static TransmitPath hybrid(const ChannelRealization& channel, const AnalogPrecoder& f_rf);
  static TransmitPath fully_digital(const ChannelRealization& channel);

  const CMat& effective_channel() const { return h_eff_; }
  /// Noiseless received vector sqrt(P)/f * H_eff x; writes f.
  std::vector<cplx> noiseless(std::span<const cplx> x, double power, double& f) const;

 private:
  CMat h_eff_;
  std::optional<CMat> gram_;  // empty means identity
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Monte Carlo BER over channel realizations. Randomness is drawn from
/// counter-based streams keyed by (master_seed, realization, slot), and every
/// scheme, RF-chain count and SNR point sees the same channels, symbols and
/// unit-variance noise. Results do not depend on `workers`.
///
/// Records come out ordered by (scheme as listed in the config, n_rf, snr).
std::vector<BerRecord> run_ber(const SimConfig& config, std::size_t workers = 1,
                               const ProgressFn& progress = {});

}  // namespace ciprec
