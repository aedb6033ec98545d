#include "ciprec/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "ciprec/baseline.hpp"
#include "ciprec/ciprecode.hpp"
#include "ciprec/constellation.hpp"
#include "ciprec/rng.hpp"

namespace ciprec {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCiOneBit: return "ci-1bit";
    case Scheme::kZfOneBit: return "zf-1bit";
    case Scheme::kZfHybridIdeal: return "zf-hybrid-ideal";
    case Scheme::kZfFullyDigital: return "zf-fd";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& message, std::size_t line)
    : std::invalid_argument((line ? "line " + std::to_string(line) + ": " : std::string()) +
                            field + ": " + message),
      field_(std::move(field)),
      line_(line) {}

void SimConfig::validate() const {
  if (k < 1) throw ConfigError("k", "need at least one user");
  if (nt < 1) throw ConfigError("nt", "need at least one antenna");
  for (std::size_t rf : rf_sweep()) {
    const std::string field = n_rf_points.empty() ? "n_rf" : "n_rf_points";
    if (rf > nt) {
      throw ConfigError(field, "violates nt >= n_rf (n_rf = " + std::to_string(rf) +
                                   ", nt = " + std::to_string(nt) + ")");
    }
    if (rf < k) {
      throw ConfigError(field, "violates n_rf >= k (n_rf = " + std::to_string(rf) +
                                   ", k = " + std::to_string(k) + ")");
    }
  }
  if (mod_order < 4 || mod_order > 256 || (mod_order & (mod_order - 1)) != 0) {
    throw ConfigError("mod_order", "must be a power of two >= 4 (4 = QPSK, 8 = 8PSK)");
  }
  if (snr_db_points.empty()) throw ConfigError("snr_db_points", "list must not be empty");
  for (double s : snr_db_points)
    if (!std::isfinite(s)) throw ConfigError("snr_db_points", "values must be finite");
  if (symbols_per_channel < 1) throw ConfigError("symbols_per_channel", "must be positive");
  if (channel_realizations < 1) throw ConfigError("channel_realizations", "must be positive");
  if (channel_realizations > 0xFFFFFFFFull || symbols_per_channel > 0xFFFFFFFFull) {
    throw ConfigError("channel_realizations", "realization and slot counts must fit in 32 bits");
  }
  if (schemes.empty()) throw ConfigError("schemes", "list must not be empty");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) {
    throw ConfigError("schemes", "duplicate scheme");
  }
  if (std::set<std::size_t>(n_rf_points.begin(), n_rf_points.end()).size() != n_rf_points.size()) {
    throw ConfigError("n_rf_points", "duplicate value");
  }
  if (std::set<double>(snr_db_points.begin(), snr_db_points.end()).size() != snr_db_points.size()) {
    throw ConfigError("snr_db_points", "duplicate value");
  }
}

std::vector<std::size_t> SimConfig::rf_sweep() const {
  if (n_rf_points.empty()) return {n_rf};
  return n_rf_points;
}

Received transmit_chain(const AnalogPrecoder& f_rf, std::span<const cplx> x_bb,
                        const ChannelRealization& channel, std::span<const cplx> noise,
                        double power) {
  if (noise.size() != channel.users()) {
    throw std::invalid_argument("transmit_chain: noise length does not match user count");
  }
  const std::vector<cplx> x_analog = matvec(f_rf.f_rf, x_bb);
  Received out;
  out.f = vector_norm(x_analog);
  if (!(out.f > 0.0)) {
    throw std::invalid_argument("transmit_chain: power normalization factor is zero");
  }
  out.y = matvec(channel.h, x_analog);
  const double scale = std::sqrt(power) / out.f;
  for (std::size_t k = 0; k < out.y.size(); ++k) out.y[k] = scale * out.y[k] + noise[k];
  return out;
}

Received transmit_chain_digital(std::span<const cplx> x, const ChannelRealization& channel,
                                std::span<const cplx> noise, double power) {
  if (noise.size() != channel.users()) {
    throw std::invalid_argument("transmit_chain_digital: noise length does not match user count");
  }
  Received out;
  out.f = vector_norm(x);
  if (!(out.f > 0.0)) {
    throw std::invalid_argument("transmit_chain_digital: power normalization factor is zero");
  }
  out.y = matvec(channel.h, x);
  const double scale = std::sqrt(power) / out.f;
  for (std::size_t k = 0; k < out.y.size(); ++k) out.y[k] = scale * out.y[k] + noise[k];
  return out;
}

TransmitPath TransmitPath::hybrid(const ChannelRealization& channel,
                                  const AnalogPrecoder& f_rf) {
  TransmitPath p;
  p.h_eff_ = equivalent_channel(channel, f_rf);
  p.gram_ = matmul(adjoint(f_rf.f_rf), f_rf.f_rf);
  return p;
}

TransmitPath TransmitPath::fully_digital(const ChannelRealization& channel) {
  TransmitPath p;
  p.h_eff_ = channel.h;
  return p;
}

std::vector<cplx> TransmitPath::noiseless(std::span<const cplx> x, double power,
                                          double& f) const {
  double f2 = 0.0;
  if (gram_) {
    const CMat& g = *gram_;
    for (std::size_t i = 0; i < x.size(); ++i) {
      cplx gx{};
      auto row = g.row(i);
      for (std::size_t j = 0; j < x.size(); ++j) gx += row[j] * x[j];
      f2 += (std::conj(x[i]) * gx).real();
    }
  } else {
    for (const cplx& v : x) f2 += std::norm(v);
  }
  f = std::sqrt(std::max(f2, 0.0));
  if (!(f > 0.0)) throw std::invalid_argument("transmit: power normalization factor is zero");
  std::vector<cplx> y = matvec(h_eff_, x);
  const double scale = std::sqrt(power) / f;
  for (cplx& v : y) v *= scale;
  return y;
}

namespace {

struct Counts {
  std::uint64_t bit_errors = 0;
  std::uint64_t symbol_errors = 0;
};

// Layout [scheme][rf][snr].
class CountTable {
 public:
  CountTable(std::size_t schemes, std::size_t rfs, std::size_t snrs)
      : rfs_(rfs), snrs_(snrs), cells_(schemes * rfs * snrs) {}
  Counts& at(std::size_t s, std::size_t r, std::size_t n) {
    return cells_[(s * rfs_ + r) * snrs_ + n];
  }
  void add(const CountTable& o) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      cells_[i].bit_errors += o.cells_[i].bit_errors;
      cells_[i].symbol_errors += o.cells_[i].symbol_errors;
    }
  }

 private:
  std::size_t rfs_, snrs_;
  std::vector<Counts> cells_;
};

constexpr double kTransmitPower = 1.0;

void simulate_realization(const SimConfig& cfg, std::uint32_t r, CountTable& table) {
  const std::vector<std::size_t> rfs = cfg.rf_sweep();
  const std::size_t num_snr = cfg.snr_db_points.size();
  std::vector<double> sigma(num_snr);
  for (std::size_t i = 0; i < num_snr; ++i)
    sigma[i] = std::sqrt(NoiseModel::from_snr_db(cfg.snr_db_points[i]).variance);

  const bool need_fd = std::find(cfg.schemes.begin(), cfg.schemes.end(),
                                 Scheme::kZfFullyDigital) != cfg.schemes.end();
  const bool need_zf = std::any_of(cfg.schemes.begin(), cfg.schemes.end(), [](Scheme s) {
    return s == Scheme::kZfOneBit || s == Scheme::kZfHybridIdeal;
  });

  CounterRng channel_rng(cfg.master_seed, {StreamTag::kChannel, r, 0});
  const ChannelRealization channel = draw_channel(cfg.k, cfg.nt, channel_rng);

  std::optional<TransmitPath> fd_path;
  std::optional<ZfPrecoder> fd_zf;
  if (need_fd) {
    fd_path = TransmitPath::fully_digital(channel);
    fd_zf.emplace(channel.h);
  }
  std::vector<TransmitPath> paths;
  std::vector<std::optional<ZfPrecoder>> hybrid_zf(rfs.size());
  for (std::size_t ri = 0; ri < rfs.size(); ++ri) {
    const AnalogPrecoder f_rf =
        build_svd_precoder(channel, rfs[ri], derive_seed(cfg.master_seed, r, rfs[ri]));
    paths.push_back(TransmitPath::hybrid(channel, f_rf));
    if (need_zf) hybrid_zf[ri].emplace(paths.back().effective_channel());
  }

  std::vector<cplx> x, clean;
  for (std::uint32_t slot = 0; slot < cfg.symbols_per_channel; ++slot) {
    CounterRng symbol_rng(cfg.master_seed, {StreamTag::kSymbols, r, slot});
    CounterRng noise_rng(cfg.master_seed, {StreamTag::kNoise, r, slot});
    const std::vector<std::size_t> sent = random_symbol_indices(cfg.k, cfg.mod_order, symbol_rng);
    const std::vector<cplx> symbols = symbols_from_indices(sent, cfg.mod_order);
    const std::vector<cplx> unit_noise = draw_noise(cfg.k, 1.0, noise_rng);

    for (std::size_t ri = 0; ri < rfs.size(); ++ri) {
      for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
        const Scheme scheme = cfg.schemes[si];
        const TransmitPath* path = &paths[ri];
        switch (scheme) {
          case Scheme::kCiOneBit:
            x = ci_precode_one_bit(path->effective_channel(), symbols, cfg.mod_order).x_bb;
            break;
          case Scheme::kZfOneBit:
            x = quantize_one_bit(hybrid_zf[ri]->apply(symbols)).x_bb;
            break;
          case Scheme::kZfHybridIdeal:
            x = hybrid_zf[ri]->apply(symbols);
            break;
          case Scheme::kZfFullyDigital:
            x = fd_zf->apply(symbols);
            path = &*fd_path;
            break;
        }
        double f = 0.0;
        clean = path->noiseless(x, kTransmitPower, f);
        for (std::size_t ni = 0; ni < num_snr; ++ni) {
          Counts& c = table.at(si, ri, ni);
          for (std::size_t k = 0; k < cfg.k; ++k) {
            const std::size_t got = detect(clean[k] + sigma[ni] * unit_noise[k], cfg.mod_order);
            if (got != sent[k]) {
              ++c.symbol_errors;
              c.bit_errors += gray_bit_errors(sent[k], got);
            }
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<BerRecord> run_ber(const SimConfig& cfg, std::size_t workers,
                               const ProgressFn& progress) {
  cfg.validate();
  const std::vector<std::size_t> rfs = cfg.rf_sweep();
  const std::size_t total = cfg.channel_realizations;
  const std::size_t num_schemes = cfg.schemes.size();
  const std::size_t num_snr = cfg.snr_db_points.size();
  workers = std::clamp<std::size_t>(workers, 1, total);

  std::vector<CountTable> partial(workers, CountTable(num_schemes, rfs.size(), num_snr));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&](std::size_t w) {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= total) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        simulate_realization(cfg, static_cast<std::uint32_t>(r), partial[w]);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failure) {
          failure = std::make_exception_ptr(std::runtime_error(
              "channel realization " + std::to_string(r) + ": " + e.what()));
        }
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(mu);
        progress(d, total);
      }
    }
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  CountTable sum(num_schemes, rfs.size(), num_snr);
  for (const auto& p : partial) sum.add(p);

  const unsigned bits_per_symbol = PskConstellation(cfg.mod_order).bits_per_symbol();
  const std::uint64_t symbols_total =
      static_cast<std::uint64_t>(total) * cfg.symbols_per_channel * cfg.k;
  std::vector<BerRecord> out;
  for (std::size_t si = 0; si < num_schemes; ++si) {
    for (std::size_t ri = 0; ri < rfs.size(); ++ri) {
      for (std::size_t ni = 0; ni < num_snr; ++ni) {
        const Counts& c = sum.at(si, ri, ni);
        BerRecord rec;
        rec.scheme = cfg.schemes[si];
        rec.snr_db = cfg.snr_db_points[ni];
        rec.n_rf = rfs[ri];
        rec.bit_errors = c.bit_errors;
        rec.symbol_errors = c.symbol_errors;
        rec.symbols_total = symbols_total;
        rec.bits_total = symbols_total * bits_per_symbol;
        rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_total);
        out.push_back(rec);
      }
    }
  }
  return out;
}

}  // namespace ciprec
