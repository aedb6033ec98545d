#pragma once

#include <cstddef>
#include <vector>

#include "ciprec/numlin.hpp"
#include "ciprec/rng.hpp"

namespace ciprec {

/// K x Nt flat-fading Rayleigh channel; entries CN(0, 1).
struct ChannelRealization {
  CMat h;

  std::size_t users() const { return h.rows(); }
  std::size_t antennas() const { return h.cols(); }
};

struct NoiseModel {
  double variance = 1.0;  // sigma^2, linear

  explicit NoiseModel(double variance);
  /// sigma^2 = 10^(-snr_db / 10) for unit transmit power.
  static NoiseModel from_snr_db(double snr_db);
};

/// Entries (g1 + j g2) / sqrt(2) with g1, g2 standard normal, row-major draw
/// order.
ChannelRealization draw_channel(std::size_t users, std::size_t antennas,
                                CounterRng& rng);

/// i.i.d. CN(0, variance) entries. Throws for variance <= 0.
std::vector<cplx> draw_noise(std::size_t users, double variance, CounterRng& rng);

}  // namespace ciprec
