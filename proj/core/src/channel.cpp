#include "ciprec/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ciprec {

NoiseModel::NoiseModel(double v) : variance(v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("noise variance must be positive and finite, got " +
                                std::to_string(v));
  }
}

NoiseModel NoiseModel::from_snr_db(double snr_db) {
  return NoiseModel(std::pow(10.0, -snr_db / 10.0));
}

ChannelRealization draw_channel(std::size_t users, std::size_t antennas,
                                CounterRng& rng) {
  if (users == 0) throw std::invalid_argument("draw_channel: need at least one user");
  if (antennas < users) {
    throw std::invalid_argument("draw_channel: antennas (" + std::to_string(antennas) +
                                ") < users (" + std::to_string(users) + ")");
  }
  ChannelRealization out{CMat(users, antennas)};
  for (cplx& x : out.h.data()) x = rng.complex_normal();
  return out;
}

std::vector<cplx> draw_noise(std::size_t users, double variance, CounterRng& rng) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("draw_noise: variance must be positive, got " +
                                std::to_string(variance));
  }
  const double scale = std::sqrt(variance);
  std::vector<cplx> n(users);
  for (cplx& x : n) x = scale * rng.complex_normal();
  return n;
}

}  // namespace ciprec
