#include "ciprec/analog.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ciprec {
namespace {
constexpr double kZeroEntry = 1e-14;
}

AnalogPrecoder build_svd_precoder(const ChannelRealization& channel,
                                  std::size_t n_rf, std::uint64_t seed) {
  const std::size_t k = channel.users();
  const std::size_t nt = channel.antennas();
  if (n_rf > nt) {
    throw std::invalid_argument("build_svd_precoder: n_rf (" + std::to_string(n_rf) +
                                ") exceeds antenna count (" + std::to_string(nt) + ")");
  }
  if (n_rf < k) {
    throw std::invalid_argument("build_svd_precoder: n_rf (" + std::to_string(n_rf) +
                                ") is below the user count (" + std::to_string(k) + ")");
  }
  const ThinSvd svd = thin_svd_wide(channel.h, n_rf, seed);
  const double modulus = 1.0 / static_cast<double>(nt);

  AnalogPrecoder out{CMat(nt, n_rf)};
  for (std::size_t m = 0; m < nt; ++m) {
    for (std::size_t c = 0; c < n_rf; ++c) {
      const cplx v = svd.v(m, c);
      out.f_rf(m, c) = std::abs(v) <= kZeroEntry ? cplx(modulus, 0.0)
                                                 : std::polar(modulus, std::arg(v));
    }
  }
  return out;
}

CMat equivalent_channel(const ChannelRealization& channel,
                        const AnalogPrecoder& precoder) {
  return matmul(channel.h, precoder.f_rf);
}

}  // namespace ciprec
