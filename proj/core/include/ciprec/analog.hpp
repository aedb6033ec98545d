#pragma once

#include <cstddef>
#include <cstdint>

#include "ciprec/channel.hpp"
#include "ciprec/numlin.hpp"

namespace ciprec {

/// Nt x N_RF phase-shifter network; every entry has modulus 1/Nt.
struct AnalogPrecoder {
  CMat f_rf;

  std::size_t antennas() const { return f_rf.rows(); }
  std::size_t rf_chains() const { return f_rf.cols(); }
};

/// F_RF(m, k) = exp(j * arg(v_k(m))) / Nt, with v_k the k-th right singular
/// vector of H (orthonormal completion from `seed` past rank K). Entries of
/// v_k that are numerically zero get phase 0.
AnalogPrecoder build_svd_precoder(const ChannelRealization& channel,
                                  std::size_t n_rf, std::uint64_t seed);

/// H_e = H * F_RF, the K x N_RF user-to-RF-chain channel.
CMat equivalent_channel(const ChannelRealization& channel,
                        const AnalogPrecoder& precoder);

}  // namespace ciprec
