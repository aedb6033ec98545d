#pragma once

#include <span>
#include <vector>

#include "ciprec/ciprecode.hpp"
#include "ciprec/numlin.hpp"

namespace ciprec {

/// Zero-forcing precoder W = H_eff^H (H_eff H_eff^H)^{-1}, so H_eff W = I.
/// For hybrid schemes H_eff is the K x N_RF equivalent channel; for the
/// fully-digital scheme it is the K x Nt channel itself.
struct ZfPrecoder {
  CMat w;

  explicit ZfPrecoder(const CMat& h_eff);
  std::vector<cplx> apply(std::span<const cplx> symbols) const;
};

/// pinv_right(h_eff) * s. Throws RankDeficientError for rank-deficient
/// channels.
std::vector<cplx> zf_precode(const CMat& h_eff, std::span<const cplx> symbols);

/// Quantize-after-ZF on the equivalent channel.
QuantizedSignal zf_hybrid_1bit(const CMat& h_e, std::span<const cplx> symbols);

/// Unquantized hybrid ZF; the transmit chain normalizes its power.
std::vector<cplx> zf_hybrid_ideal(const CMat& h_e, std::span<const cplx> symbols);

/// Unquantized ZF over all Nt antennas (F_RF replaced by the identity).
std::vector<cplx> zf_fully_digital(const CMat& h, std::span<const cplx> symbols);

}  // namespace ciprec
