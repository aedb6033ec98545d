#include "ciprec/baseline.hpp"

namespace ciprec {

ZfPrecoder::ZfPrecoder(const CMat& h_eff) : w(pinv_right(h_eff)) {}

std::vector<cplx> ZfPrecoder::apply(std::span<const cplx> symbols) const {
  return matvec(w, symbols);
}

std::vector<cplx> zf_precode(const CMat& h_eff, std::span<const cplx> symbols) {
  return ZfPrecoder(h_eff).apply(symbols);
}

QuantizedSignal zf_hybrid_1bit(const CMat& h_e, std::span<const cplx> symbols) {
  return quantize_one_bit(zf_precode(h_e, symbols));
}

std::vector<cplx> zf_hybrid_ideal(const CMat& h_e, std::span<const cplx> symbols) {
  return zf_precode(h_e, symbols);
}

std::vector<cplx> zf_fully_digital(const CMat& h, std::span<const cplx> symbols) {
  return zf_precode(h, symbols);
}

}  // namespace ciprec
