#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ciprec/numlin.hpp"

namespace ciprec {

class CounterRng;

/// Unit-modulus M-PSK alphabet with point i at angle 2*pi*i/M.
struct PskConstellation {
  unsigned order = 4;
  std::vector<cplx> points;

  explicit PskConstellation(unsigned order);
  unsigned bits_per_symbol() const;
};

/// Throws std::invalid_argument unless M is a power of two in [2, 256].
void check_psk_order(unsigned order);

cplx psk_point(std::size_t index, unsigned order);

/// s = s_a + s_b with s_a along the clockwise detection threshold
/// (angle theta - pi/M) and s_b along the counter-clockwise one
/// (theta + pi/M). Both components have length `coefficient`.
struct ThresholdDecomposition {
  cplx s_a;
  cplx s_b;
  double coefficient = 0.0;  // 1 / (2 cos(pi/M))
};

/// Splits a unit-modulus symbol along its two M-PSK detection thresholds.
/// Throws for M < 4 (the thresholds coincide) or |s| != 1.
ThresholdDecomposition decompose(cplx s, unsigned order);

/// Nearest-angle M-PSK detection. On an exact sector boundary the lower
/// index wins; y = 0 maps to index 0.
std::size_t detect(cplx y, unsigned order);

inline unsigned gray_code(std::size_t index) {
  return static_cast<unsigned>(index ^ (index >> 1));
}

/// Number of differing bits between the Gray labels of two symbol indices.
unsigned gray_bit_errors(std::size_t sent, std::size_t detected);

std::vector<std::size_t> random_symbol_indices(std::size_t count, unsigned order,
                                               CounterRng& rng);
std::vector<cplx> symbols_from_indices(const std::vector<std::size_t>& indices,
                                       unsigned order);

/// Uniform i.i.d. M-PSK symbols; identical for identical seeds.
std::vector<cplx> random_symbols(std::size_t count, unsigned order,
                                 std::uint64_t seed);

}  // namespace ciprec
