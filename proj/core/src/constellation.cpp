#include "ciprec/constellation.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ciprec/rng.hpp"

namespace ciprec {

void check_psk_order(unsigned order) {
  if (order < 2 || order > 256 || !std::has_single_bit(order)) {
    throw std::invalid_argument("PSK order must be a power of two in [2, 256], got " +
                                std::to_string(order));
  }
}

PskConstellation::PskConstellation(unsigned m) : order(m) {
  check_psk_order(m);
  points.reserve(m);
  for (unsigned i = 0; i < m; ++i) points.push_back(psk_point(i, m));
}

unsigned PskConstellation::bits_per_symbol() const {
  return static_cast<unsigned>(std::countr_zero(order));
}

cplx psk_point(std::size_t index, unsigned order) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(index) /
                             static_cast<double>(order));
}

ThresholdDecomposition decompose(cplx s, unsigned order) {
  check_psk_order(order);
  if (order < 4) {
    throw std::invalid_argument(
        "decompose: M=" + std::to_string(order) +
        " has coincident detection thresholds; need M >= 4");
  }
  if (std::abs(std::abs(s) - 1.0) > 1e-9) {
    throw std::invalid_argument("decompose: symbol is not on the unit-modulus "
                                "PSK alphabet (|s| = " +
                                std::to_string(std::abs(s)) + ")");
  }
  const double half = std::numbers::pi / static_cast<double>(order);
  const double c = 1.0 / (2.0 * std::cos(half));
  ThresholdDecomposition d;
  d.coefficient = c;
  d.s_a = c * s * std::polar(1.0, -half);
  d.s_b = c * s * std::polar(1.0, half);
  return d;
}

std::size_t detect(cplx y, unsigned order) {
  check_psk_order(order);
  if (y == cplx{}) return 0;
  const double two_pi = 2.0 * std::numbers::pi;
  double angle = std::arg(y);
  if (angle < 0.0) angle += two_pi;
  std::size_t best = 0;
  double best_dist = two_pi;
  for (unsigned i = 0; i < order; ++i) {
    double d = std::abs(angle - two_pi * i / order);
    d = std::min(d, two_pi - d);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

unsigned gray_bit_errors(std::size_t sent, std::size_t detected) {
  return static_cast<unsigned>(std::popcount(gray_code(sent) ^ gray_code(detected)));
}

std::vector<std::size_t> random_symbol_indices(std::size_t count, unsigned order,
                                               CounterRng& rng) {
  check_psk_order(order);
  std::vector<std::size_t> out(count);
  for (auto& i : out) i = static_cast<std::size_t>(rng.uniform_index(order));
  return out;
}

std::vector<cplx> symbols_from_indices(const std::vector<std::size_t>& indices,
                                       unsigned order) {
  std::vector<cplx> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(psk_point(i, order));
  return out;
}

std::vector<cplx> random_symbols(std::size_t count, unsigned order,
                                 std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("random_symbols: count must be >= 1");
  CounterRng rng(seed, {StreamTag::kSymbols, 0, 0});
  return symbols_from_indices(random_symbol_indices(count, order, rng), order);
}

}  // namespace ciprec
