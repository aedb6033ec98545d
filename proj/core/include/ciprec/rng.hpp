#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace ciprec {

/// Philox4x32-10 block cipher (Salmon et al., SC'11): maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Purpose tags that partition the counter space of one master seed.
enum class StreamTag : std::uint32_t {
  kGeneric = 0,
  kChannel = 1,
  kSymbols = 2,
  kNoise = 3,
  kCompletion = 4,
};

/// Identifies one independent stream under a master seed. Streams with
/// different ids never share a counter value, so their sequences are
/// disjoint by construction.
struct StreamId {
  StreamTag tag = StreamTag::kGeneric;
  std::uint32_t major = 0;  // e.g. channel realization index
  std::uint32_t minor = 0;  // e.g. symbol slot index

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// Counter-based generator. Block i of stream (tag, major, minor) under
/// seed s is philox4x32_10({i, tag, major, minor}, {lo32(s), hi32(s)});
/// each block yields two 64-bit outputs, low word first.
///
/// Satisfies std::uniform_random_bit_generator, but the distributions below
/// are defined here so draws are reproducible independent of the standard
/// library implementation.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, StreamId stream = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, n). Unbiased (rejection sampling).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller; the second variate of each pair is
  /// cached and returned by the next call.
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal();

  std::uint64_t seed() const { return seed_; }
  const StreamId& stream() const { return stream_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint32_t blocks_used() const { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  StreamId stream_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Mixes a master seed with two indices into a new 64-bit seed (SplitMix64
/// finalizer applied per word).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace ciprec
