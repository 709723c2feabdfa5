#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace berry {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is addressed by (key, stream, domain): the 64-bit key is the master
/// seed, the 64-bit stream id selects an independent substream, and the domain
/// separates unrelated uses (noise vs. readout) of the same stream id. Output
/// depends only on that address and the draw index, never on which thread
/// draws it.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream, std::uint32_t domain = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// The raw bijection, exposed for known-answer tests.
  static Block encrypt(Block counter, Key key);

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  unsigned next_ = 4;
};

enum class StreamDomain : std::uint32_t { noise = 0, readout = 1 };

/// Uniform and normal variates on top of Philox4x32.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id,
               StreamDomain domain = StreamDomain::noise)
      : engine_(master_seed, stream_id, static_cast<std::uint32_t>(domain)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

  Philox4x32& engine() { return engine_; }

 private:
  Philox4x32 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace berry
