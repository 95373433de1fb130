#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace lfi {

/// xoshiro256** generator; satisfies UniformRandomBitGenerator.
///
/// Streams are values: copy one and both copies produce the same sequence.
/// Never share a Stream between threads; derive one per task instead.
class Stream {
  public:
    using result_type = std::uint64_t;

    explicit Stream(const std::array<std::uint64_t, 4>& state);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate (Boost.Random ziggurat; platform independent).
    double normal();

    const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_;
};

/// Human-readable description of the generator and derivation scheme,
/// recorded in run metadata.
inline constexpr std::string_view kRngScheme =
    "xoshiro256** (Blackman & Vigna 2018); stream state = four SplitMix64 outputs "
    "seeded by a two-lane SplitMix64 hash of (master_seed, label path length, labels...); "
    "distributions from Boost.Random";

/// Stream for the label path under a master seed. Equal inputs give equal
/// streams; different label paths give unrelated streams.
Stream derive_stream(std::uint64_t master_seed, std::span<const std::uint64_t> labels);
Stream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels);

/// A master seed plus a label prefix. Lets an algorithm hand out
/// sub-streams to parallel tasks without holding any generator state.
class StreamKey {
  public:
    explicit StreamKey(std::uint64_t seed, std::vector<std::uint64_t> path = {})
        : seed_(seed), path_(std::move(path)) {}

    StreamKey child(std::uint64_t label) const;
    StreamKey child(std::initializer_list<std::uint64_t> labels) const;
    Stream open() const { return derive_stream(seed_, path_); }

    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::uint64_t>& path() const noexcept { return path_; }

  private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
};

}  // namespace lfi
