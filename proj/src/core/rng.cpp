#include "lfi/core/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace lfi {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t v) noexcept {
    std::uint64_t x = h ^ v;
    return splitmix64(x);
}

}  // namespace

Stream::Stream(const std::array<std::uint64_t, 4>& state) : s_(state) {
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is a fixed point
}

double Stream::normal() {
    boost::random::normal_distribution<double> dist;
    return dist(*this);
}

Stream derive_stream(std::uint64_t master_seed, std::span<const std::uint64_t> labels) {
    // Two independent hash lanes give a 128-bit key for the path.
    std::uint64_t lane_a = mix(0x243F6A8885A308D3ULL, master_seed);
    std::uint64_t lane_b = mix(0x13198A2E03707344ULL, ~master_seed);
    lane_a = mix(lane_a, labels.size());
    lane_b = mix(lane_b, labels.size() * 0xA4093822299F31D0ULL);
    for (const std::uint64_t label : labels) {
        lane_a = mix(lane_a, label);
        lane_b = mix(lane_b ^ 0x082EFA98EC4E6C89ULL, label);
    }
    std::uint64_t seq = lane_a ^ (lane_b << 1 | lane_b >> 63);
    std::array<std::uint64_t, 4> state{};
    state[0] = splitmix64(seq) ^ lane_b;
    state[1] = splitmix64(seq);
    state[2] = splitmix64(seq) ^ lane_a;
    state[3] = splitmix64(seq);
    return Stream(state);
}

Stream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels) {
    return derive_stream(master_seed, std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

StreamKey StreamKey::child(std::uint64_t label) const {
    auto path = path_;
    path.push_back(label);
    return StreamKey(seed_, std::move(path));
}

StreamKey StreamKey::child(std::initializer_list<std::uint64_t> labels) const {
    auto path = path_;
    path.insert(path.end(), labels.begin(), labels.end());
    return StreamKey(seed_, std::move(path));
}

}  // namespace lfi
