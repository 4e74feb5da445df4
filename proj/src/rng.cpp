#include "randboot/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randboot::rng {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Keyed hash of (master_seed, path) into a 256-bit generator state. Each of
// the four lanes absorbs the path length, every element, and its position
// under a distinct lane tag, so distinct paths (including prefixes such as
// [m] vs [m, 0]) map to unrelated states.
std::array<std::uint64_t, 4> derive_state(
    std::uint64_t master_seed, std::span<const std::uint64_t> path) {
  constexpr std::array<std::uint64_t, 4> lane_tag = {
      0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
      0x082efa98ec4e6c89ULL};
  std::array<std::uint64_t, 4> state{};
  for (int lane = 0; lane < 4; ++lane) {
    std::uint64_t x = mix64(master_seed + kGolden + lane_tag[lane]);
    x = mix64(x ^ mix64(static_cast<std::uint64_t>(path.size()) +
                        lane_tag[lane]));
    std::uint64_t pos = 0;
    for (std::uint64_t elem : path) {
      ++pos;
      x = mix64(x ^ mix64(elem + pos * kGolden + lane_tag[lane]));
    }
    state[lane] = x;
  }
  if ((state[0] | state[1] | state[2] | state[3]) == 0) state[0] = kGolden;
  return state;
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Stream::Stream(std::uint64_t master_seed, std::span<const std::uint64_t> path)
    : state_(derive_state(master_seed, path)) {}

std::uint64_t Stream::next_u64() {
  // xoshiro256** step.
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Stream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Stream::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Stream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be >= 1");
  // Lemire's multiply-shift rejection; exactly uniform.
  using u128 = unsigned __int128;
  std::uint64_t x = next_u64();
  u128 m = static_cast<u128>(x) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t threshold = (-bound) % bound;
    while (lo < threshold) {
      x = next_u64();
      m = static_cast<u128>(x) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform01();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double Stream::exponential() { return -std::log(uniform_pos()); }

Stream derive_stream(std::uint64_t master_seed,
                     std::span<const std::uint64_t> path) {
  return Stream(master_seed, path);
}

StreamFactory::StreamFactory(std::uint64_t master_seed,
                             std::vector<std::uint64_t> prefix)
    : master_seed_(master_seed), prefix_(std::move(prefix)) {}

StreamFactory StreamFactory::child(std::uint64_t id) const {
  std::vector<std::uint64_t> next = prefix_;
  next.push_back(id);
  return StreamFactory(master_seed_, std::move(next));
}

Stream StreamFactory::stream() const { return Stream(master_seed_, prefix_); }

Stream StreamFactory::child_stream(std::uint64_t id) const {
  return child(id).stream();
}

Eigen::VectorXd sample_std_normal(Stream& stream, Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = stream.normal();
  return out;
}

std::vector<int> sample_uniform_permutation(Stream& stream, int n) {
  if (n < 0) throw std::invalid_argument("sample_uniform_permutation: n < 0");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(
        stream.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

Eigen::VectorXd sample_symmetric_stable(Stream& stream, Eigen::Index n,
                                        double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument(
        "sample_symmetric_stable: alpha must lie in (0, 2]");
  }
  if (alpha == 2.0) {
    return std::numbers::sqrt2 * sample_std_normal(stream, n);
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = std::numbers::pi * (stream.uniform_open() - 0.5);
    const double w = stream.exponential();
    if (alpha == 1.0) {
      out[i] = std::tan(v);
      continue;
    }
    const double av = alpha * v;
    out[i] = std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
             std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
  }
  return out;
}

}  // namespace randboot::rng
