#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace randboot::rng {

// Counter-addressable random stream. A stream is identified by a master seed
// plus a path of 64-bit identifiers; distinct (seed, path) pairs give
// statistically independent streams. The generator is xoshiro256** seeded by
// a keyed hash of the path, so a stream never depends on how many draws were
// taken from any other stream. All draw routines are deterministic given the
// stream identity and are identical across platforms and thread counts.
class Stream {
 public:
  Stream(std::uint64_t master_seed, std::span<const std::uint64_t> path);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();
  // Uniform on the open interval (0, 1).
  double uniform_open();
  // Unbiased uniform draw from {0, ..., bound-1}. Requires bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Standard normal via Box-Muller. The spare deviate is cached on the
  // stream, so k single draws consume exactly what one k-draw batch does.
  double normal();
  // Exponential with unit rate.
  double exponential();

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Stream derive_stream(std::uint64_t master_seed,
                     std::span<const std::uint64_t> path);

// A node in the seed tree: a master seed plus a path prefix. child(i) appends
// one identifier; stream() instantiates the stream addressed by this node.
class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t master_seed,
                         std::vector<std::uint64_t> prefix = {});

  [[nodiscard]] StreamFactory child(std::uint64_t id) const;
  [[nodiscard]] Stream stream() const;
  [[nodiscard]] Stream child_stream(std::uint64_t id) const;

  [[nodiscard]] std::uint64_t master_seed() const { return master_seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& prefix() const {
    return prefix_;
  }

 private:
  std::uint64_t master_seed_;
  std::vector<std::uint64_t> prefix_;
};

Eigen::VectorXd sample_std_normal(Stream& stream, Eigen::Index n);

// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates, unbiased).
std::vector<int> sample_uniform_permutation(Stream& stream, int n);

// Symmetric alpha-stable draws, unit scale, via the Chambers-Mallows-Stuck
// transform. alpha must lie in (0, 2]. alpha == 2 delegates to the normal
// sampler with scale sqrt(2), matching the CMS law N(0, 2) draw-for-draw
// with sample_std_normal on the same stream. alpha == 1 is exact Cauchy.
Eigen::VectorXd sample_symmetric_stable(Stream& stream, Eigen::Index n,
                                        double alpha);

}  // namespace randboot::rng
