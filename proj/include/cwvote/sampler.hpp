#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cwvote/model.hpp"

namespace cwvote {

// Deterministic stream of uniforms. The generator (mt19937_64, pinned by the
// standard) and the double conversion (top 53 bits / 2^53) are part of the
// versioned reproducibility contract.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double next_uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform in [0, bound) via rejection; bound >= 1.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
};

// 64-bit mix (splitmix64 finalizer) used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

// Substream seed for one group/observation cell. The group key hashes the
// group's (N, beta) and its occurrence index among identical groups, so a
// group keeps its stream when the model list is reordered, while identical
// groups still draw independently.
std::uint64_t group_stream_key(const GroupSpec& group, std::size_t occurrence);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t group_key,
                             std::uint64_t observation_index);

struct SampleBatch {
  std::vector<GroupSpec> model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t total_voters = 0;

  // n x M, row-major: magnetization of group lambda in observation t.
  std::vector<int> magnetizations;
  // n x total_voters, row-major, group-major columns; empty when not kept.
  std::vector<std::int8_t> configurations;
  bool has_configurations = false;

  int magnetization(std::size_t t, std::size_t lambda) const {
    return magnetizations[t * model.size() + lambda];
  }
  const std::int8_t* configuration_row(std::size_t t) const {
    return configurations.data() + t * total_voters;
  }
};

// n i.i.d. draws from magnetization_pmf(N, beta) by inverse CDF with binary
// search over the precomputed cumulative table.
std::vector<int> sample_magnetizations(int population, double beta,
                                       std::size_t n, RngStream& stream);

// Exact two-stage sampling: draw S per group and observation from its
// magnetization law, then place (N+S)/2 positive votes uniformly without
// replacement. Every (group, observation) cell runs on its own substream, so
// output is independent of scheduling; threads <= 1 means serial.
SampleBatch sample_configurations(const std::vector<GroupSpec>& model,
                                  std::size_t n, std::uint64_t seed,
                                  bool keep_configurations = true,
                                  int threads = 1);

}  // namespace cwvote
