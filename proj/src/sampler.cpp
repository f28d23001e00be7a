#include "cwvote/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "cwvote/errors.hpp"

namespace cwvote {

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  // Rejection keeps the draw exactly uniform and reproducible.
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t u = gen_();
    if (u >= threshold) return u % bound;
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t group_stream_key(const GroupSpec& group, std::size_t occurrence) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(group.N));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(group.beta));
  h = hash_combine(h, static_cast<std::uint64_t>(occurrence));
  return h;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t group_key,
                             std::uint64_t observation_index) {
  return hash_combine(hash_combine(seed, group_key), observation_index);
}

namespace {

std::vector<double> cumulative_table(const MagnetizationPmf& pmf) {
  std::vector<double> cdf(pmf.probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
    acc += pmf.probs[k];
    cdf[k] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

int draw_magnetization(const std::vector<double>& cdf, int population,
                       RngStream& stream) {
  const double u = stream.next_uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const int k = static_cast<int>(it - cdf.begin());
  return 2 * k - population;
}

// Occurrence index among groups with identical (N, beta), in declared order.
std::vector<std::size_t> occurrence_indices(const std::vector<GroupSpec>& model) {
  std::vector<std::size_t> occ(model.size(), 0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (model[j].N == model[i].N && model[j].beta == model[i].beta) {
        ++occ[i];
      }
    }
  }
  return occ;
}

void run_partitioned(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    body(0, count);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(body, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<int> sample_magnetizations(int population, double beta,
                                       std::size_t n, RngStream& stream) {
  if (n < 1) {
    throw Error(ErrorKind::Shape, "sample count must be at least 1");
  }
  const MagnetizationPmf pmf = magnetization_pmf(population, beta);
  const std::vector<double> cdf = cumulative_table(pmf);
  std::vector<int> draws(n);
  for (std::size_t t = 0; t < n; ++t) {
    draws[t] = draw_magnetization(cdf, population, stream);
  }
  return draws;
}

SampleBatch sample_configurations(const std::vector<GroupSpec>& model,
                                  std::size_t n, std::uint64_t seed,
                                  bool keep_configurations, int threads) {
  if (model.empty()) {
    throw Error(ErrorKind::Shape, "model must contain at least one group");
  }
  if (n < 1) {
    throw Error(ErrorKind::Shape, "sample count must be at least 1");
  }

  SampleBatch batch;
  batch.model = model;
  batch.n = n;
  batch.seed = seed;
  for (const GroupSpec& g : model) {
    batch.total_voters += static_cast<std::size_t>(g.N);
  }
  batch.magnetizations.assign(n * model.size(), 0);
  batch.has_configurations = keep_configurations;
  if (keep_configurations) {
    batch.configurations.assign(n * batch.total_voters, 0);
  }

  const std::vector<std::size_t> occ = occurrence_indices(model);
  std::size_t col_offset = 0;
  for (std::size_t lambda = 0; lambda < model.size(); ++lambda) {
    const GroupSpec& g = model[lambda];
    const int N = g.N;
    const MagnetizationPmf pmf = magnetization_pmf(N, g.beta);
    const std::vector<double> cdf = cumulative_table(pmf);
    const std::uint64_t gkey = group_stream_key(g, occ[lambda]);

    run_partitioned(n, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<int> positions(static_cast<std::size_t>(N));
      for (std::size_t t = begin; t < end; ++t) {
        RngStream stream(substream_seed(seed, gkey, t));
        const int s = draw_magnetization(cdf, N, stream);
        batch.magnetizations[t * model.size() + lambda] = s;
        if (!keep_configurations) continue;

        // Uniform placement of the (N+S)/2 positive votes: partial
        // Fisher-Yates selecting that many positions without replacement.
        std::iota(positions.begin(), positions.end(), 0);
        const int positives = (N + s) / 2;
        std::int8_t* row =
            batch.configurations.data() + t * batch.total_voters + col_offset;
        std::fill(row, row + N, static_cast<std::int8_t>(-1));
        for (int j = 0; j < positives; ++j) {
          const std::uint64_t pick =
              stream.next_below(static_cast<std::uint64_t>(N - j));
          std::swap(positions[static_cast<std::size_t>(j)],
                    positions[static_cast<std::size_t>(j) + pick]);
          row[positions[static_cast<std::size_t>(j)]] = 1;
        }
      }
    });
    col_offset += static_cast<std::size_t>(N);
  }
  return batch;
}

}  // namespace cwvote
