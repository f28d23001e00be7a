#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwvote/estimator.hpp"
#include "cwvote/ldp.hpp"
#include "cwvote/sampler.hpp"
#include "cwvote/voting.hpp"

namespace cwvote::io {

// Votes CSV: one observation per row, group-major column order, entries
// exactly -1 or 1 (no 0/1 alias), optional leading header "# sizes=5,7".
struct VotesFile {
  VoteMatrix votes;
  std::vector<int> sizes;  // empty when the file carries no header and none given
};

std::string format_votes_csv(const SampleBatch& batch);
VotesFile parse_votes_csv(const std::string& text,
                          const std::vector<int>& expected_sizes);
VotesFile read_votes_csv(const std::string& path,
                         const std::vector<int>& expected_sizes);

// Summary JSON: {"n": int, "groups": [{"N": int, "T": float}, ...]} plus
// version/seed metadata on output.
std::string format_summary_json(const SufficientSummary& summary,
                                std::optional<std::uint64_t> seed);
SufficientSummary parse_summary_json(const std::string& text);
SufficientSummary read_summary_json(const std::string& path);

std::string format_report_json(const EstimateReport& report);
EstimateReport parse_report_json(const std::string& text);
EstimateReport read_report_json(const std::string& path);

std::string format_weights_json(const WeightReport& report,
                                std::optional<long> n);
std::string format_bound_json(const TailBound& bound);

// (beta, theta_N, Var S^2, E|S|) rows for plotting.
std::string format_moments_csv(int population,
                               const std::vector<double>& beta_grid);

// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace cwvote::io
