// cwvote: batch front-end for the multi-group Curie-Weiss voting library.
//
// Subcommands: sample, estimate, weights, bounds, moments, oracle.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric
// precondition violation.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwvote/estimator.hpp"
#include "cwvote/io.hpp"
#include "cwvote/ldp.hpp"
#include "cwvote/model.hpp"
#include "cwvote/oracle.hpp"
#include "cwvote/sampler.hpp"
#include "cwvote/version.hpp"
#include "cwvote/voting.hpp"

namespace {

using namespace cwvote;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::MalformedData:
    case ErrorKind::Shape:
    case ErrorKind::Io:
      return 3;
    default:
      return 4;
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) values.push_back(std::stoi(token));
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) values.push_back(std::stod(token));
  return values;
}

// start:stop:step with both endpoints inclusive (within 1e-12 of the last
// grid point).
std::vector<double> parse_beta_grid(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0 || stop < start) {
    throw CLI::ValidationError("--beta-grid expects start:stop:step");
  }
  std::vector<double> grid;
  const long count = std::lround(std::floor((stop - start) / step + 1e-12));
  for (long i = 0; i <= count; ++i) {
    grid.push_back(start + static_cast<double>(i) * step);
  }
  if (std::fabs(grid.back() - stop) <= 1e-12 * std::max(1.0, std::fabs(stop))) {
    grid.back() = stop;
  }
  return grid;
}

ExtendedCoupling parse_extended(const std::string& token) {
  if (token == "inf" || token == "+inf") return ExtendedCoupling::pos_infinity();
  if (token == "-inf") return ExtendedCoupling::neg_infinity();
  return ExtendedCoupling::finite(std::stod(token));
}

std::vector<ExtendedInterval> parse_intervals(const std::string& text) {
  std::vector<ExtendedInterval> intervals;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--set expects lo:hi[,lo:hi...]");
    }
    intervals.push_back(ExtendedInterval{
        parse_extended(token.substr(0, colon)),
        parse_extended(token.substr(colon + 1))});
  }
  return intervals;
}

std::vector<GroupSpec> build_model(const std::vector<int>& sizes,
                                   const std::vector<double>& betas) {
  if (sizes.size() != betas.size()) {
    throw Error(ErrorKind::Shape,
                "--sizes and --beta must list the same number of groups");
  }
  std::vector<GroupSpec> model;
  model.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    model.emplace_back(sizes[i], betas[i]);
  }
  return model;
}

int threads_from_env() {
  if (const char* env = std::getenv("CW_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

VoteMatrix batch_to_matrix(const SampleBatch& batch) {
  VoteMatrix m;
  m.rows = batch.n;
  m.cols = batch.total_voters;
  m.entries = batch.configurations;
  return m;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    io::atomic_write(out_path, content);
  }
}

int run_sample(const std::string& sizes_arg, const std::string& beta_arg,
               long n, std::uint64_t seed, const std::string& out) {
  const auto model = build_model(parse_int_list(sizes_arg),
                                 parse_double_list(beta_arg));
  const SampleBatch batch = sample_configurations(
      model, static_cast<std::size_t>(n), seed, true, threads_from_env());
  io::atomic_write(out, io::format_votes_csv(batch));

  std::vector<int> sizes;
  for (const auto& g : model) sizes.push_back(g.N);
  const SufficientSummary summary = statistic_t(batch_to_matrix(batch), sizes);
  io::atomic_write(out + ".summary.json",
                   io::format_summary_json(summary, seed));
  return 0;
}

int run_estimate(const std::string& input, const std::string& summary_path,
                 const std::string& sizes_arg, double level,
                 const std::string& out) {
  std::optional<SufficientSummary> summary;
  if (!summary_path.empty()) {
    summary = io::read_summary_json(summary_path);
  } else if (!input.empty()) {
    std::vector<int> sizes;
    if (!sizes_arg.empty()) sizes = parse_int_list(sizes_arg);
    const io::VotesFile file = io::read_votes_csv(input, sizes);
    summary = statistic_t(file.votes, file.sizes);
  } else {
    std::cerr << "estimate requires --input votes.csv or --summary "
                 "summary.json\n";
    return 2;
  }
  const EstimateReport report = multi_group_estimate(*summary, level);
  emit(out, io::format_report_json(report));
  return 0;
}

int run_weights(const std::string& sizes_arg, const std::string& beta_arg,
                const std::string& from_report, const std::string& out) {
  if (!from_report.empty()) {
    const EstimateReport report = io::read_report_json(from_report);
    WeightReport weights;
    bool all_finite = true;
    std::vector<GroupSpec> plug_in_model;
    for (const auto& g : report.per_group) {
      weights.per_group.push_back(estimate_weights(g.N, g.beta_hat, report.n));
      if (g.beta_hat.is_finite()) {
        plug_in_model.emplace_back(g.N, g.beta_hat.value());
      } else {
        all_finite = false;
      }
    }
    if (all_finite) {
      std::vector<double> w;
      for (const auto& e : weights.per_group) w.push_back(e.w);
      weights.deficit = democracy_deficit(plug_in_model, w);
    }
    emit(out, io::format_weights_json(weights, report.n));
    return 0;
  }
  if (sizes_arg.empty() || beta_arg.empty()) {
    throw Error(ErrorKind::Shape,
                "weights requires --sizes with --beta, or --from-report");
  }
  const auto model = build_model(parse_int_list(sizes_arg),
                                 parse_double_list(beta_arg));
  emit(out, io::format_weights_json(optimal_weights(model), std::nullopt));
  return 0;
}

int run_bounds(const std::string& sizes_arg, const std::string& beta_arg,
               long n, const std::string& kind, const std::string& set_arg,
               const std::string& out) {
  const auto model = build_model(parse_int_list(sizes_arg),
                                 parse_double_list(beta_arg));
  TailBound bound{};
  if (kind == "atypical-T") {
    bound = tail_bound_atypical_t(
        RateContext::create(model[0].N, model[0].beta), n);
  } else if (kind == "atypical-beta") {
    bound = tail_bound_atypical_beta(model, n);
  } else if (kind == "set") {
    if (set_arg.empty()) {
      throw Error(ErrorKind::Shape, "--kind set requires --set lo:hi[,...]");
    }
    bound = tail_bound_set(RateContext::create(model[0].N, model[0].beta), n,
                           parse_intervals(set_arg));
  } else {
    throw Error(ErrorKind::Shape, "unknown bound kind '" + kind + "'");
  }
  emit(out, io::format_bound_json(bound));
  return 0;
}

int run_moments(const std::string& sizes_arg, const std::string& grid_arg,
                const std::string& out) {
  const std::vector<int> sizes = parse_int_list(sizes_arg);
  if (sizes.size() != 1) {
    throw Error(ErrorKind::Shape, "moments expects a single group size");
  }
  emit(out, io::format_moments_csv(sizes[0], parse_beta_grid(grid_arg)));
  return 0;
}

int run_oracle(const std::string& sizes_arg, double beta,
               const std::string& out) {
  const std::vector<int> sizes = parse_int_list(sizes_arg);
  if (sizes.size() != 1) {
    throw Error(ErrorKind::Shape, "oracle expects a single group size");
  }
  const oracle::OracleMoments m = oracle::brute_force_moments(sizes[0], beta);
  nlohmann::json j;
  j["version"] = kVersion;
  j["N"] = sizes[0];
  j["beta"] = beta;
  j["log_z"] = m.log_z;
  j["es2"] = m.es2;
  j["es4"] = m.es4;
  j["eabs_s"] = m.eabs_s;
  j["eabs_s3"] = m.eabs_s3;
  emit(out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-group Curie-Weiss voting model: sampling, coupling "
               "estimation, tail bounds, and two-tier voting weights"};
  app.set_version_flag("--version", cwvote::kVersion);
  app.require_subcommand(1);

  std::string sizes_arg, beta_arg, grid_arg, set_arg, kind_arg;
  std::string input_path, summary_path, report_path, out_path;
  long n = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
  double beta_single = 0.0;

  auto* sample = app.add_subcommand("sample", "draw voting configurations");
  sample->add_option("--sizes", sizes_arg, "group sizes, e.g. 5,7")->required();
  sample->add_option("--beta", beta_arg, "couplings, e.g. 0.8,1.2")->required();
  sample->add_option("--n", n, "number of observations")->required();
  sample->add_option("--seed", seed, "RNG seed")->required();
  sample->add_option("--out", out_path, "votes CSV path")->required();

  auto* estimate = app.add_subcommand("estimate", "maximum likelihood couplings");
  estimate->add_option("--input", input_path, "votes CSV");
  estimate->add_option("--summary", summary_path, "summary JSON");
  estimate->add_option("--sizes", sizes_arg, "group sizes for the CSV");
  estimate->add_option("--level", level, "confidence level (default 0.95)");
  estimate->add_option("--out", out_path, "report JSON path (stdout if omitted)");

  auto* weights = app.add_subcommand("weights", "two-tier council weights");
  weights->add_option("--sizes", sizes_arg, "group sizes");
  weights->add_option("--beta", beta_arg, "true couplings (exact weights)");
  weights->add_option("--from-report", report_path, "plug-in from estimate report");
  weights->add_option("--out", out_path, "weights JSON path (stdout if omitted)");

  auto* bounds = app.add_subcommand("bounds", "exponential tail bounds");
  bounds->add_option("--sizes", sizes_arg, "group sizes")->required();
  bounds->add_option("--beta", beta_arg, "true couplings")->required();
  bounds->add_option("--n", n, "sample size")->required();
  bounds->add_option("--kind", kind_arg, "atypical-T | atypical-beta | set")
      ->required();
  bounds->add_option("--set", set_arg, "closed set K as lo:hi[,lo:hi...]");
  bounds->add_option("--out", out_path, "bound JSON path (stdout if omitted)");

  auto* moments = app.add_subcommand("moments", "moment curves over a beta grid");
  moments->add_option("--sizes", sizes_arg, "single group size")->required();
  moments->add_option("--beta-grid", grid_arg, "start:stop:step")->required();
  moments->add_option("--out", out_path, "curve CSV path (stdout if omitted)");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference moments");
  oracle_cmd->add_option("--sizes", sizes_arg, "single group size (<= 16)")
      ->required();
  oracle_cmd->add_option("--beta", beta_single, "coupling")->required();
  oracle_cmd->add_option("--out", out_path, "JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) {
      return run_sample(sizes_arg, beta_arg, n, seed, out_path);
    }
    if (estimate->parsed()) {
      return run_estimate(input_path, summary_path, sizes_arg, level, out_path);
    }
    if (weights->parsed()) {
      return run_weights(sizes_arg, beta_arg, report_path, out_path);
    }
    if (bounds->parsed()) {
      return run_bounds(sizes_arg, beta_arg, n, kind_arg, set_arg, out_path);
    }
    if (moments->parsed()) {
      return run_moments(sizes_arg, grid_arg, out_path);
    }
    if (oracle_cmd->parsed()) {
      return run_oracle(sizes_arg, beta_single, out_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
