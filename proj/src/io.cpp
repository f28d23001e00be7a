#include "cwvote/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cwvote/version.hpp"

namespace cwvote::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_sizes_list(const std::string& text, std::size_t line_no) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorKind::MalformedData,
                  "bad size token '" + token + "' in header at line " +
                      std::to_string(line_no),
                  line_no);
    }
    sizes.push_back(value);
  }
  return sizes;
}

json coupling_to_json(const ExtendedCoupling& c) {
  if (c.is_neg_infinity()) return json("-inf");
  if (c.is_pos_infinity()) return json("inf");
  return json(c.value());
}

ExtendedCoupling coupling_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return ExtendedCoupling::pos_infinity();
    if (s == "-inf") return ExtendedCoupling::neg_infinity();
    throw Error(ErrorKind::MalformedData, "bad coupling value '" + s + "'");
  }
  return ExtendedCoupling::finite(j.get<double>());
}

}  // namespace

std::string format_votes_csv(const SampleBatch& batch) {
  if (!batch.has_configurations) {
    throw Error(ErrorKind::Precondition,
                "sample batch holds no configurations to write");
  }
  std::string out = "# sizes=";
  for (std::size_t lambda = 0; lambda < batch.model.size(); ++lambda) {
    if (lambda > 0) out += ',';
    out += std::to_string(batch.model[lambda].N);
  }
  out += '\n';
  for (std::size_t t = 0; t < batch.n; ++t) {
    const std::int8_t* row = batch.configuration_row(t);
    for (std::size_t c = 0; c < batch.total_voters; ++c) {
      if (c > 0) out += ',';
      out += (row[c] == 1 ? "1" : "-1");
    }
    out += '\n';
  }
  return out;
}

VotesFile parse_votes_csv(const std::string& text,
                          const std::vector<int>& expected_sizes) {
  VotesFile file;
  file.sizes = expected_sizes;

  std::stringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      const auto pos = stripped.find("sizes=");
      if (pos != std::string::npos) {
        const std::vector<int> header_sizes =
            parse_sizes_list(stripped.substr(pos + 6), line_no);
        if (!file.sizes.empty() && header_sizes != file.sizes) {
          throw Error(ErrorKind::Shape,
                      "header sizes do not match the requested sizes");
        }
        file.sizes = header_sizes;
      }
      continue;
    }

    std::stringstream cells(stripped);
    std::string cell;
    std::size_t col_no = 0;
    while (std::getline(cells, cell, ',')) {
      ++col_no;
      const std::string token = trim(cell);
      std::int8_t value;
      if (token == "1") {
        value = 1;
      } else if (token == "-1") {
        value = -1;
      } else {
        throw Error(ErrorKind::MalformedData,
                    "vote entry must be exactly -1 or 1, got '" + token +
                        "' at line " + std::to_string(line_no) + ", column " +
                        std::to_string(col_no),
                    line_no, col_no);
      }
      file.votes.entries.push_back(value);
    }
    if (file.votes.rows == 0) {
      cols = col_no;
    } else if (col_no != cols) {
      throw Error(ErrorKind::Shape,
                  "row at line " + std::to_string(line_no) + " has " +
                      std::to_string(col_no) + " columns, expected " +
                      std::to_string(cols),
                  line_no);
    }
    ++file.votes.rows;
  }
  file.votes.cols = cols;
  if (file.votes.rows == 0) {
    throw Error(ErrorKind::MalformedData, "no observations in votes file");
  }
  if (file.sizes.empty()) {
    throw Error(ErrorKind::Shape,
                "group sizes are required (no header in file, none given)");
  }
  return file;
}

VotesFile read_votes_csv(const std::string& path,
                         const std::vector<int>& expected_sizes) {
  return parse_votes_csv(read_file(path), expected_sizes);
}

std::string format_summary_json(const SufficientSummary& summary,
                                std::optional<std::uint64_t> seed) {
  json j;
  j["version"] = kVersion;
  if (seed) j["seed"] = *seed;
  j["n"] = summary.n;
  j["groups"] = json::array();
  for (const auto& g : summary.groups) {
    j["groups"].push_back({{"N", g.N}, {"T", g.T}});
  }
  return j.dump(2) + "\n";
}

SufficientSummary parse_summary_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedData,
                std::string("summary JSON parse failure: ") + e.what());
  }
  try {
    const long n = j.at("n").get<long>();
    std::vector<SufficientSummary::Group> groups;
    for (const auto& g : j.at("groups")) {
      groups.push_back({g.at("N").get<int>(), g.at("T").get<double>()});
    }
    return SufficientSummary(std::move(groups), n);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedData,
                std::string("summary JSON missing field: ") + e.what());
  }
}

SufficientSummary read_summary_json(const std::string& path) {
  return parse_summary_json(read_file(path));
}

std::string format_report_json(const EstimateReport& report) {
  json j;
  j["version"] = kVersion;
  j["n"] = report.n;
  j["level"] = report.level;
  j["groups"] = json::array();
  for (const auto& g : report.per_group) {
    json e;
    e["N"] = g.N;
    e["T"] = g.T;
    e["beta_hat"] = coupling_to_json(g.beta_hat);
    e["classification"] = classification_name(g.classification);
    e["std_error"] = g.std_error ? json(*g.std_error) : json(nullptr);
    e["ci"] = g.ci ? json::array({g.ci->first, g.ci->second}) : json(nullptr);
    j["groups"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

EstimateReport parse_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedData,
                std::string("report JSON parse failure: ") + e.what());
  }
  try {
    EstimateReport report;
    report.n = j.at("n").get<long>();
    report.level = j.at("level").get<double>();
    for (const auto& e : j.at("groups")) {
      GroupEstimate g;
      g.N = e.at("N").get<int>();
      g.T = e.at("T").get<double>();
      g.beta_hat = coupling_from_json(e.at("beta_hat"));
      g.classification = classify_estimate(g.N, g.T);
      if (e.contains("std_error") && !e.at("std_error").is_null()) {
        g.std_error = e.at("std_error").get<double>();
      }
      if (e.contains("ci") && !e.at("ci").is_null()) {
        g.ci = std::make_pair(e.at("ci")[0].get<double>(),
                              e.at("ci")[1].get<double>());
      }
      report.per_group.push_back(std::move(g));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedData,
                std::string("report JSON missing field: ") + e.what());
  }
}

EstimateReport read_report_json(const std::string& path) {
  return parse_report_json(read_file(path));
}

std::string format_weights_json(const WeightReport& report,
                                std::optional<long> n) {
  json j;
  j["version"] = kVersion;
  if (n) j["n"] = *n;
  j["groups"] = json::array();
  for (const auto& g : report.per_group) {
    json e;
    e["N"] = g.N;
    e["w"] = g.w;
    e["source"] = g.source == WeightSource::Exact ? "exact" : "estimated";
    e["upsilon_sq"] = g.upsilon_sq ? json(*g.upsilon_sq) : json(nullptr);
    j["groups"].push_back(std::move(e));
  }
  j["deficit"] = report.deficit ? json(*report.deficit) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string format_bound_json(const TailBound& bound) {
  json j;
  j["version"] = kVersion;
  switch (bound.kind) {
    case TailBoundKind::AtypicalT: j["kind"] = "atypical-T"; break;
    case TailBoundKind::AtypicalBetaHat: j["kind"] = "atypical-beta"; break;
    case TailBoundKind::ClosedSetK: j["kind"] = "closed-set"; break;
  }
  j["n"] = bound.n;
  j["delta"] = bound.delta;
  j["prefactor"] = bound.prefactor;
  j["bound"] = bound.bound;
  return j.dump(2) + "\n";
}

std::string format_moments_csv(int population,
                               const std::vector<double>& beta_grid) {
  std::string out = "beta,theta,var_s2,abs_moment\n";
  char line[160];
  for (double beta : beta_grid) {
    const double theta = moment_s2(population, ExtendedCoupling::finite(beta));
    const double var = var_s2(population, beta);
    const double eabs = abs_moment(population, ExtendedCoupling::finite(beta), 1);
    std::snprintf(line, sizeof line, "%.12g,%.17g,%.17g,%.17g\n", beta, theta,
                  var, eabs);
    out += line;
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    }
    out << content;
    if (!out.flush()) {
      throw Error(ErrorKind::Io, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error(ErrorKind::Io,
                "failed to move " + tmp.string() + " to " + target.string() +
                    ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cwvote::io
