#pragma once

// Reproducible artifact emission. Every artifact starts with two comment
// lines: the format version and the full run configuration. The CSV header
// follows on the first non-comment line.

#include "halt_lab/census.hpp"
#include "halt_lab/oracle.hpp"
#include "halt_lab/testers.hpp"
#include "halt_lab/tm.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace halt_lab::report {

inline constexpr int kFormatVersion = 1;

inline constexpr std::string_view kCountHeader = "n,p,q,sigma_pow,p_ratio,q_ratio";
inline constexpr std::string_view kCensusHeader = "variant,n,p,h_min,d_min,unknown,budget,tape_cap";
inline constexpr std::string_view kEvalHeader =
    "tester,variant,n,p,easy_h,hard_h,easy_d,hard_d,unverifiable,wrong,failure_rate";
inline constexpr std::string_view kFalloffHeader =
    "states,samples,halt,fall_off,frontier_repeat,config_cycle,unknown";

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered key/value parameters of one run. Worker counts never go in here:
/// they must not influence any artifact byte.
struct RunConfig {
  std::vector<std::pair<std::string, std::string>> params;

  RunConfig& set(std::string key, std::string value);
  /// Empty string when absent.
  std::string get(std::string_view key) const;
  std::string render() const;
  static RunConfig parse(std::string_view rendered);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Adds the oracle policy keys (budget, cap, semantics, input alphabet).
void describePolicy(RunConfig& config, const OraclePolicy& policy);

std::string csvField(std::string_view s);
std::vector<std::string> splitCsvLine(std::string_view line);

std::string countCsv(const VanishingReport& report, const RunConfig& config);
std::string censusCsv(const std::vector<SizeCensus>& rows, const RunConfig& config);
std::string evalCsv(const std::vector<TesterStats>& rows, const RunConfig& config);
std::string falloffCsv(const std::vector<tm::OutcomeCounts>& rows, const RunConfig& config);

/// One JSON object per instance, in enumeration (shortlex) order. Variant G
/// records carry the input as hex and the Cantor pair of the shortlex
/// indices of program and input.
std::string censusLog(const std::vector<CensusResult>& censuses, InputAlphabet alphabet);

struct Artifact {
  RunConfig config;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Artifact parseArtifact(std::istream& in);
Artifact parseArtifact(std::string_view text);

/// Merges census artifacts (and optionally eval artifacts) that share one
/// variant and policy: per-size rows, cumulative P / H_min / D_min /
/// Unknown, and the h_min(n)/p(n) trajectory with its direction changes
/// flagged. Eval rows get cumulative hard counts and failure rates. Throws
/// ReportError on mixed provenance, duplicate or missing sizes.
std::string combine(const std::vector<Artifact>& inputs, const RunConfig& config);

}  // namespace halt_lab::report
