#pragma once

#include "halt_lab/oracle.hpp"
#include "halt_lab/testers.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace halt_lab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSoundness = 2 };

/// Runs `halt-lab` with argv[1..]. Artifacts go to --out files or `out`;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TesterContext {
  OraclePolicy oracle;
  std::uint64_t census_budget = 10'000'000;
  /// Builds the oracle table for sizes 0..depth of the evaluated variant.
  std::function<std::shared_ptr<const OracleTable>(std::size_t depth)> table;
};

/// Parses a tester expression:
///   bounded:<budget> | syntax | silent | census:<i>,<C>,<j>,<threeway|approximating>
///   | table:<depth>+<tester> | approx:<yes|no>(<tester>) | generic(<tester>)
///   | dovetail:<budget>(<tester>)
Tester parseTesterSpec(std::string_view spec, const TesterContext& ctx);

}  // namespace halt_lab::cli
