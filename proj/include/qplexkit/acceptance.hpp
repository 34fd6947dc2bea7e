#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qplexkit/sic_search.hpp"

namespace qplexkit {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;   // wall time; excluded from deterministic output
  std::string detail;     // deterministic figures for the given seed
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Runs every acceptance criterion at its pinned tolerance, streaming one
/// pass/fail line per criterion to `progress` (if given); returns the
/// results in order. Never throws on a failing criterion — failures are
/// reported, not raised.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace qplexkit
