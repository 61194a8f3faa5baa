#pragma once

#include <cstdint>

#include "rsfw/io.hpp"

namespace rsfw {

struct ValidationReport {
  std::vector<ValidationRecord> records;
  bool all_pass = true;
  Index failures = 0;
};

/// Exact checks over the zoo of connected graphs with at most max_n
/// vertices, plus Monte Carlo checks on small reference graphs when
/// samples > 0.
ValidationReport run_validation(Index max_n, Index samples, std::uint64_t seed);

}  // namespace rsfw
