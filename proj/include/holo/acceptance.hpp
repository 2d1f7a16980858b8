#pragma once

#include <string>
#include <vector>

#include "holo/parallel.hpp"

namespace holo {

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

/// Runs every acceptance criterion with its pinned tolerances.
std::vector<CriterionResult> run_acceptance(Exec exec = Exec::parallel);

/// "PASS 3 kernel reproduction: ..." lines.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace holo
