#pragma once

#include <cstdint>
#include <optional>

#include "distribution.hpp"
#include "scenario.hpp"

namespace qwork {

struct SchemeOptions {
  std::optional<double> lambda;  // collective; empty selects lambda_max
  int ch_steps = 8;              // consistent histories K
  // Pointer coupling and spread; when empty the weak regime is used.
  std::optional<double> coupling;
  std::optional<double> spread;
  // Sub-ensemble: eigen-decomposition of ρ unless a seed is given, in which
  // case a random ensemble of max(dim, decomposition_states) states is drawn.
  std::optional<std::uint64_t> decomposition_seed;
  std::size_t decomposition_states = 0;
};

WorkDistribution evaluate(SchemeId scheme, const Scenario& s, const SchemeOptions& options = {});

}  // namespace qwork
