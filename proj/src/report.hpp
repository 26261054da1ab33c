#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "audit.hpp"
#include "json_io.hpp"
#include "pointer.hpp"
#include "thermo.hpp"

namespace qwork::report {

using json = json_io::json;

inline constexpr std::string_view kVersion = "0.3.1";

// {tool, version, seed?, tolerances}
json metadata(std::optional<std::uint64_t> seed = std::nullopt);

// `work,weight` header, one row per atom in ascending work, %.17g.
std::string distribution_csv(const WorkDistribution& d);
json distribution_json(const WorkDistribution& d);
// Inverse of distribution_json; atoms are taken verbatim.
WorkDistribution distribution_from_json(const json& j);

json verdict_json(std::string_view scheme, const ConditionVerdict& v);
json table1_json(const Table1Report& r);
json nogo_json(const NogoReport& r);
json collective_adapted_json(const CollectiveAdaptedReport& r);
json witness_json(const std::optional<ContextualityWitness>& w, std::size_t budget);
json thermo_json(const std::vector<ThermoCheck>& checks);
json pointer_sweep_json(const PointerSweep& sweep);

// Parsed scenario document, embedded as an object.
json scenario_json(const Scenario& s);

}  // namespace qwork::report
