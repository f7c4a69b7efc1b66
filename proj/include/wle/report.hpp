#pragma once

#include "wle/solver.hpp"
#include "wle/tables.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace wle {

enum class Format { json, csv };

Format parse_format(std::string_view s);

inline constexpr int report_version = 1;

// JSON keeps a fixed field order and carries a version field. The CSV form of a simulation
// report is the replication table with '#' metadata lines; cells are recomputed on import.
std::string export_report(const SimulationReport& report, Format format);
SimulationReport import_simulation_report(std::string_view bytes, Format format);

std::string export_report(const TableReport& report, Format format);

std::string export_report(const RootSet& roots, const std::vector<std::string>& parameter_names, Format format);

} // namespace wle
