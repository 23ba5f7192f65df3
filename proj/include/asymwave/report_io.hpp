#pragma once

#include <span>
#include <string>

#include "asymwave/bifurcation.hpp"

namespace asymwave {

/// Marker written in place of a determinant when fewer than three parameters exist.
inline constexpr const char* kDegenerateMarker = "degenerate-parameters";

/// Round-trip formatting used in every text output.
std::string format_number(double v);

/// Header plus one row per report. All rows must come from the same model.
std::string to_csv(std::span<const BifurcationReport> rows);

std::string to_json(const BifurcationReport& report);
/// JSON array of report objects.
std::string to_json(std::span<const BifurcationReport> rows);

}  // namespace asymwave
