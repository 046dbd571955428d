#pragma once

#include <filesystem>
#include <string>

#include "epidrive/sim.hpp"

namespace epidrive {

// Decimal places used for every real-valued CSV column.
inline constexpr int kCsvDecimals = 6;

std::string format_csv(const Trace& trace);
void export_csv(const Trace& trace, const std::filesystem::path& path);

// SVG line chart of omega2, omega5 and omega_arm against time.
std::string render_plot(const Trace& trace);
void export_plot(const Trace& trace, const std::filesystem::path& path);

}  // namespace epidrive
