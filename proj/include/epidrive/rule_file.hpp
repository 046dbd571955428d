#pragma once

// Text format for Mamdani rule bases (see docs/rule_file.md):
//
//   input accel_rate -2 2
//     term zero -2/3 0 2/3
//   end
//   output motor_v -2.5 7.5
//     term high 5 7.5 7.5
//   end
//   IF accel_rate IS fast AND brake IS released THEN motor_v IS high  # [ii] ...
//
// Numbers are decimals or ratios "p/q". A trailing comment that starts with a
// bracketed list assigns condition tags to the rule.

#include <filesystem>
#include <string>
#include <string_view>

#include "epidrive/fuzzy.hpp"

namespace epidrive {

fuzzy::RuleBase parse_rule_base(std::string_view text,
                                const std::string& source = "<rules>");

fuzzy::RuleBase load_rule_base(const std::filesystem::path& path);

std::string format_rule_base(const fuzzy::RuleBase& rb);

// Text of the pedal controller shipped in data/pedal_controller.rules.
std::string_view shipped_rule_text();

}  // namespace epidrive
