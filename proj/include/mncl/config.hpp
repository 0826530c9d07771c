#pragma once

#include "mncl/harness.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mncl {

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped;
/// anything else without an `=` is a ParameterError naming the line.
Settings parse_settings(std::string_view text);

/// Reads and parses a settings file.
Settings load_settings(const std::string& path);

/// Applies one setting (config-file key or long flag name without dashes;
/// `-` and `_` are interchangeable). Unknown keys are a ParameterError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

void apply_settings(ExperimentConfig& config, const Settings& settings);

/// "1-5,8,10" -> {1,2,3,4,5,8,10}
std::vector<int> parse_int_list(std::string_view text);
/// "-20,-10,0" -> {-20,-10,0}
std::vector<double> parse_double_list(std::string_view text);
/// "rxdiv,stbc" or "all"
std::vector<Scheme> parse_scheme_list(std::string_view text);

} // namespace mncl
