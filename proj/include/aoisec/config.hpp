#pragma once

// Sweep configuration files.
//
// Two formats are accepted and flattened to "section.key" -> value:
//
//   [grid]                          {"grid": {"p": [0.8], "q": [0.2, 0.5]},
//   p = 0.8                          "simulation": {"horizon": 100000}}
//   q = 0.2, 0.5
//   [simulation]
//   horizon = 100000
//
// Lists are comma separated; "start:stop:step" expands to an inclusive range.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aoisec/experiments.hpp"

namespace aoisec {

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_ini_config(const std::string& text);
ConfigMap parse_json_config(const std::string& text);
/// Picks the parser by extension (.json -> JSON, anything else -> INI).
ConfigMap load_config(const std::filesystem::path& path);

std::vector<double> parse_real_list(std::string_view text);
std::vector<std::uint64_t> parse_count_list(std::string_view text);
std::vector<Method> parse_method_list(std::string_view text);

/// Applies every key of `config` to `spec`. Unknown keys are rejected.
void apply_config(const ConfigMap& config, SweepSpec& spec);

}  // namespace aoisec
