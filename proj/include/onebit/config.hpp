// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef ONEBIT_CONFIG_HPP
#define ONEBIT_CONFIG_HPP

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "onebit/simulation.hpp"

namespace onebit {

/// Config validation failure. `field` is the dotted key ("channel.num_antennas")
/// and `line` the 1-based source line when known, otherwise 0.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, unsigned long line, const std::string& message);
  const std::string& field() const { return field_; }
  unsigned long line() const { return line_; }

 private:
  std::string field_;
  unsigned long line_;
};

/// Raw "section.key" -> value pairs.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries read_config_entries(std::istream& in);
ConfigEntries read_config_entries(const std::filesystem::path& path);

/// Applies "section.key=value" overrides on top of the file entries.
void apply_overrides(ConfigEntries& entries, const std::vector<std::string>& overrides);

/// Builds and validates a SystemConfig. Every required key must be present.
SystemConfig config_from_entries(const ConfigEntries& entries);

/// Resolved configuration in the same INI layout the parser accepts.
std::string format_config(const SystemConfig& config);

/// The shipped defaults (N = 100, K = 10..100, {10, 40} dB, L = 5, ...).
std::string default_config_text();

}  // namespace onebit

#endif  // ONEBIT_CONFIG_HPP
