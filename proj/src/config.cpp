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


#include "onebit/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "onebit/results_io.hpp"

namespace onebit {

namespace {

struct KeyInfo {
  const char* section;
  const char* key;
  bool required;
};

constexpr KeyInfo kKeys[] = {
    {"channel", "num_antennas", true},
    {"channel", "num_paths", true},
    {"channel", "path_gain_variance", true},
    {"channel", "angular_spread_deg", true},
    {"channel", "sector_min_deg", true},
    {"channel", "sector_max_deg", true},
    {"channel", "element_spacing", false},
    {"quantizer", "symbol_variance", true},
    {"quantizer", "noise_variance", false},
    {"sweep", "user_counts", true},
    {"sweep", "snr_db", true},
    {"sweep", "precoders", true},
    {"solver", "max_iterations", true},
    {"solver", "tolerance", false},
    {"solver", "relative_tolerance", false},
    {"solver", "initializer", false},
    {"run", "realizations", true},
    {"run", "master_seed", true},
    {"run", "threads", false},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// "realizations" or "run.realizations" -> "run.realizations".
std::string canonical_key(const std::string& raw) {
  const std::string key = trim(raw);
  for (const auto& info : kKeys) {
    const std::string dotted = std::string(info.section) + "." + info.key;
    if (key == dotted || key == info.key) return dotted;
  }
  throw ConfigError(key, 0, "unknown key");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& field, const std::string& text) {
  T value{};
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(field, 0, "cannot parse '" + t + "' as a number");
  }
  return value;
}

class EntryReader {
 public:
  explicit EntryReader(const ConfigEntries& entries) : entries_(entries) {}

  bool has(const std::string& field) const { return entries_.count(field) != 0; }

  const std::string& raw(const std::string& field) const {
    const auto it = entries_.find(field);
    if (it == entries_.end()) throw ConfigError(field, 0, "missing required field");
    return it->second;
  }

  template <class T>
  T number(const std::string& field) const {
    return parse_number<T>(field, raw(field));
  }

  template <class T>
  std::vector<T> numbers(const std::string& field) const {
    std::vector<T> out;
    for (const auto& item : split_list(raw(field))) out.push_back(parse_number<T>(field, item));
    return out;
  }

 private:
  const ConfigEntries& entries_;
};

}  // namespace

ConfigError::ConfigError(std::string field, unsigned long line, const std::string& message)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? message : field + ": " + message)),
      field_(std::move(field)),
      line_(line) {}

ConfigEntries read_config_entries(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", e.line(), e.message());
  }
  ConfigEntries entries;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      entries[canonical_key(name)] = trim(node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      entries[canonical_key(name + "." + key)] = trim(leaf.data());
    }
  }
  return entries;
}

ConfigEntries read_config_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file " + path.string());
  return read_config_entries(in);
}

void apply_overrides(ConfigEntries& entries, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(item, 0, "override must be KEY=VALUE");
    entries[canonical_key(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
}

SystemConfig config_from_entries(const ConfigEntries& entries) {
  for (const auto& info : kKeys) {
    const std::string field = std::string(info.section) + "." + info.key;
    if (info.required && !entries.count(field)) {
      throw ConfigError(field, 0, "missing required field");
    }
  }
  const EntryReader in(entries);
  SystemConfig c;
  c.channel.num_antennas = in.number<arma::uword>("channel.num_antennas");
  c.channel.num_paths = in.number<arma::uword>("channel.num_paths");
  c.channel.path_gain_variance = in.number<double>("channel.path_gain_variance");
  c.channel.angular_spread_deg = in.number<double>("channel.angular_spread_deg");
  c.channel.sector_min_deg = in.number<double>("channel.sector_min_deg");
  c.channel.sector_max_deg = in.number<double>("channel.sector_max_deg");
  if (in.has("channel.element_spacing"))
    c.channel.element_spacing = in.number<double>("channel.element_spacing");

  c.symbol_variance = in.number<double>("quantizer.symbol_variance");
  if (in.has("quantizer.noise_variance"))
    c.noise_variance = in.number<double>("quantizer.noise_variance");

  c.user_counts = in.numbers<unsigned>("sweep.user_counts");
  c.snr_db = in.numbers<double>("sweep.snr_db");
  c.precoders.clear();
  std::set<PrecoderKind> seen;
  for (const auto& name : split_list(in.raw("sweep.precoders"))) {
    const auto kind = parse_precoder_kind(name);
    if (!kind) throw ConfigError("sweep.precoders", 0, "unknown precoder '" + name + "'");
    if (seen.insert(*kind).second) c.precoders.push_back(*kind);
  }

  c.solver.max_iterations = in.number<unsigned>("solver.max_iterations");
  if (in.has("solver.tolerance") && trim(in.raw("solver.tolerance")) != "auto") {
    c.solver.tolerance = in.number<double>("solver.tolerance");
  }
  if (in.has("solver.relative_tolerance")) {
    c.solver.relative_tolerance = in.number<double>("solver.relative_tolerance");
  }
  if (in.has("solver.initializer")) {
    const auto kind = parse_precoder_kind(in.raw("solver.initializer"));
    if (kind == PrecoderKind::ZF) {
      c.solver.initializer = Initializer::ZeroForcing;
    } else if (kind == PrecoderKind::RZF) {
      c.solver.initializer = Initializer::RegularizedZeroForcing;
    } else {
      throw ConfigError("solver.initializer", 0, "must be ZF or RZF");
    }
  }

  c.realizations = in.number<unsigned>("run.realizations");
  c.master_seed = in.number<std::uint64_t>("run.master_seed");
  if (in.has("run.threads")) c.threads = in.number<unsigned>("run.threads");

  try {
    c.validate();
  } catch (const InvalidParameter& e) {
    const std::string what = e.what();
    throw ConfigError(e.field(), 0, what.substr(e.field().size() + 2));
  }
  return c;
}

std::string format_config(const SystemConfig& c) {
  auto join = [](const auto& values, auto&& fmt) {
    std::string out;
    for (const auto& v : values) {
      if (!out.empty()) out += ", ";
      out += fmt(v);
    }
    return out;
  };
  std::ostringstream os;
  os << "[channel]\n"
     << "num_antennas = " << c.channel.num_antennas << "\n"
     << "num_paths = " << c.channel.num_paths << "\n"
     << "path_gain_variance = " << format_double(c.channel.path_gain_variance) << "\n"
     << "angular_spread_deg = " << format_double(c.channel.angular_spread_deg) << "\n"
     << "sector_min_deg = " << format_double(c.channel.sector_min_deg) << "\n"
     << "sector_max_deg = " << format_double(c.channel.sector_max_deg) << "\n"
     << "element_spacing = " << format_double(c.channel.element_spacing) << "\n\n"
     << "[quantizer]\n"
     << "symbol_variance = " << format_double(c.symbol_variance) << "\n"
     << "noise_variance = " << format_double(c.noise_variance) << "\n\n"
     << "[sweep]\n"
     << "user_counts = " << join(c.user_counts, [](unsigned k) { return std::to_string(k); })
     << "\n"
     << "snr_db = " << join(c.snr_db, [](double s) { return format_double(s); }) << "\n"
     << "precoders = "
     << join(c.precoders, [](PrecoderKind k) { return std::string(to_string(k)); }) << "\n\n"
     << "[solver]\n"
     << "max_iterations = " << c.solver.max_iterations << "\n"
     << "tolerance = " << (c.solver.tolerance ? format_double(*c.solver.tolerance) : "auto")
     << "\n"
     << "relative_tolerance = " << format_double(c.solver.relative_tolerance) << "\n"
     << "initializer = "
     << (c.solver.initializer == Initializer::RegularizedZeroForcing ? "RZF" : "ZF") << "\n\n"
     << "[run]\n"
     << "realizations = " << c.realizations << "\n"
     << "master_seed = " << c.master_seed << "\n"
     << "threads = " << c.threads << "\n";
  return os.str();
}

std::string default_config_text() { return format_config(SystemConfig{}); }

}  // namespace onebit
