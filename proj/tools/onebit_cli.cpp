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


// Command-line front end: run sweeps, validate the numerical core and emit
// plot-ready data.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "onebit/config.hpp"
#include "onebit/results_io.hpp"
#include "onebit/simulation.hpp"
#include "onebit/validation.hpp"

namespace fs = std::filesystem;
using namespace onebit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, std::optional<unsigned> threads) {
  SystemConfig config;
  try {
    ConfigEntries entries = read_config_entries(fs::path(config_path));
    apply_overrides(entries, overrides);
    config = config_from_entries(entries);
    if (threads) config.threads = *threads;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& w : config.warnings()) std::cerr << "warning: " << w << "\n";

  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  try {
    result = run_experiment(config);
  } catch (const std::exception& e) {
    std::cerr << "simulation failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::ostringstream csv;
    write_results_csv(csv, to_rows(result));
    write_text(dir / "results.csv", csv.str());

    std::ostringstream meta;
    meta << "[results]\n"
         << "format = long\n"
         << "columns = " << kResultsHeader << "\n"
         << "cells = " << result.cells.size() << "\n"
         << "rows = " << to_rows(result).size() << "\n\n"
         << format_config(config);
    write_text(dir / "metadata.ini", meta.str());

    nlohmann::ordered_json manifest;
    manifest["tool"] = "onebit";
    manifest["version"] = ONEBIT_VERSION;
    manifest["config_path"] = config_path;
    manifest["output_dir"] = out_dir;
    manifest["master_seed"] = config.master_seed;
    manifest["overrides"] = overrides;
    manifest["wall_clock_seconds"] = seconds;
    manifest["files"] = {"results.csv", "metadata.ini", "manifest.json"};
    manifest["resolved_config"] = format_config(config);
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "cannot write results: " << e.what() << "\n";
    return kExitRuntime;
  }
  std::cout << "wrote " << result.cells.size() << " cells to " << out_dir << " in "
            << std::fixed << std::setprecision(1) << seconds << " s\n";
  return kExitOk;
}

int cmd_validate(const std::string& level) {
  const auto results =
      run_validation(level == "full" ? ValidationLevel::Full : ValidationLevel::Quick);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(34) << r.name
              << " residual=" << std::scientific << std::setprecision(3) << r.residual
              << " threshold=" << r.threshold << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitRuntime;
}

int cmd_figure(const std::string& results_path, const std::string& figure,
               const std::string& out_dir) {
  std::vector<ResultRow> rows;
  std::vector<FigureId> ids;
  try {
    if (figure == "all") {
      ids = {FigureId::SumVsUsers, FigureId::SumVsIteration, FigureId::PerUserVsUsers};
    } else {
      ids = {parse_figure_id(figure)};
    }
    std::ifstream in(results_path);
    if (!in) throw FormatError("cannot open " + results_path);
    rows = read_results_csv(in);
  } catch (const FormatError& e) {
    std::cerr << "figure: " << e.what() << "\n";
    return kExitUsage;
  }
  const fs::path dir = out_dir.empty() ? fs::path(results_path).parent_path() : fs::path(out_dir);
  try {
    if (!dir.empty()) fs::create_directories(dir);
    for (FigureId id : ids) {
      std::ostringstream os;
      write_figure_data(os, id, rows);
      write_text(dir / figure_file_name(id), os.str());
      std::cout << "wrote " << (dir / figure_file_name(id)).string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "figure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit DAC massive MIMO precoding simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ONEBIT_VERSION);

  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> overrides;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run the Monte Carlo sweep described by a config file");
  run->add_option("--config", config_path, "Config file (INI)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--set", overrides, "Override a config key, KEY=VALUE (repeatable)");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads (0 = auto)");

  std::string level = "quick";
  auto* validate = app.add_subcommand("validate", "Run the numerical oracle checks");
  validate->add_option("--level", level, "Sample budget")
      ->check(CLI::IsMember({"quick", "full"}));

  std::string results_path;
  std::string figure_id;
  std::string figure_out;
  auto* figure = app.add_subcommand("figure", "Emit plot data from results.csv");
  figure->add_option("results", results_path, "results.csv from 'run'")->required();
  figure->add_option("figure", figure_id, "fig2, fig3, fig4 or all")->required();
  figure->add_option("--out", figure_out, "Output directory (default: next to results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*run) {
    std::optional<unsigned> t;
    if (*threads_opt) t = threads;
    return cmd_run(config_path, out_dir, overrides, t);
  }
  if (*validate) return cmd_validate(level);
  if (*figure) return cmd_figure(results_path, figure_id, figure_out);
  return kExitUsage;
}
