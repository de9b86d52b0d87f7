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


#include "onebit/results_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace onebit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_cell(const std::string& text, const char* column, std::size_t line) {
  if constexpr (std::is_floating_point_v<T>) {
    if (text.empty() || text == "nan") return std::numeric_limits<T>::quiet_NaN();
  }
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("line " + std::to_string(line) + ": bad value '" + text + "' in column " +
                      column);
  }
  return value;
}

std::string series_name(const ResultRow& row) {
  if (row.precoder == "SLNR") return "SLNR-I" + std::to_string(row.iteration);
  return row.precoder;
}

// ZF, RZF, then SLNR iterations in increasing order.
std::tuple<int, unsigned> series_rank(const ResultRow& row) {
  if (row.precoder == "ZF") return {0, 0};
  if (row.precoder == "RZF") return {1, 0};
  if (row.precoder == "SLNR") return {2, row.iteration};
  return {3, row.iteration};
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<ResultRow> to_rows(const ExperimentResult& result) {
  std::vector<ResultRow> rows;
  for (const auto& cell : result.cells) {
    for (const auto& p : cell.points) {
      ResultRow r;
      r.num_users = cell.num_users;
      r.snr_db = cell.snr_db;
      r.precoder = std::string(to_string(cell.kind));
      r.iteration = p.iteration;
      r.mean_sum_se = p.se.sum_se;
      r.per_user_se = p.se.per_user_se;
      r.std_error = p.se.std_error;
      r.realizations = p.se.realizations;
      r.mean_gap = p.mean_gap;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.num_users << ',' << format_double(r.snr_db) << ',' << r.precoder << ','
        << r.iteration << ',' << format_double(r.mean_sum_se) << ','
        << format_double(r.per_user_se) << ',' << format_double(r.std_error) << ','
        << r.realizations << ',' << format_double(r.mean_gap) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.find_first_not_of(" \t\r") == std::string::npos) {
    throw FormatError("empty results file");
  }
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;

  constexpr std::array<const char*, 8> required{
      "K", "snr_db", "precoder", "iteration", "mean_sum_se", "per_user_se", "stderr",
      "realizations"};
  for (const char* name : required) {
    if (!column.count(name)) throw FormatError(std::string("missing column ") + name);
  }
  const bool has_gap = column.count("mean_gap") != 0;

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < header.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " columns");
    }
    auto at = [&](const char* name) -> const std::string& { return cells[column.at(name)]; };
    ResultRow r;
    r.num_users = parse_cell<unsigned>(at("K"), "K", line_no);
    r.snr_db = parse_cell<double>(at("snr_db"), "snr_db", line_no);
    r.precoder = at("precoder");
    r.iteration = parse_cell<unsigned>(at("iteration"), "iteration", line_no);
    r.mean_sum_se = parse_cell<double>(at("mean_sum_se"), "mean_sum_se", line_no);
    r.per_user_se = parse_cell<double>(at("per_user_se"), "per_user_se", line_no);
    r.std_error = parse_cell<double>(at("stderr"), "stderr", line_no);
    r.realizations = parse_cell<std::size_t>(at("realizations"), "realizations", line_no);
    r.mean_gap = has_gap ? parse_cell<double>(at("mean_gap"), "mean_gap", line_no)
                         : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(r);
  }
  if (rows.empty()) throw FormatError("results file has no data rows");
  return rows;
}

FigureId parse_figure_id(const std::string& name) {
  if (name == "fig2") return FigureId::SumVsUsers;
  if (name == "fig3") return FigureId::SumVsIteration;
  if (name == "fig4") return FigureId::PerUserVsUsers;
  throw FormatError("unknown figure '" + name + "' (expected fig2, fig3 or fig4)");
}

std::string figure_file_name(FigureId id) {
  switch (id) {
    case FigureId::SumVsUsers:
      return "fig2_sum_se_vs_users.csv";
    case FigureId::SumVsIteration:
      return "fig3_convergence.csv";
    case FigureId::PerUserVsUsers:
      return "fig4_per_user_se_vs_users.csv";
  }
  return "figure.csv";
}

void write_figure_data(std::ostream& out, FigureId id, const std::vector<ResultRow>& input) {
  std::vector<ResultRow> rows = input;
  if (id == FigureId::SumVsIteration) {
    std::erase_if(rows, [](const ResultRow& r) { return r.precoder != "SLNR"; });
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
      return std::tie(a.snr_db, a.num_users, a.iteration) <
             std::tie(b.snr_db, b.num_users, b.iteration);
    });
    out << "snr_db,K,iteration,sum_se,stderr,mean_gap\n";
    for (const auto& r : rows) {
      out << format_double(r.snr_db) << ',' << r.num_users << ',' << r.iteration << ','
          << format_double(r.mean_sum_se) << ',' << format_double(r.std_error) << ','
          << format_double(r.mean_gap) << '\n';
    }
    return;
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(a.snr_db, series_rank(a), a.num_users) <
           std::make_tuple(b.snr_db, series_rank(b), b.num_users);
  });
  const bool per_user = id == FigureId::PerUserVsUsers;
  out << "snr_db,series,K," << (per_user ? "per_user_se" : "sum_se") << ",stderr\n";
  for (const auto& r : rows) {
    const double value = per_user ? r.per_user_se : r.mean_sum_se;
    const double err = per_user ? r.std_error / static_cast<double>(r.num_users) : r.std_error;
    out << format_double(r.snr_db) << ',' << series_name(r) << ',' << r.num_users << ','
        << format_double(value) << ',' << format_double(err) << '\n';
  }
}

}  // namespace onebit
