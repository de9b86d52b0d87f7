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


#ifndef ONEBIT_RESULTS_IO_HPP
#define ONEBIT_RESULTS_IO_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "onebit/simulation.hpp"

namespace onebit {

/// One line of results.csv.
struct ResultRow {
  unsigned num_users = 0;
  double snr_db = 0.0;
  std::string precoder;
  unsigned iteration = 0;
  double mean_sum_se = 0.0;
  double per_user_se = 0.0;
  double std_error = 0.0;
  std::size_t realizations = 0;
  double mean_gap = 0.0;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kResultsHeader =
    "K,snr_db,precoder,iteration,mean_sum_se,per_user_se,stderr,realizations,mean_gap";

std::vector<ResultRow> to_rows(const ExperimentResult& result);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Throws FormatError on an empty file, a missing column or an unparsable value.
std::vector<ResultRow> read_results_csv(std::istream& in);

enum class FigureId { SumVsUsers, SumVsIteration, PerUserVsUsers };

FigureId parse_figure_id(const std::string& name);
std::string figure_file_name(FigureId id);

/// Tidy plot data: one row per (snr, series, x).
void write_figure_data(std::ostream& out, FigureId id, const std::vector<ResultRow>& rows);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

}  // namespace onebit

#endif  // ONEBIT_RESULTS_IO_HPP
