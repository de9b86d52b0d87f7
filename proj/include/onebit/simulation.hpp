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


#ifndef ONEBIT_SIMULATION_HPP
#define ONEBIT_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/metrics.hpp"

namespace onebit {

enum class PrecoderKind { ZF, RZF, SLNR };

std::string_view to_string(PrecoderKind kind);
std::optional<PrecoderKind> parse_precoder_kind(std::string_view name);

/// Scenario and sweep definition. channel.num_users is overridden by every
/// entry of user_counts.
struct SystemConfig {
  ChannelParams channel;
  double symbol_variance = 1.0;
  double noise_variance = 1.0;  // P_TX = rho * sigma_n^2
  std::vector<double> snr_db{10.0, 40.0};
  std::vector<unsigned> user_counts{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<PrecoderKind> precoders{PrecoderKind::ZF, PrecoderKind::RZF, PrecoderKind::SLNR};
  SlnrSolverConfig solver;
  unsigned realizations = 100;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Throws InvalidParameter naming the offending field.
  void validate() const;

  /// Non-fatal remarks about the configuration (e.g. sigma_s^2 != 1).
  std::vector<std::string> warnings() const;

  QuantizerSpec quantizer(double snr_db_value) const;
  ChannelParams channel_for(unsigned num_users) const;
};

/// Raised when a realization fails; the message carries the cell context.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RealizationOutcome {
  // Sum rate after each iteration (a single entry for ZF/RZF).
  std::vector<double> sum_rate;
  // Frobenius step per iteration (SLNR only), padded to the budget.
  std::vector<double> gaps;
  unsigned iterations_used = 0;
  bool converged = false;
};

struct IterationPoint {
  unsigned iteration = 0;  // 0 for ZF/RZF, 1..I for SLNR
  SpectralEfficiency se;
  double mean_gap = 0.0;   // NaN for ZF/RZF
};

struct CellResult {
  unsigned num_users = 0;
  double snr_db = 0.0;
  PrecoderKind kind = PrecoderKind::ZF;
  std::vector<IterationPoint> points;
  std::vector<RealizationOutcome> realizations;
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // ordered as user_counts x snr_db x precoders
};

/// Seed of the channel realization r for K users. Independent of SNR and
/// precoder, so every precoder and SNR in a sweep sees the same channels.
std::uint64_t realization_seed(std::uint64_t master_seed, unsigned num_users,
                               unsigned realization);

RealizationOutcome run_realization(const SystemConfig& config, unsigned num_users,
                                   double snr_db, PrecoderKind kind, unsigned realization);

CellResult run_cell(const SystemConfig& config, unsigned num_users, double snr_db,
                    PrecoderKind kind);

ExperimentResult run_experiment(const SystemConfig& config);

}  // namespace onebit

#endif  // ONEBIT_SIMULATION_HPP
