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


#include "onebit/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace onebit {

namespace {

unsigned resolve_threads(unsigned requested, std::size_t tasks) {
  unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(i) for i in [0, n). If tasks fail, the exception of the lowest
// failing index is rethrown, independently of the thread count.
template <class Fn>
void parallel_for(std::size_t n, unsigned requested_threads, Fn&& fn) {
  const unsigned threads = resolve_threads(requested_threads, n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || i > first_failure.load()) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        std::size_t cur = first_failure.load();
        while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  const std::size_t failed = first_failure.load();
  if (failed != std::numeric_limits<std::size_t>::max()) std::rethrow_exception(errors[failed]);
}

double sum_rate_of(const ChannelMatrix& h, const arma::cx_mat& w, const QuantizerSpec& spec,
                   double noise_variance) {
  const Precoder precoder = make_precoder(w, spec);
  const BussgangModel model = build_bussgang_model(w, spec);
  return evaluate_link(h, precoder, model, noise_variance).sum_rate;
}

RealizationOutcome simulate(const SystemConfig& config, const ChannelMatrix& h,
                            const QuantizerSpec& spec, PrecoderKind kind) {
  RealizationOutcome out;
  const double noise = config.noise_variance;
  switch (kind) {
    case PrecoderKind::ZF:
      out.sum_rate.push_back(sum_rate_of(h, zf_precoder(h), spec, noise));
      break;
    case PrecoderKind::RZF:
      out.sum_rate.push_back(sum_rate_of(h, rzf_precoder(h, spec, noise), spec, noise));
      break;
    case PrecoderKind::SLNR: {
      const SlnrResult res = slnr_precoder(h, spec, noise, config.solver);
      const auto& iterates = res.trace.iterates;
      const unsigned budget = config.solver.max_iterations;
      const double final_rate = evaluate_link(h, res.precoder, res.model, noise).sum_rate;
      // After early convergence the precoder no longer changes, so later
      // iteration indices repeat the final value.
      for (unsigned i = 1; i <= budget; ++i) {
        const std::size_t accepted = std::min<std::size_t>(i, iterates.size());
        if (accepted == iterates.size()) {
          out.sum_rate.push_back(final_rate);
        } else {
          out.sum_rate.push_back(sum_rate_of(h, iterates[accepted - 1], spec, noise));
        }
      }
      out.gaps = res.trace.gaps;
      if (!out.gaps.empty()) out.gaps.resize(budget, out.gaps.back());
      out.iterations_used = res.trace.iterations_used;
      out.converged = res.trace.converged;
      break;
    }
  }
  return out;
}

CellResult aggregate(unsigned num_users, double snr_db, PrecoderKind kind,
                     std::vector<RealizationOutcome> outcomes) {
  CellResult cell;
  cell.num_users = num_users;
  cell.snr_db = snr_db;
  cell.kind = kind;
  const std::size_t points = outcomes.front().sum_rate.size();
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> rates;
    rates.reserve(outcomes.size());
    double gap_sum = 0.0;
    for (const auto& o : outcomes) {
      rates.push_back(o.sum_rate[i]);
      if (kind == PrecoderKind::SLNR) gap_sum += o.gaps[i];
    }
    IterationPoint p;
    p.iteration = kind == PrecoderKind::SLNR ? static_cast<unsigned>(i + 1) : 0u;
    p.se = spectral_efficiency(rates, num_users);
    p.mean_gap = kind == PrecoderKind::SLNR ? gap_sum / static_cast<double>(outcomes.size())
                                            : std::numeric_limits<double>::quiet_NaN();
    cell.points.push_back(p);
  }
  cell.realizations = std::move(outcomes);
  return cell;
}

struct CellSpec {
  unsigned num_users;
  double snr_db;
  PrecoderKind kind;
};

}  // namespace

std::string_view to_string(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::ZF:
      return "ZF";
    case PrecoderKind::RZF:
      return "RZF";
    case PrecoderKind::SLNR:
      return "SLNR";
  }
  return "?";
}

std::optional<PrecoderKind> parse_precoder_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "ZF") return PrecoderKind::ZF;
  if (upper == "RZF") return PrecoderKind::RZF;
  if (upper == "SLNR") return PrecoderKind::SLNR;
  return std::nullopt;
}

void SystemConfig::validate() const {
  ChannelParams probe = channel;
  probe.num_users = 1;
  probe.validate();
  if (!(symbol_variance > 0.0) || !std::isfinite(symbol_variance))
    throw InvalidParameter("quantizer.symbol_variance", "must be positive");
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
    throw InvalidParameter("quantizer.noise_variance", "must be positive");
  if (snr_db.empty()) throw InvalidParameter("sweep.snr_db", "must list at least one value");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw InvalidParameter("sweep.snr_db", "values must be finite");
  }
  if (user_counts.empty()) throw InvalidParameter("sweep.user_counts", "must list at least one value");
  for (unsigned k : user_counts) {
    if (k < 1 || k > channel.num_antennas) {
      throw InvalidParameter("sweep.user_counts", "every K must satisfy 1 <= K <= num_antennas");
    }
  }
  if (precoders.empty()) throw InvalidParameter("sweep.precoders", "nothing to simulate");
  if (realizations < 1) throw InvalidParameter("run.realizations", "must be at least 1");
  solver.validate();
}

std::vector<std::string> SystemConfig::warnings() const {
  std::vector<std::string> out;
  if (symbol_variance != 1.0) {
    out.emplace_back(
        "quantizer.symbol_variance != 1: SINR signal terms omit sigma_s^2, results assume unit "
        "symbol energy");
  }
  return out;
}

QuantizerSpec SystemConfig::quantizer(double snr_db_value) const {
  return {symbol_variance, db_to_linear(snr_db_value) * noise_variance};
}

ChannelParams SystemConfig::channel_for(unsigned num_users) const {
  ChannelParams p = channel;
  p.num_users = num_users;
  return p;
}

std::uint64_t realization_seed(std::uint64_t master_seed, unsigned num_users,
                               unsigned realization) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32), std::uint32_t{num_users},
                    std::uint32_t{realization}};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

RealizationOutcome run_realization(const SystemConfig& config, unsigned num_users,
                                   double snr_db, PrecoderKind kind, unsigned realization) {
  const std::uint64_t seed = realization_seed(config.master_seed, num_users, realization);
  try {
    Rng rng(seed);
    const ChannelMatrix h = draw_channel_matrix(config.channel_for(num_users), rng);
    return simulate(config, h, config.quantizer(snr_db), kind);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "cell K=" << num_users << " snr_db=" << snr_db << " precoder=" << to_string(kind)
        << " realization=" << realization << " seed=" << seed << ": " << e.what();
    throw SimulationError(msg.str());
  }
}

CellResult run_cell(const SystemConfig& config, unsigned num_users, double snr_db,
                    PrecoderKind kind) {
  config.validate();
  std::vector<RealizationOutcome> outcomes(config.realizations);
  parallel_for(outcomes.size(), config.threads, [&](std::size_t r) {
    outcomes[r] = run_realization(config, num_users, snr_db, kind, static_cast<unsigned>(r));
  });
  return aggregate(num_users, snr_db, kind, std::move(outcomes));
}

ExperimentResult run_experiment(const SystemConfig& config) {
  config.validate();
  std::vector<CellSpec> cells;
  for (unsigned k : config.user_counts) {
    for (double snr : config.snr_db) {
      for (PrecoderKind kind : config.precoders) cells.push_back({k, snr, kind});
    }
  }

  const std::size_t per_cell = config.realizations;
  std::vector<std::vector<RealizationOutcome>> outcomes(cells.size(),
                                                        std::vector<RealizationOutcome>(per_cell));
  parallel_for(cells.size() * per_cell, config.threads, [&](std::size_t task) {
    const std::size_t c = task / per_cell;
    const std::size_t r = task % per_cell;
    outcomes[c][r] = run_realization(config, cells[c].num_users, cells[c].snr_db, cells[c].kind,
                                     static_cast<unsigned>(r));
  });

  ExperimentResult result;
  result.cells.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    result.cells.push_back(
        aggregate(cells[c].num_users, cells[c].snr_db, cells[c].kind, std::move(outcomes[c])));
  }
  return result;
}

}  // namespace onebit
