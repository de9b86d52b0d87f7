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


#include <doctest.h>

#include <cmath>
#include <map>
#include <tuple>

#include "onebit/simulation.hpp"

using namespace onebit;

namespace {

SystemConfig desk(unsigned realizations) {
  SystemConfig c;
  c.channel.num_antennas = 16;
  c.user_counts = {4, 8, 12, 16};
  c.realizations = realizations;
  c.master_seed = 2024;
  return c;
}

double mean_se(const CellResult& cell) { return cell.points.back().se.sum_se; }

bool same_cell(const CellResult& a, const CellResult& b) {
  if (a.num_users != b.num_users || a.snr_db != b.snr_db || a.kind != b.kind) return false;
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (p.iteration != q.iteration || p.se.sum_se != q.se.sum_se ||
        p.se.std_error != q.se.std_error || p.se.realizations != q.se.realizations)
      return false;
    if (!(p.mean_gap == q.mean_gap || (std::isnan(p.mean_gap) && std::isnan(q.mean_gap))))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("precoder names round-trip") {
  for (PrecoderKind k : {PrecoderKind::ZF, PrecoderKind::RZF, PrecoderKind::SLNR})
    CHECK(parse_precoder_kind(to_string(k)) == k);
  CHECK(parse_precoder_kind("slnr") == PrecoderKind::SLNR);
  CHECK_FALSE(parse_precoder_kind("mmse").has_value());
}

TEST_CASE("transmit power follows the SNR") {
  SystemConfig c;
  const QuantizerSpec q = c.quantizer(40.0);
  CHECK(q.total_tx_power == doctest::Approx(1e4));
  CHECK(q.symbol_variance == 1.0);
  CHECK(c.quantizer(10.0).total_tx_power == doctest::Approx(10.0));
}

TEST_CASE("config validation names the offending field") {
  auto field_of = [](SystemConfig c) -> std::string {
    try {
      c.validate();
    } catch (const InvalidParameter& e) {
      return e.field();
    }
    return {};
  };
  SystemConfig c;
  CHECK(field_of(c).empty());
  c.precoders.clear();
  CHECK(field_of(c) == "sweep.precoders");
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find("nothing to simulate") != std::string::npos);
  }
  c = {};
  c.user_counts = {101};
  CHECK(field_of(c) == "sweep.user_counts");
  c = {};
  c.snr_db.clear();
  CHECK(field_of(c) == "sweep.snr_db");
  c = {};
  c.realizations = 0;
  CHECK(field_of(c) == "run.realizations");
  c = {};
  c.channel.num_antennas = 0;
  CHECK(field_of(c) == "channel.num_antennas");
  c = {};
  c.noise_variance = 0.0;
  CHECK(field_of(c) == "quantizer.noise_variance");
}

TEST_CASE("non-unit symbol variance raises a warning") {
  SystemConfig c;
  CHECK(c.warnings().empty());
  c.symbol_variance = 2.0;
  CHECK(c.warnings().size() == 1);
}

TEST_CASE("realization seeds depend on master seed, K and index only") {
  const auto s = realization_seed(7, 8, 3);
  CHECK(s == realization_seed(7, 8, 3));
  CHECK(s != realization_seed(8, 8, 3));
  CHECK(s != realization_seed(7, 9, 3));
  CHECK(s != realization_seed(7, 8, 4));
  CHECK(realization_seed(1ull << 32, 8, 3) != realization_seed(0, 8, 3));
}

TEST_CASE("all precoders see the same channel realization") {
  SystemConfig c = desk(1);
  Rng rng(realization_seed(c.master_seed, 8, 0));
  const ChannelMatrix h = draw_channel_matrix(c.channel_for(8), rng);
  const QuantizerSpec spec = c.quantizer(10.0);
  const arma::cx_mat w = zf_precoder(h);
  const double zf_rate =
      evaluate_link(h, make_precoder(w, spec), build_bussgang_model(w, spec), 1.0).sum_rate;
  CHECK(run_realization(c, 8, 10.0, PrecoderKind::ZF, 0).sum_rate.at(0) == zf_rate);

  const SlnrResult res = slnr_precoder(h, spec, 1.0, c.solver);
  const double slnr_rate = evaluate_link(h, res.precoder, res.model, 1.0).sum_rate;
  const RealizationOutcome o = run_realization(c, 8, 10.0, PrecoderKind::SLNR, 0);
  CHECK(o.sum_rate.back() == slnr_rate);
  CHECK(o.sum_rate.size() == c.solver.max_iterations);
  CHECK(o.gaps.size() == c.solver.max_iterations);
  CHECK(o.iterations_used == res.trace.iterations_used);
}

TEST_CASE("single-realization cell is reproducible") {
  const SystemConfig c = desk(1);
  for (PrecoderKind k : {PrecoderKind::ZF, PrecoderKind::RZF, PrecoderKind::SLNR}) {
    CHECK(same_cell(run_cell(c, 12, 40.0, k), run_cell(c, 12, 40.0, k)));
  }
}

TEST_CASE("cell results do not depend on thread count") {
  SystemConfig c = desk(12);
  c.threads = 1;
  const ExperimentResult a = run_experiment(c);
  c.threads = 4;
  const ExperimentResult b = run_experiment(c);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(same_cell(a.cells[i], b.cells[i]));
}

TEST_CASE("sweep order does not change any cell") {
  SystemConfig c = desk(6);
  const ExperimentResult fwd = run_experiment(c);
  c.user_counts = {16, 12, 8, 4};
  c.snr_db = {40.0, 10.0};
  c.precoders = {PrecoderKind::SLNR, PrecoderKind::ZF, PrecoderKind::RZF};
  const ExperimentResult rev = run_experiment(c);
  std::map<std::tuple<unsigned, double, PrecoderKind>, const CellResult*> index;
  for (const auto& cell : rev.cells) index[{cell.num_users, cell.snr_db, cell.kind}] = &cell;
  REQUIRE(index.size() == fwd.cells.size());
  for (const auto& cell : fwd.cells) {
    CHECK(same_cell(cell, *index.at({cell.num_users, cell.snr_db, cell.kind})));
  }
}

TEST_CASE("experiment cells are ordered users x snr x precoder") {
  SystemConfig c = desk(2);
  c.user_counts = {4, 8};
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.cells.size() == 2 * 2 * 3);
  CHECK(r.cells[0].num_users == 4);
  CHECK(r.cells[0].snr_db == 10.0);
  CHECK(r.cells[0].kind == PrecoderKind::ZF);
  CHECK(r.cells[5].kind == PrecoderKind::SLNR);
  CHECK(r.cells[5].snr_db == 40.0);
  CHECK(r.cells[6].num_users == 8);
  for (const auto& cell : r.cells) {
    CHECK(cell.realizations.size() == 2);
    for (const auto& p : cell.points) {
      CHECK(std::isfinite(p.se.sum_se));
      CHECK(p.se.sum_se >= 0.0);
    }
    if (cell.kind == PrecoderKind::SLNR) {
      CHECK(cell.points.size() == 5);
      CHECK(cell.points.front().iteration == 1);
      CHECK(cell.points.back().iteration == 5);
    } else {
      CHECK(cell.points.size() == 1);
      CHECK(cell.points.front().iteration == 0);
      CHECK(std::isnan(cell.points.front().mean_gap));
    }
  }
}

TEST_CASE("failed realizations carry cell context") {
  SystemConfig c = desk(3);
  c.solver.initializer = Initializer::Provided;  // no weights supplied
  try {
    run_cell(c, 8, 10.0, PrecoderKind::SLNR);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    const std::string what = e.what();
    CHECK(what.find("cell K=8") != std::string::npos);
    CHECK(what.find("precoder=SLNR") != std::string::npos);
    CHECK(what.find("realization=0") != std::string::npos);
    CHECK(what.find("seed=") != std::string::npos);
  }
}

TEST_CASE("precoder ordering at half load and 10 dB") {
  const SystemConfig c = desk(100);
  const double zf = mean_se(run_cell(c, 8, 10.0, PrecoderKind::ZF));
  const double rzf = mean_se(run_cell(c, 8, 10.0, PrecoderKind::RZF));
  const double slnr = mean_se(run_cell(c, 8, 10.0, PrecoderKind::SLNR));
  CHECK(slnr >= rzf);
  CHECK(rzf >= zf);
}

TEST_CASE("further SLNR iterations help at full load") {
  const SystemConfig c = desk(100);
  const CellResult cell = run_cell(c, 16, 10.0, PrecoderKind::SLNR);
  CHECK(cell.points.back().se.sum_se >= cell.points.front().se.sum_se);
}

TEST_CASE("standard error shrinks with the square root of the realization count") {
  SystemConfig c = desk(100);
  const double se100 = run_cell(c, 8, 10.0, PrecoderKind::RZF).points[0].se.std_error;
  c.realizations = 400;
  const double se400 = run_cell(c, 8, 10.0, PrecoderKind::RZF).points[0].se.std_error;
  CHECK(se100 / se400 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("RZF degrades toward full load at 40 dB while SLNR holds") {
  const SystemConfig c = desk(200);
  double prev = HUGE_VAL;
  for (unsigned k : {8u, 12u, 16u}) {
    const double rzf = mean_se(run_cell(c, k, 40.0, PrecoderKind::RZF));
    CHECK(rzf <= prev);
    prev = rzf;
  }
  const CellResult small = run_cell(c, 4, 40.0, PrecoderKind::SLNR);
  const CellResult full = run_cell(c, 16, 40.0, PrecoderKind::SLNR);
  CHECK(mean_se(full) >= mean_se(small));
}
