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

#include "onebit/metrics.hpp"
#include "onebit/precoding.hpp"
#include "oracles.hpp"

using namespace onebit;

namespace {

arma::cx_mat random_channel(arma::uword n, arma::uword k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_complex(n, k, rng);
}

ChannelMatrix desk_channel(arma::uword k, std::uint64_t seed) {
  ChannelParams p;
  p.num_antennas = 16;
  p.num_users = k;
  Rng rng(seed);
  return draw_channel_matrix(p, rng);
}

template <class Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

double cosine(const arma::cx_vec& a, const arma::cx_vec& b) {
  return std::abs(arma::cdot(a, b)) / (arma::norm(a) * arma::norm(b));
}

}  // namespace

TEST_CASE("scalar zero-forcing inverts the channel") {
  const arma::cx_mat h = arma::cx_mat(1, 1).fill(cx(0.6, -0.8) * 2.0);
  const arma::cx_mat w = zf_precoder(h);
  CHECK(std::abs(w(0, 0) - h(0, 0) / std::norm(h(0, 0))) < 1e-15);
  CHECK(std::abs(std::conj(h(0, 0)) * w(0, 0) - cx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("zero-forcing of orthonormal columns returns the channel") {
  arma::cx_mat q, r;
  arma::qr_econ(q, r, random_channel(10, 4, 1));
  CHECK(arma::norm(zf_precoder(q) - q, "fro") < 1e-12);
}

TEST_CASE("zero-forcing nulls interference") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const arma::cx_mat h = random_channel(8, 3, seed);
    const arma::cx_mat w = zf_precoder(h);
    CHECK(arma::norm(h.t() * w - arma::cx_mat(3, 3, arma::fill::eye), "fro") < 1e-10);
  }
}

TEST_CASE("zero-forcing rejects rank-deficient channels") {
  CHECK(error_of([] { zf_precoder(random_channel(2, 3, 2)); }) == "rank-deficient channel");
  arma::cx_mat h = random_channel(4, 2, 3);
  h.col(1).zeros();
  CHECK(error_of([&] { zf_precoder(h); }) == "rank-deficient channel");
  arma::cx_mat dup(4, 2, arma::fill::zeros);
  dup(0, 0) = dup(0, 1) = 1.0;
  CHECK(error_of([&] { zf_precoder(dup); }) == "rank-deficient channel");
}

TEST_CASE("scalar RZF") {
  const arma::cx_mat h = arma::cx_mat(1, 1).fill(cx(1.5, 0.5));
  const QuantizerSpec spec{2.0, 4.0};
  const double noise = 0.7;
  const arma::cx_mat w = rzf_precoder(h, spec, noise);
  const cx expected = h(0, 0) / (std::norm(h(0, 0)) + 2.0 * 0.7 / 4.0);
  CHECK(std::abs(w(0, 0) - expected) < 1e-14);
}

TEST_CASE("RZF approaches ZF directions as the noise vanishes") {
  const arma::cx_mat h = random_channel(8, 3, 4);
  const arma::cx_mat zf = zf_precoder(h);
  const QuantizerSpec spec{1.0, 3.0};
  double prev = 0.0;
  for (double noise : {1.0, 1e-2, 1e-4, 1e-8}) {
    const arma::cx_mat w = rzf_precoder(h, spec, noise);
    double worst = 1.0;
    for (arma::uword k = 0; k < 3; ++k) worst = std::min(worst, cosine(w.col(k), zf.col(k)));
    CHECK(worst >= prev - 1e-12);
    prev = worst;
  }
  CHECK(prev > 1.0 - 1e-10);
}

TEST_CASE("RZF matches the ridge pseudo-inverse") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const arma::cx_mat h = random_channel(8, 3, 50 + seed);
    const QuantizerSpec spec{1.0, 3.0};
    const arma::cx_mat w = rzf_precoder(h, spec, 1.0);
    const arma::cx_mat ref = oracle::ridge_pinv(h, 3.0 * 1.0 * 1.0 / 3.0);
    CHECK(arma::norm(w - ref, "fro") / arma::norm(ref, "fro") < 1e-10);
  }
}

TEST_CASE("power allocation equalizes per-user transmit power") {
  arma::cx_mat q, r;
  arma::qr_econ(q, r, random_channel(6, 3, 5));
  const arma::vec p_id = power_allocation(q, QuantizerSpec{1.0, 3.0});
  CHECK(arma::norm(p_id - arma::vec(3, arma::fill::ones)) < 1e-14);

  const arma::cx_mat w = random_channel(9, 4, 6);
  const QuantizerSpec spec{1.3, 5.0};
  const arma::vec p = power_allocation(w, spec);
  double total = 0.0;
  arma::vec scaled(4);
  for (arma::uword k = 0; k < 4; ++k) {
    const double e = std::pow(arma::norm(w.col(k)), 2);
    total += p[k] * p[k] * spec.symbol_variance * e;
    scaled[k] = p[k] * arma::norm(w.col(k));
    CHECK(p[k] * p[k] * spec.symbol_variance * e == doctest::Approx(5.0 / 4.0).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(5.0).epsilon(1e-12));
  CHECK((scaled.max() - scaled.min()) / scaled.max() < 1e-12);

  arma::cx_mat w2 = w;
  w2.col(2) *= 7.5;
  const arma::vec p2 = power_allocation(w2, spec);
  CHECK(p2[2] == doctest::Approx(p[2] / 7.5).epsilon(1e-12));
  CHECK(arma::norm(p2[2] * w2.col(2) - p[2] * w.col(2)) < 1e-12);
}

TEST_CASE("power allocation rejects a zero column") {
  arma::cx_mat w = random_channel(4, 3, 7);
  w.col(0).zeros();
  CHECK(error_of([&] { power_allocation(w, QuantizerSpec{}); }) == "degenerate precoder column");
}

TEST_CASE("SLNR column without quantization is the RZF column") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const arma::uword n = 4 + seed % 12;
    const arma::uword k = 1 + seed % n;
    const arma::cx_mat h = random_channel(n, k, 200 + seed);
    const QuantizerSpec spec{1.0, 0.5 + seed};
    const double noise = 0.3 + 0.1 * static_cast<double>(seed % 7);
    const arma::vec a(n, arma::fill::ones);
    const arma::cx_mat cqq(n, n, arma::fill::zeros);
    const arma::cx_mat rzf = rzf_precoder(h, spec, noise);
    for (arma::uword u = 0; u < k; ++u) {
      const arma::cx_vec w = slnr_precoder_column(h, u, a, cqq, spec, noise);
      CHECK(arma::norm(w - rzf.col(u)) / arma::norm(rzf.col(u)) < 1e-10);
    }
  }
}

TEST_CASE("scalar SLNR column") {
  const arma::cx_mat h = arma::cx_mat(1, 1).fill(cx(0.4, 1.1));
  const QuantizerSpec spec{1.0, 1.0};
  const double a = std::sqrt(2.0 / kPi);
  const double cqq = 1.0 - 2.0 / kPi;
  const double noise = 1.0;
  const arma::cx_vec w =
      slnr_precoder_column(h, 0, arma::vec{a}, arma::cx_mat(1, 1).fill(cx(cqq, 0.0)), spec, noise);
  const double h2 = std::norm(h(0, 0));
  const cx expected = a * h(0, 0) / (a * a * h2 + (1.0 / 1.0) * (cqq * h2 + noise));
  CHECK(std::abs(w[0] - expected) < 1e-15);
}

TEST_CASE("SLNR column maximizes the generalized Rayleigh quotient") {
  std::mt19937_64 rng(31);
  const double steps[] = {1e-3, 1e-2, 1e-1, 1.0};
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const arma::cx_mat h = random_channel(8, 3, 300 + seed);
    const QuantizerSpec spec{1.0, 10.0};
    const BussgangModel m = build_bussgang_model(zf_precoder(h), spec);
    const arma::cx_mat ht = arma::diagmat(m.gain) * h;
    const arma::vec sig = composite_noise(h, m.cov_distortion, 1.0);
    for (arma::uword u = 0; u < 3; ++u) {
      const arma::cx_vec w = slnr_precoder_column(h, u, m.gain, m.cov_distortion, spec, 1.0);
      const double reg = 3.0 * sig[u] / 10.0;
      const double best = oracle::rayleigh_quotient(w, ht, u, reg);
      for (int t = 0; t < 100; ++t) {
        arma::cx_vec d = oracle::random_complex(8, 1, rng);
        d /= arma::norm(d);
        const arma::cx_vec probe = w / arma::norm(w) + steps[t % 4] * d;
        if (oracle::rayleigh_quotient(probe, ht, u, reg) > best * (1.0 + 1e-13)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("SLNR column rejects a zero user channel and an indefinite distortion term") {
  arma::cx_mat h = random_channel(4, 2, 9);
  const arma::vec a(4, arma::fill::ones);
  const arma::cx_mat cqq(4, 4, arma::fill::zeros);
  const QuantizerSpec spec;
  arma::cx_mat hz = h;
  hz.col(1).zeros();
  CHECK(error_of([&] { slnr_precoder_column(hz, 0, a, cqq, spec, 1.0); }) == "zero user channel");

  const arma::cx_mat negative = -10.0 * arma::cx_mat(4, 4, arma::fill::eye);
  CHECK(error_of([&] { slnr_precoder_column(h, 0, a, negative, spec, 1.0); }) ==
        "numerical breakdown");
  CHECK_THROWS_AS(slnr_precoder_column(h, 2, a, cqq, spec, 1.0), std::out_of_range);
}

TEST_CASE("a huge tolerance returns the initializer after one iteration") {
  const ChannelMatrix h = desk_channel(8, 1);
  SlnrSolverConfig cfg;
  cfg.tolerance = 1e300;
  const SlnrResult res = slnr_precoder(h, QuantizerSpec{1.0, 10.0}, 1.0, cfg);
  CHECK(res.trace.iterations_used == 1);
  CHECK(res.trace.converged);
  CHECK(res.trace.gaps.size() == 1);
  CHECK(res.trace.iterates.empty());
  CHECK(arma::approx_equal(res.precoder.weights, zf_precoder(h), "absdiff", 0.0));
}

TEST_CASE("solver defaults and validation") {
  const SlnrSolverConfig def;
  CHECK(def.max_iterations == 5);
  CHECK(def.initializer == Initializer::ZeroForcing);
  SlnrSolverConfig bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = {};
  bad.tolerance = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = {};
  bad.initializer = Initializer::Provided;
  CHECK_THROWS_AS(slnr_precoder(desk_channel(4, 2), QuantizerSpec{}, 1.0, bad),
                  std::invalid_argument);
}

TEST_CASE("solver trace and result are consistent") {
  const ChannelMatrix h = desk_channel(12, 3);
  const QuantizerSpec spec{1.0, 10.0};
  SlnrSolverConfig cfg;
  cfg.max_iterations = 5;
  const SlnrResult res = slnr_precoder(h, spec, 1.0, cfg);
  CHECK(res.trace.gaps.size() == res.trace.iterations_used);
  CHECK(res.trace.iterations_used <= 5);
  for (double g : res.trace.gaps) CHECK(std::isfinite(g));
  CHECK(res.trace.converged == (res.trace.gaps.back() <= res.trace.tolerance));
  const arma::cx_mat& final_w =
      res.trace.iterates.empty() ? zf_precoder(h) : res.trace.iterates.back();
  CHECK(arma::approx_equal(res.precoder.weights, final_w, "absdiff", 0.0));
  const BussgangModel m = build_bussgang_model(res.precoder.weights, spec);
  CHECK(arma::approx_equal(m.gain, res.model.gain, "absdiff", 0.0));
  // Every column is a closed-form SLNR solution under the previous model.
  if (!res.trace.iterates.empty()) {
    const arma::cx_mat prev = res.trace.iterates.size() > 1
                                  ? res.trace.iterates[res.trace.iterates.size() - 2]
                                  : zf_precoder(h);
    const BussgangModel pm = build_bussgang_model(prev, spec);
    for (arma::uword u = 0; u < h.n_cols; ++u) {
      const arma::cx_vec w = slnr_precoder_column(h, u, pm.gain, pm.cov_distortion, spec, 1.0);
      CHECK(arma::norm(w - final_w.col(u)) / arma::norm(w) < 1e-12);
    }
  }
}

TEST_CASE("converged solution is a fixed point within twice the tolerance") {
  const ChannelMatrix h = desk_channel(16, 4);
  const QuantizerSpec spec{1.0, 10.0};
  SlnrSolverConfig cfg;
  cfg.max_iterations = 200;
  const SlnrResult res = slnr_precoder(h, spec, 1.0, cfg);
  REQUIRE(res.trace.converged);
  const arma::cx_mat& w = res.precoder.weights;
  const BussgangModel m = build_bussgang_model(w, spec);
  arma::cx_mat next(w.n_rows, w.n_cols);
  for (arma::uword u = 0; u < w.n_cols; ++u)
    next.col(u) = slnr_precoder_column(h, u, m.gain, m.cov_distortion, spec, 1.0);
  CHECK(arma::norm(next - w, "fro") <= 2.0 * res.trace.tolerance);
}

TEST_CASE("alternative initializers") {
  const ChannelMatrix h = desk_channel(6, 5);
  const QuantizerSpec spec{1.0, 10.0};
  SlnrSolverConfig cfg;
  cfg.initializer = Initializer::RegularizedZeroForcing;
  cfg.tolerance = 1e300;
  CHECK(arma::approx_equal(slnr_precoder(h, spec, 1.0, cfg).precoder.weights,
                           rzf_precoder(h, spec, 1.0), "absdiff", 0.0));
  cfg.initializer = Initializer::Provided;
  cfg.initial_weights = random_channel(16, 6, 11);
  CHECK(arma::approx_equal(slnr_precoder(h, spec, 1.0, cfg).precoder.weights,
                           cfg.initial_weights, "absdiff", 0.0));
}

TEST_CASE("convergence gaps shrink at half load") {
  const QuantizerSpec spec{1.0, 10.0};
  int monotone = 0;
  const int runs = 100;
  for (int r = 0; r < runs; ++r) {
    const SlnrResult res = slnr_precoder(desk_channel(8, 1000 + r), spec, 1.0, SlnrSolverConfig{});
    const auto& g = res.trace.gaps;
    bool ok = true;
    for (std::size_t i = 1; i < g.size(); ++i) ok = ok && g[i] < g[i - 1];
    monotone += ok;
  }
  CHECK(monotone >= 95);
}
