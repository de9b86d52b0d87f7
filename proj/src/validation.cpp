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


#include "onebit/validation.hpp"

#include <algorithm>
#include <cmath>

#include "onebit/channel.hpp"
#include "onebit/metrics.hpp"
#include "onebit/precoding.hpp"
#include "onebit/quantization.hpp"

namespace onebit {

namespace {

arma::cx_mat random_complex(arma::uword rows, arma::uword cols, Rng& rng) {
  arma::cx_mat m(rows, cols);
  for (auto& v : m) v = sample_complex_gaussian(1.0, rng);
  return m;
}

// Sample second-order moments of x = W P s, x_q = Q(x) and q = x_q - A x.
struct SampleMoments {
  arma::cx_mat xx, qx, qq_out, dx, dd;
};

SampleMoments sample_moments(const arma::cx_mat& w, const QuantizerSpec& spec,
                             const arma::vec& gain, std::size_t samples, Rng& rng) {
  const arma::uword n = w.n_rows;
  const arma::uword k = w.n_cols;
  const arma::cx_mat wp = w * arma::diagmat(arma::conv_to<arma::cx_vec>::from(
                                  power_allocation(w, spec)));
  SampleMoments m{arma::cx_mat(n, n, arma::fill::zeros), arma::cx_mat(n, n, arma::fill::zeros),
                  arma::cx_mat(n, n, arma::fill::zeros), arma::cx_mat(n, n, arma::fill::zeros),
                  arma::cx_mat(n, n, arma::fill::zeros)};
  const arma::cx_vec a = arma::conv_to<arma::cx_vec>::from(gain);
  constexpr std::size_t kBatch = 50000;
  for (std::size_t done = 0; done < samples; done += kBatch) {
    const std::size_t b = std::min(kBatch, samples - done);
    arma::cx_mat s(k, b);
    for (auto& v : s) v = sample_complex_gaussian(spec.symbol_variance, rng);
    const arma::cx_mat x = wp * s;
    const arma::cx_mat xq = one_bit_quantize(x);
    arma::cx_mat d = xq;
    d -= x.each_col() % a;
    m.xx += x * x.t();
    m.qx += xq * x.t();
    m.qq_out += xq * xq.t();
    m.dx += d * x.t();
    m.dd += d * d.t();
  }
  const double inv = 1.0 / static_cast<double>(samples);
  m.xx *= inv;
  m.qx *= inv;
  m.qq_out *= inv;
  m.dx *= inv;
  m.dd *= inv;
  return m;
}

double rel(const arma::cx_mat& a, const arma::cx_mat& b) {
  return arma::norm(a - b, "fro") / arma::norm(b, "fro");
}

double modified_slnr(const arma::cx_vec& w, const arma::cx_mat& eff_channel, arma::uword user,
                     double regularizer) {
  const double num = std::norm(arma::cdot(eff_channel.col(user), w));
  const arma::cx_vec hw = eff_channel.t() * w;
  const double den = arma::accu(arma::square(arma::abs(hw))) + regularizer * std::pow(arma::norm(w), 2);
  return num / den;
}

}  // namespace

std::vector<CheckResult> run_validation(ValidationLevel level, std::uint64_t seed) {
  const bool quick = level == ValidationLevel::Quick;
  const std::size_t samples = quick ? 100000 : 1000000;
  const double relax = quick ? 3.0 : 1.0;
  const int precoders = quick ? 5 : 20;
  Rng rng(seed);
  std::vector<CheckResult> out;

  {
    // Scalar identities for N = K = 1.
    const QuantizerSpec spec{1.0, 1.0};
    const arma::cx_mat w{cx(0.3, -1.7)};
    const BussgangModel m = build_bussgang_model(w, spec);
    const double err = std::max(std::abs(m.gain[0] - std::sqrt(2.0 / kPi)),
                                std::abs(m.cov_distortion(0, 0).real() - (1.0 - 2.0 / kPi)));
    out.push_back({"scalar_bussgang_identities", err, 1e-12, err < 1e-12});
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const arma::cx_mat h = random_complex(8, 3, rng);
      const arma::cx_mat w = zf_precoder(h);
      worst = std::max(worst, arma::norm(h.t() * w - arma::eye<arma::cx_mat>(3, 3), "fro"));
    }
    out.push_back({"zf_identity", worst, 1e-10, worst < 1e-10});
  }

  double cross = 0.0, arcsin = 0.0, orth = 0.0, distortion = 0.0;
  for (int t = 0; t < precoders; ++t) {
    std::uniform_int_distribution<int> n_dist(4, 16);
    const arma::uword n = static_cast<arma::uword>(n_dist(rng));
    std::uniform_int_distribution<int> k_dist(2, static_cast<int>(std::min<arma::uword>(8, n)));
    const arma::uword k = static_cast<arma::uword>(k_dist(rng));
    const arma::cx_mat w = random_complex(n, k, rng);
    const QuantizerSpec spec{1.0, static_cast<double>(k)};
    const BussgangModel model = build_bussgang_model(w, spec);
    const SampleMoments m = sample_moments(w, spec, model.gain, samples, rng);
    const arma::cx_mat a_cxx = arma::diagmat(arma::conv_to<arma::cx_vec>::from(model.gain)) *
                               model.cov_unquantized;
    cross = std::max(cross, rel(a_cxx, m.qx));
    arcsin = std::max(arcsin, rel(m.qq_out, model.cov_quantized));
    orth = std::max(orth, arma::norm(m.dx, "fro") / arma::norm(model.cov_unquantized, "fro"));
    distortion = std::max(distortion, rel(m.dd, model.cov_distortion));
  }
  out.push_back({"bussgang_cross_correlation", cross, 0.01 * relax, cross < 0.01 * relax});
  out.push_back({"arcsin_law_sampling", arcsin, 0.01 * relax, arcsin < 0.01 * relax});
  out.push_back({"bussgang_orthogonality", orth, 0.01 * relax, orth < 0.01 * relax});
  out.push_back({"distortion_covariance_sampling", distortion, 0.02 * relax,
                 distortion < 0.02 * relax});

  {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const arma::cx_mat h = random_complex(8, 3, rng);
      const QuantizerSpec spec{1.0, 3.0};
      // Push-through form H (H^H H + c I_K)^{-1}, independent of the N x N solve.
      const double c = 3.0 * spec.symbol_variance * 1.0 / spec.total_tx_power;
      const arma::cx_mat rzf =
          h * arma::inv(h.t() * h + c * arma::eye<arma::cx_mat>(3, 3));
      const arma::vec ones(8, arma::fill::ones);
      const arma::cx_mat zero(8, 8, arma::fill::zeros);
      for (arma::uword u = 0; u < 3; ++u) {
        const arma::cx_vec w = slnr_precoder_column(h, u, ones, zero, spec, 1.0);
        worst = std::max(worst, arma::norm(w - rzf.col(u)) / arma::norm(rzf.col(u)));
      }
    }
    out.push_back({"rzf_reduction", worst, 1e-10, worst < 1e-10});
  }
  {
    int violations = 0;
    std::uniform_real_distribution<double> log_step(-3.0, 0.0);
    for (int t = 0; t < 50; ++t) {
      const arma::cx_mat h = random_complex(8, 3, rng);
      const QuantizerSpec spec{1.0, 10.0};
      const BussgangModel model = build_bussgang_model(zf_precoder(h), spec);
      const arma::uword user = static_cast<arma::uword>(t % 3);
      const arma::cx_vec w = slnr_precoder_column(h, user, model.gain, model.cov_distortion,
                                                  spec, 1.0);
      arma::cx_mat eff = h;
      eff.each_col() %= arma::conv_to<arma::cx_vec>::from(model.gain);
      const double reg = 3.0 / spec.total_tx_power *
                         composite_noise(h, model.cov_distortion, 1.0)[user];
      const double best = modified_slnr(w, eff, user, reg);
      const arma::cx_vec unit = w / arma::norm(w);
      for (int p = 0; p < 100; ++p) {
        arma::cx_vec dir = random_complex(8, 1, rng);
        dir /= arma::norm(dir);
        const arma::cx_vec trial = unit + std::pow(10.0, log_step(rng)) * dir;
        if (modified_slnr(trial, eff, user, reg) > best * (1.0 + 1e-12)) ++violations;
      }
    }
    out.push_back({"rayleigh_quotient_maximality", static_cast<double>(violations), 0.0,
                   violations == 0});
  }
  return out;
}

}  // namespace onebit
