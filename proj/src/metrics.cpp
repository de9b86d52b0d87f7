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


#include "onebit/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace onebit {

namespace {

// G(k, i) = h_k^H A w_i
arma::cx_mat effective_gains(const ChannelMatrix& channel, const arma::cx_mat& weights,
                             const arma::vec& gain) {
  arma::cx_mat aw = weights;
  aw.each_col() %= arma::conv_to<arma::cx_vec>::from(gain);
  return channel.t() * aw;
}

void check_dimensions(const ChannelMatrix& channel, const Precoder& precoder,
                      const arma::vec& gain, const arma::cx_mat& cov_distortion) {
  const arma::uword n = channel.n_rows;
  const arma::uword k = channel.n_cols;
  if (precoder.weights.n_rows != n || precoder.weights.n_cols != k || precoder.power.n_elem != k ||
      gain.n_elem != n || cov_distortion.n_rows != n || cov_distortion.n_cols != n) {
    throw std::invalid_argument("metrics: dimension mismatch");
  }
}

}  // namespace

arma::vec composite_noise(const ChannelMatrix& channel, const arma::cx_mat& cov_distortion,
                          double noise_variance) {
  const arma::cx_mat ch = cov_distortion * channel;
  arma::vec out(channel.n_cols);
  for (arma::uword k = 0; k < channel.n_cols; ++k) {
    const cx quad = arma::cdot(channel.col(k), ch.col(k));
    const double scale = arma::norm(channel.col(k)) * arma::norm(ch.col(k));
    if (std::abs(quad.imag()) > 1e-8 * scale + 1e-300) throw NumericalError("numerical breakdown");
    double value = quad.real();
    if (value < 0.0) {
      if (value < -kPsdTolerance * scale) throw NumericalError("numerical breakdown");
      value = 0.0;
    }
    out[k] = value + noise_variance;
  }
  return out;
}

arma::vec sinr_per_user(const ChannelMatrix& channel, const Precoder& precoder,
                        const arma::vec& gain, const arma::cx_mat& cov_distortion,
                        double noise_variance) {
  check_dimensions(channel, precoder, gain, cov_distortion);
  const arma::mat power = arma::square(arma::abs(effective_gains(channel, precoder.weights, gain)));
  const arma::rowvec p2 = arma::square(precoder.power).t();
  const arma::vec noise = composite_noise(channel, cov_distortion, noise_variance);

  arma::vec sinr(channel.n_cols);
  for (arma::uword k = 0; k < channel.n_cols; ++k) {
    const double desired = p2[k] * power(k, k);
    double interference = 0.0;
    for (arma::uword i = 0; i < channel.n_cols; ++i) {
      if (i != k) interference += p2[i] * power(k, i);
    }
    sinr[k] = desired / (interference + noise[k]);
  }
  return sinr;
}

arma::vec slnr_per_user(const ChannelMatrix& channel, const Precoder& precoder,
                        const arma::vec& gain, const arma::cx_mat& cov_distortion,
                        double noise_variance) {
  check_dimensions(channel, precoder, gain, cov_distortion);
  const arma::mat power = arma::square(arma::abs(effective_gains(channel, precoder.weights, gain)));
  const arma::vec p2 = arma::square(precoder.power);
  const arma::vec noise = composite_noise(channel, cov_distortion, noise_variance);

  arma::vec slnr(channel.n_cols);
  for (arma::uword k = 0; k < channel.n_cols; ++k) {
    double leakage = 0.0;
    for (arma::uword i = 0; i < channel.n_cols; ++i) {
      if (i != k) leakage += power(i, k);
    }
    slnr[k] = p2[k] * power(k, k) / (p2[k] * leakage + noise[k]);
  }
  return slnr;
}

LinkMetrics link_metrics(const arma::vec& sinr) {
  LinkMetrics m;
  m.sinr = sinr;
  m.rate = arma::log2(1.0 + sinr);
  m.sum_rate = std::accumulate(m.rate.begin(), m.rate.end(), 0.0);
  return m;
}

LinkMetrics evaluate_link(const ChannelMatrix& channel, const Precoder& precoder,
                          const BussgangModel& model, double noise_variance) {
  return link_metrics(
      sinr_per_user(channel, precoder, model.gain, model.cov_distortion, noise_variance));
}

SpectralEfficiency spectral_efficiency(std::span<const double> sum_rates, std::size_t num_users) {
  if (sum_rates.empty()) throw std::invalid_argument("spectral_efficiency: no realizations");
  if (num_users == 0) throw std::invalid_argument("spectral_efficiency: no users");
  const double n = static_cast<double>(sum_rates.size());
  const double mean = std::accumulate(sum_rates.begin(), sum_rates.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : sum_rates) ss += (r - mean) * (r - mean);

  SpectralEfficiency se;
  se.sum_se = mean;
  se.per_user_se = mean / static_cast<double>(num_users);
  se.std_error = sum_rates.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  se.realizations = sum_rates.size();
  return se;
}

SpectralEfficiency spectral_efficiency(std::span<const LinkMetrics> realizations) {
  if (realizations.empty()) throw std::invalid_argument("spectral_efficiency: no realizations");
  std::vector<double> sums;
  sums.reserve(realizations.size());
  for (const auto& m : realizations) sums.push_back(m.sum_rate);
  return spectral_efficiency(sums, realizations.front().sinr.n_elem);
}

}  // namespace onebit
