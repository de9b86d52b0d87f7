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


#ifndef ONEBIT_METRICS_HPP
#define ONEBIT_METRICS_HPP

#include <span>

#include "onebit/precoding.hpp"

namespace onebit {

struct LinkMetrics {
  arma::vec sinr;
  arma::vec rate;   // log2(1 + sinr), bits/s/Hz
  double sum_rate = 0.0;
};

struct SpectralEfficiency {
  double sum_se = 0.0;
  double per_user_se = 0.0;
  double std_error = 0.0;  // standard error of sum_se
  std::size_t realizations = 0;
};

/// h_k^H C_qq h_k + sigma_n^2 for every user.
arma::vec composite_noise(const ChannelMatrix& channel, const arma::cx_mat& cov_distortion,
                          double noise_variance);

arma::vec sinr_per_user(const ChannelMatrix& channel, const Precoder& precoder,
                        const arma::vec& gain, const arma::cx_mat& cov_distortion,
                        double noise_variance);

arma::vec slnr_per_user(const ChannelMatrix& channel, const Precoder& precoder,
                        const arma::vec& gain, const arma::cx_mat& cov_distortion,
                        double noise_variance);

LinkMetrics link_metrics(const arma::vec& sinr);

/// Evaluates a precoder under its own one-bit Bussgang model.
LinkMetrics evaluate_link(const ChannelMatrix& channel, const Precoder& precoder,
                          const BussgangModel& model, double noise_variance);

/// Sample mean of the per-realization sum rates and its standard error.
SpectralEfficiency spectral_efficiency(std::span<const double> sum_rates, std::size_t num_users);
SpectralEfficiency spectral_efficiency(std::span<const LinkMetrics> realizations);

}  // namespace onebit

#endif  // ONEBIT_METRICS_HPP
