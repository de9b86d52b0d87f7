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


#include "onebit/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

void ChannelParams::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw InvalidParameter(field, what);
  };
  require(num_antennas >= 1, "channel.num_antennas", "must be at least 1");
  require(num_users >= 1, "channel.num_users", "must be at least 1");
  require(num_paths >= 1, "channel.num_paths", "must be at least 1");
  require(std::isfinite(path_gain_variance) && path_gain_variance > 0,
          "channel.path_gain_variance", "must be positive");
  require(std::isfinite(angular_spread_deg) && angular_spread_deg > 0,
          "channel.angular_spread_deg", "must be positive");
  require(std::isfinite(element_spacing) && element_spacing > 0, "channel.element_spacing",
          "must be positive");
  require(sector_min_deg >= 0.0 && sector_max_deg <= 180.0 && sector_min_deg <= sector_max_deg,
          "channel.sector_deg", "must be an interval inside [0, 180]");
}

arma::cx_vec steering_vector(double theta_deg, arma::uword n, double spacing) {
  arma::cx_vec a(n);
  const double phase_step = -2.0 * kPi * spacing * std::cos(theta_deg * kPi / 180.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (arma::uword i = 0; i < n; ++i) {
    a[i] = std::polar(scale, phase_step * static_cast<double>(i));
  }
  return a;
}

arma::cx_vec channel_from_paths(const ChannelParams& params,
                                std::span<const PathComponent> paths) {
  arma::cx_vec h(params.num_antennas, arma::fill::zeros);
  for (const auto& path : paths) {
    h += path.gain * steering_vector(path.aod_deg, params.num_antennas, params.element_spacing);
  }
  return h;
}

double sample_laplace(double mean, double scale, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double p = 0.0;
  while (p == 0.0) p = uniform(rng);
  if (p < 0.5) return mean + scale * std::log(2.0 * p);
  return mean - scale * std::log(2.0 * (1.0 - p));
}

cx sample_complex_gaussian(double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

std::vector<PathComponent> draw_paths(const ChannelParams& params, double mean_aod_deg,
                                      Rng& rng) {
  std::vector<PathComponent> paths;
  paths.reserve(params.num_paths);
  const double scale = params.laplace_scale_deg();
  for (arma::uword l = 0; l < params.num_paths; ++l) {
    const cx gain = sample_complex_gaussian(params.path_gain_variance, rng);
    const double aod = sample_laplace(mean_aod_deg, scale, rng);
    paths.push_back({gain, aod});
  }
  return paths;
}

arma::cx_vec draw_user_channel(const ChannelParams& params, double mean_aod_deg, Rng& rng) {
  const auto paths = draw_paths(params, mean_aod_deg, rng);
  return channel_from_paths(params, paths);
}

ChannelMatrix draw_channel_matrix(const ChannelParams& params, Rng& rng) {
  params.validate();
  std::uniform_real_distribution<double> sector(params.sector_min_deg, params.sector_max_deg);
  ChannelMatrix h(params.num_antennas, params.num_users);
  for (arma::uword k = 0; k < params.num_users; ++k) {
    const double mean_aod = sector(rng);
    h.col(k) = draw_user_channel(params, mean_aod, rng);
  }
  return h;
}

}  // namespace onebit
