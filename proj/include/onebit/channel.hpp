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


#ifndef ONEBIT_CHANNEL_HPP
#define ONEBIT_CHANNEL_HPP

#include <span>
#include <vector>

#include "onebit/common.hpp"

namespace onebit {

/// Clustered mmWave channel for K single-antenna users seen from an
/// N-element uniform linear array.
struct ChannelParams {
  arma::uword num_antennas = 100;
  arma::uword num_users = 10;
  arma::uword num_paths = 5;
  double path_gain_variance = 1.0;   // sigma_alpha^2
  double angular_spread_deg = 5.0;   // standard deviation of the Laplace AoD
  double sector_min_deg = 0.0;       // user mean AoD ~ U[sector_min, sector_max]
  double sector_max_deg = 90.0;
  double element_spacing = 0.5;      // d / lambda

  /// Throws InvalidParameter naming the offending field.
  void validate() const;

  /// Laplace scale b such that the AoD standard deviation is angular_spread_deg.
  double laplace_scale_deg() const { return angular_spread_deg / std::numbers::sqrt2; }
};

/// N x K matrix whose column k is the channel h_k of user k.
using ChannelMatrix = arma::cx_mat;

struct PathComponent {
  cx gain;
  double aod_deg;
};

/// ULA response a(theta), unit Euclidean norm:
/// [a]_i = exp(-j 2 pi spacing (i-1) cos(theta)) / sqrt(n).
arma::cx_vec steering_vector(double theta_deg, arma::uword n, double spacing = 0.5);

/// Superposition sum_l gain_l * a(aod_l) over the given paths.
arma::cx_vec channel_from_paths(const ChannelParams& params,
                                std::span<const PathComponent> paths);

/// One Laplace(mean, scale) draw via the inverse CDF.
double sample_laplace(double mean, double scale, Rng& rng);

/// One CN(0, variance) draw.
cx sample_complex_gaussian(double variance, Rng& rng);

/// L paths with CN(0, sigma_alpha^2) gains and Laplace AoDs around mean_aod_deg.
std::vector<PathComponent> draw_paths(const ChannelParams& params, double mean_aod_deg,
                                      Rng& rng);

arma::cx_vec draw_user_channel(const ChannelParams& params, double mean_aod_deg, Rng& rng);

/// Each user gets an independent mean AoD uniform over the sector, then an
/// independent set of paths. Columns are drawn in user order from `rng`.
ChannelMatrix draw_channel_matrix(const ChannelParams& params, Rng& rng);

}  // namespace onebit

#endif  // ONEBIT_CHANNEL_HPP
