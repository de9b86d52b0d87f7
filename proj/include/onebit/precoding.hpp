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


#ifndef ONEBIT_PRECODING_HPP
#define ONEBIT_PRECODING_HPP

#include <optional>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/quantization.hpp"

namespace onebit {

/// Linear precoder x = W P s. `power` holds diag(P).
struct Precoder {
  arma::cx_mat weights;
  arma::vec power;
};

enum class Initializer { ZeroForcing, RegularizedZeroForcing, Provided };

struct SlnrSolverConfig {
  unsigned max_iterations = 5;
  // Absolute Frobenius tolerance on ||W_k - W_{k-1}||. When unset the step is
  // compared against relative_tolerance * ||W_k||_F instead.
  std::optional<double> tolerance;
  double relative_tolerance = 1e-3;
  Initializer initializer = Initializer::ZeroForcing;
  arma::cx_mat initial_weights;  // used with Initializer::Provided

  void validate() const;
};

struct ConvergenceTrace {
  std::vector<double> gaps;                // ||W_k - W_{k-1}||_F per iteration
  std::vector<arma::cx_mat> iterates;      // accepted W after each update
  unsigned iterations_used = 0;
  bool converged = false;
  double tolerance = 0.0;  // threshold applied at the last iteration
};

struct SlnrResult {
  Precoder precoder;
  BussgangModel model;  // built from the returned weights
  ConvergenceTrace trace;
};

/// W = H (H^H H)^{-1}. Throws NumericalError("rank-deficient channel") when
/// K > N, a user channel is zero, or the Gram matrix is exactly singular.
arma::cx_mat zf_precoder(const ChannelMatrix& channel);

/// Column k is (H H^H + (K sigma_s^2 / P_TX) sigma_n^2 I)^{-1} h_k.
arma::cx_mat rzf_precoder(const ChannelMatrix& channel, const QuantizerSpec& spec,
                          double noise_variance);

/// diag(P) = sqrt(P_TX / (K sigma_s^2)) diag(W^H W)^{-1/2}.
arma::vec power_allocation(const arma::cx_mat& weights, const QuantizerSpec& spec);

Precoder make_precoder(arma::cx_mat weights, const QuantizerSpec& spec);

/// SLNR-maximizing column for user k (0-based) given the frozen Bussgang
/// gain and distortion covariance:
/// w_k = (A H H^H A + (K sigma_s^2 / P_TX)(h_k^H C_qq h_k + sigma_n^2) I)^{-1} A h_k.
arma::cx_vec slnr_precoder_column(const ChannelMatrix& channel, arma::uword user,
                                  const arma::vec& gain, const arma::cx_mat& cov_distortion,
                                  const QuantizerSpec& spec, double noise_variance);

/// Fixed-point iteration: each sweep builds the Bussgang model from the
/// current W and refreshes every column from that frozen model. Stops when
/// the Frobenius step is at most the tolerance (the previous iterate is kept)
/// or after max_iterations sweeps.
SlnrResult slnr_precoder(const ChannelMatrix& channel, const QuantizerSpec& spec,
                         double noise_variance, const SlnrSolverConfig& solver = {});

}  // namespace onebit

#endif  // ONEBIT_PRECODING_HPP
