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


#ifndef ONEBIT_QUANTIZATION_HPP
#define ONEBIT_QUANTIZATION_HPP

#include "onebit/common.hpp"

namespace onebit {

struct QuantizerSpec {
  double symbol_variance = 1.0;  // sigma_s^2
  double total_tx_power = 1.0;   // P_TX

  void validate() const;
};

/// Linear model of the one-bit DAC: x_q = A x + q with E{q x^H} = 0.
///
/// All matrices live in the antenna dimension (N x N). A is real diagonal
/// and stored as its diagonal.
struct BussgangModel {
  arma::vec gain;                   // diag(A)
  arma::cx_mat cov_unquantized;     // C_xx
  arma::cx_mat cov_quantized;       // C_xqxq
  arma::cx_mat cov_distortion;      // C_qq

  arma::mat weight_matrix() const { return arma::diagmat(gain); }
};

/// Per-entry one-bit quantizer with amplitude 1/sqrt(2) per real dimension, so
/// every output entry has unit modulus. sign(0) is taken as +1.
arma::cx_vec one_bit_quantize(const arma::cx_vec& x);

/// Column-wise version for a block of samples (N x S).
arma::cx_mat one_bit_quantize(const arma::cx_mat& x);

/// C_xx = (P_TX / K) W [diag(W^H W)]^{-1} W^H for the equal-power allocation.
/// Throws NumericalError if the columns of W are linearly dependent.
arma::cx_mat autocorr_unquantized(const arma::cx_mat& precoder, const QuantizerSpec& spec);

/// diag(A) = sqrt(2/pi) diag(C_xx)^{-1/2}. Throws NumericalError if any
/// antenna carries zero power.
arma::vec bussgang_gain_from_covariance(const arma::cx_mat& cov_unquantized);

/// diag(A) = sqrt(2K / (pi P_TX)) diag(W [diag(W^H W)]^{-1} W^H)^{-1/2}.
arma::vec bussgang_gain(const arma::cx_mat& precoder, const QuantizerSpec& spec);

/// Covariance of the one-bit quantizer output for a circularly-symmetric
/// Gaussian input with covariance C_xx (arcsin law). Unit diagonal.
arma::cx_mat arcsin_law(const arma::cx_mat& cov_unquantized);

/// C_qq = C_xqxq - A C_xx A^H.
arma::cx_mat distortion_covariance(const arma::vec& gain, const arma::cx_mat& cov_unquantized,
                                   const arma::cx_mat& cov_quantized);

/// Full model for a precoder under equal-power allocation.
BussgangModel build_bussgang_model(const arma::cx_mat& precoder, const QuantizerSpec& spec);

}  // namespace onebit

#endif  // ONEBIT_QUANTIZATION_HPP
