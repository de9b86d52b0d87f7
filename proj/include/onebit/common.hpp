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

#ifndef ONEBIT_COMMON_HPP
#define ONEBIT_COMMON_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace onebit {

using cx = std::complex<double>;
using Rng = std::mt19937_64;

/// Raised when a numerical routine cannot produce a meaningful result
/// (singular systems, silent antennas, non-finite iterates).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter outside its valid domain. `field` is the dotted config key.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline constexpr double kPi = std::numbers::pi;

// Relative tolerance for PSD checks on Hermitian covariances.
inline constexpr double kPsdTolerance = 1e-9;

// Normalized correlations in (1, 1 + tol] are clamped to 1 before arcsin.
inline constexpr double kCorrelationClampTolerance = 1e-9;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Smallest eigenvalue of the Hermitian part of `m`, divided by the largest
/// eigenvalue magnitude. Returns 0 for the zero matrix.
double min_relative_eigenvalue(const arma::cx_mat& m);

}  // namespace onebit

#endif  // ONEBIT_COMMON_HPP
