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


#include "onebit/quantization.hpp"

#include <algorithm>
#include <cmath>

namespace onebit {

namespace {

constexpr double kOutputAmplitude = 0.70710678118654752440;  // 1/sqrt(2)

double signum(double v) { return v < 0.0 ? -1.0 : 1.0; }

// True when LU factorization of the Gram matrix hits an exact zero pivot.
bool gram_exactly_singular(const arma::cx_mat& gram) {
  arma::cx_mat l, u, p;
  if (!arma::lu(l, u, p, gram)) return true;
  const arma::vec pivots = arma::abs(u.diag());
  return !pivots.is_finite() || pivots.min() == 0.0;
}

// diag(W^H W)
arma::vec column_energies(const arma::cx_mat& w) {
  arma::vec d = arma::sum(arma::square(arma::abs(w)), 0).t();
  return d;
}

arma::cx_mat normalize_columns(const arma::cx_mat& w, const arma::vec& energies) {
  arma::cx_mat out = w;
  out.each_row() %= arma::conv_to<arma::cx_rowvec>::from(1.0 / arma::sqrt(energies).t());
  return out;
}

void make_hermitian(arma::cx_mat& m) {
  for (arma::uword j = 0; j < m.n_cols; ++j) {
    m(j, j) = cx(m(j, j).real(), 0.0);
    for (arma::uword i = j + 1; i < m.n_rows; ++i) {
      const cx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
}

}  // namespace

double min_relative_eigenvalue(const arma::cx_mat& m) {
  const arma::cx_mat herm = 0.5 * (m + m.t());
  const arma::vec eig = arma::eig_sym(herm);
  const double scale = arma::abs(eig).max();
  if (scale == 0.0) return 0.0;
  return eig.min() / scale;
}

void QuantizerSpec::validate() const {
  if (!(symbol_variance > 0.0) || !std::isfinite(symbol_variance))
    throw InvalidParameter("quantizer.symbol_variance", "must be positive");
  if (!(total_tx_power > 0.0) || !std::isfinite(total_tx_power))
    throw InvalidParameter("quantizer.total_tx_power", "must be positive");
}

arma::cx_vec one_bit_quantize(const arma::cx_vec& x) {
  arma::cx_vec out(x.n_elem);
  for (arma::uword i = 0; i < x.n_elem; ++i) {
    out[i] = cx(kOutputAmplitude * signum(x[i].real()), kOutputAmplitude * signum(x[i].imag()));
  }
  return out;
}

arma::cx_mat one_bit_quantize(const arma::cx_mat& x) {
  arma::cx_mat out(x.n_rows, x.n_cols);
  const cx* src = x.memptr();
  cx* dst = out.memptr();
  for (arma::uword i = 0; i < x.n_elem; ++i) {
    dst[i] = cx(kOutputAmplitude * signum(src[i].real()), kOutputAmplitude * signum(src[i].imag()));
  }
  return out;
}

arma::cx_mat autocorr_unquantized(const arma::cx_mat& precoder, const QuantizerSpec& spec) {
  spec.validate();
  const arma::uword num_users = precoder.n_cols;
  const arma::vec energies = column_energies(precoder);
  if (num_users == 0 || num_users > precoder.n_rows || energies.min() == 0.0 ||
      gram_exactly_singular(precoder.t() * precoder)) {
    throw NumericalError("precoder columns linearly dependent");
  }
  const arma::cx_mat normalized = normalize_columns(precoder, energies);
  arma::cx_mat cov = normalized * normalized.t();
  cov *= spec.total_tx_power / static_cast<double>(num_users);
  make_hermitian(cov);
  return cov;
}

arma::vec bussgang_gain_from_covariance(const arma::cx_mat& cov_unquantized) {
  const arma::vec power = arma::real(cov_unquantized.diag());
  if (power.is_empty() || !(power.min() > 0.0) || !power.is_finite()) {
    throw NumericalError("silent antenna: quantizer gain undefined");
  }
  return std::sqrt(2.0 / kPi) / arma::sqrt(power);
}

arma::vec bussgang_gain(const arma::cx_mat& precoder, const QuantizerSpec& spec) {
  spec.validate();
  const arma::vec energies = column_energies(precoder);
  if (precoder.n_cols == 0 || energies.min() == 0.0) {
    throw NumericalError("degenerate precoder column");
  }
  // diag(W [diag(W^H W)]^{-1} W^H), row by row.
  const arma::cx_mat normalized = normalize_columns(precoder, energies);
  const arma::vec load = arma::sum(arma::square(arma::abs(normalized)), 1);
  if (!(load.min() > 0.0)) throw NumericalError("silent antenna: quantizer gain undefined");
  const double k = static_cast<double>(precoder.n_cols);
  return std::sqrt(2.0 * k / (kPi * spec.total_tx_power)) / arma::sqrt(load);
}

arma::cx_mat arcsin_law(const arma::cx_mat& cov_unquantized) {
  const arma::uword n = cov_unquantized.n_rows;
  if (cov_unquantized.n_cols != n) throw std::invalid_argument("arcsin_law: matrix must be square");
  const arma::vec power = arma::real(cov_unquantized.diag());
  if (n > 0 && !(power.min() > 0.0)) throw NumericalError("invalid correlation: zero variance");
  const arma::vec inv_std = 1.0 / arma::sqrt(power);

  auto clamp = [](double r) {
    if (std::abs(r) > 1.0 + kCorrelationClampTolerance || std::isnan(r)) {
      throw NumericalError("invalid correlation");
    }
    return std::clamp(r, -1.0, 1.0);
  };

  arma::cx_mat out(n, n);
  const double scale = 2.0 / kPi;
  for (arma::uword j = 0; j < n; ++j) {
    out(j, j) = cx(1.0, 0.0);
    for (arma::uword i = j + 1; i < n; ++i) {
      // Use the upper triangle so the output is exactly Hermitian.
      const cx c = std::conj(cov_unquantized(j, i));
      const double norm = inv_std[i] * inv_std[j];
      const double re = clamp(c.real() * norm);
      const double im = clamp(c.imag() * norm);
      const cx v(scale * std::asin(re), scale * std::asin(im));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

arma::cx_mat distortion_covariance(const arma::vec& gain, const arma::cx_mat& cov_unquantized,
                                   const arma::cx_mat& cov_quantized) {
  const arma::uword n = gain.n_elem;
  if (cov_unquantized.n_rows != n || cov_unquantized.n_cols != n || cov_quantized.n_rows != n ||
      cov_quantized.n_cols != n) {
    throw std::invalid_argument("distortion_covariance: dimension mismatch");
  }
  arma::cx_mat out = cov_quantized;
  for (arma::uword j = 0; j < n; ++j) {
    for (arma::uword i = 0; i < n; ++i) {
      out(i, j) -= gain[i] * gain[j] * cov_unquantized(i, j);
    }
  }
  return out;
}

BussgangModel build_bussgang_model(const arma::cx_mat& precoder, const QuantizerSpec& spec) {
  BussgangModel model;
  model.cov_unquantized = autocorr_unquantized(precoder, spec);
  model.gain = bussgang_gain_from_covariance(model.cov_unquantized);
  model.cov_quantized = arcsin_law(model.cov_unquantized);
  model.cov_distortion = distortion_covariance(model.gain, model.cov_unquantized,
                                               model.cov_quantized);
  return model;
}

}  // namespace onebit
