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


#include "onebit/precoding.hpp"

#include <cmath>
#include <stdexcept>

#include "onebit/metrics.hpp"

namespace onebit {

namespace {

// Hermitian system shared by every column of one SLNR sweep:
// A H H^H A plus the per-user regularizer (K sigma_s^2 / P_TX) sigma_tilde_k^2.
struct SlnrSystem {
  arma::cx_mat effective_channel;  // A H
  arma::cx_mat gram;               // A H H^H A
  arma::vec regularizer;           // per user
};

SlnrSystem make_slnr_system(const ChannelMatrix& channel, const arma::vec& gain,
                            const arma::cx_mat& cov_distortion, const QuantizerSpec& spec,
                            double noise_variance) {
  const arma::uword n = channel.n_rows;
  if (gain.n_elem != n || cov_distortion.n_rows != n || cov_distortion.n_cols != n) {
    throw std::invalid_argument("slnr: dimension mismatch between channel and Bussgang model");
  }
  SlnrSystem sys;
  sys.effective_channel = channel;
  sys.effective_channel.each_col() %= arma::conv_to<arma::cx_vec>::from(gain);
  sys.gram = sys.effective_channel * sys.effective_channel.t();
  sys.gram = 0.5 * (sys.gram + sys.gram.t());

  for (arma::uword u = 0; u < channel.n_cols; ++u) {
    if (arma::norm(channel.col(u)) == 0.0) throw NumericalError("zero user channel");
  }
  const double k = static_cast<double>(channel.n_cols);
  const double scale = k * spec.symbol_variance / spec.total_tx_power;
  sys.regularizer = scale * composite_noise(channel, cov_distortion, noise_variance);
  return sys;
}

arma::cx_vec solve_column(const SlnrSystem& sys, arma::uword user) {
  arma::cx_mat m = sys.gram;
  m.diag() += sys.regularizer[user];
  arma::cx_vec w;
  const bool ok = arma::solve(w, m, sys.effective_channel.col(user),
                              arma::solve_opts::likely_sympd + arma::solve_opts::no_approx);
  if (!ok || !w.is_finite()) throw NumericalError("numerical breakdown");
  return w;
}

arma::cx_mat solve_all_columns(const SlnrSystem& sys) {
  arma::cx_mat w(sys.effective_channel.n_rows, sys.effective_channel.n_cols);
  for (arma::uword u = 0; u < w.n_cols; ++u) w.col(u) = solve_column(sys, u);
  return w;
}

}  // namespace

void SlnrSolverConfig::validate() const {
  if (max_iterations < 1) throw InvalidParameter("solver.max_iterations", "must be at least 1");
  if (tolerance && !(*tolerance > 0.0)) throw InvalidParameter("solver.tolerance", "must be positive");
  if (!(relative_tolerance > 0.0)) throw InvalidParameter("solver.tolerance", "must be positive");
}

arma::cx_mat zf_precoder(const ChannelMatrix& channel) {
  const arma::uword k = channel.n_cols;
  if (k == 0 || k > channel.n_rows) throw NumericalError("rank-deficient channel");
  const arma::rowvec energies = arma::sum(arma::square(arma::abs(channel)), 0);
  if (energies.min() == 0.0) throw NumericalError("rank-deficient channel");

  // LU without a conditioning cutoff: only an exact zero pivot is rejected.
  const arma::cx_mat gram = channel.t() * channel;
  arma::cx_mat solved;
  const bool ok = arma::solve(solved, gram, arma::cx_mat(channel.t()),
                              arma::solve_opts::fast + arma::solve_opts::no_approx);
  if (!ok || !solved.is_finite()) throw NumericalError("rank-deficient channel");
  return solved.t();
}

arma::cx_mat rzf_precoder(const ChannelMatrix& channel, const QuantizerSpec& spec,
                          double noise_variance) {
  spec.validate();
  const double k = static_cast<double>(channel.n_cols);
  arma::cx_mat m = channel * channel.t();
  m = 0.5 * (m + m.t());
  m.diag() += k * spec.symbol_variance * noise_variance / spec.total_tx_power;
  arma::cx_mat w;
  const bool ok = arma::solve(w, m, channel,
                              arma::solve_opts::likely_sympd + arma::solve_opts::no_approx);
  if (!ok || !w.is_finite()) throw NumericalError("numerical breakdown");
  return w;
}

arma::vec power_allocation(const arma::cx_mat& weights, const QuantizerSpec& spec) {
  spec.validate();
  const arma::vec energies = arma::sum(arma::square(arma::abs(weights)), 0).t();
  if (energies.is_empty() || !(energies.min() > 0.0)) {
    throw NumericalError("degenerate precoder column");
  }
  const double k = static_cast<double>(weights.n_cols);
  return std::sqrt(spec.total_tx_power / (k * spec.symbol_variance)) / arma::sqrt(energies);
}

Precoder make_precoder(arma::cx_mat weights, const QuantizerSpec& spec) {
  Precoder p;
  p.power = power_allocation(weights, spec);
  p.weights = std::move(weights);
  return p;
}

arma::cx_vec slnr_precoder_column(const ChannelMatrix& channel, arma::uword user,
                                  const arma::vec& gain, const arma::cx_mat& cov_distortion,
                                  const QuantizerSpec& spec, double noise_variance) {
  spec.validate();
  if (user >= channel.n_cols) throw std::out_of_range("slnr_precoder_column: user index");
  const SlnrSystem sys = make_slnr_system(channel, gain, cov_distortion, spec, noise_variance);
  return solve_column(sys, user);
}

SlnrResult slnr_precoder(const ChannelMatrix& channel, const QuantizerSpec& spec,
                         double noise_variance, const SlnrSolverConfig& solver) {
  solver.validate();
  spec.validate();

  arma::cx_mat w;
  switch (solver.initializer) {
    case Initializer::ZeroForcing:
      w = zf_precoder(channel);
      break;
    case Initializer::RegularizedZeroForcing:
      w = rzf_precoder(channel, spec, noise_variance);
      break;
    case Initializer::Provided:
      if (solver.initial_weights.n_rows != channel.n_rows ||
          solver.initial_weights.n_cols != channel.n_cols) {
        throw std::invalid_argument("solver.initial_weights: must be N x K");
      }
      w = solver.initial_weights;
      break;
  }

  SlnrResult result;
  ConvergenceTrace& trace = result.trace;

  for (unsigned it = 1; it <= solver.max_iterations; ++it) {
    const BussgangModel model = build_bussgang_model(w, spec);
    const SlnrSystem sys =
        make_slnr_system(channel, model.gain, model.cov_distortion, spec, noise_variance);
    arma::cx_mat next = solve_all_columns(sys);
    if (!next.is_finite()) throw NumericalError("divergence");

    const double gap = arma::norm(next - w, "fro");
    if (!std::isfinite(gap)) throw NumericalError("divergence");
    trace.gaps.push_back(gap);
    trace.tolerance =
        solver.tolerance.value_or(solver.relative_tolerance * arma::norm(next, "fro"));
    trace.iterations_used = it;
    if (gap <= trace.tolerance) {
      trace.converged = true;
      break;
    }
    w = std::move(next);
    trace.iterates.push_back(w);
  }

  result.model = build_bussgang_model(w, spec);
  result.precoder = make_precoder(std::move(w), spec);
  return result;
}

}  // namespace onebit
