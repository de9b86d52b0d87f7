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


#ifndef ONEBIT_VALIDATION_HPP
#define ONEBIT_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace onebit {

enum class ValidationLevel { Quick, Full };

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Monte Carlo and closed-form checks of the numerical core. Quick uses
/// 1e5 samples with thresholds relaxed 3x; Full uses 1e6 samples.
std::vector<CheckResult> run_validation(ValidationLevel level, std::uint64_t seed = 20240601);

}  // namespace onebit

#endif  // ONEBIT_VALIDATION_HPP
