// Copyright 2026 The cvag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvag/monomial_embed.h"

#include <cmath>
#include <numbers>
#include <string>

#include "cvag/error.h"

namespace cvag {

void MonomialConfig::Validate() const {
  if (degree < 1 || degree > 3) {
    throw ContractError("monomial degree must be 1, 2 or 3, got " +
                        std::to_string(degree));
  }
  if (input_dim < 1) {
    throw ContractError("monomial input dimension must be positive");
  }
}

std::int64_t MonomialConfig::OutputDim() const {
  return MonomialOutputDim(degree, input_dim);
}

std::int64_t MonomialOutputDim(int degree, int input_dim) {
  const std::int64_t d = input_dim;
  switch (degree) {
    case 1:
      return d;
    case 2:
      return d * (d + 1) / 2;
    case 3:
      return (d * d * d + 3 * d * d + 2 * d) / 6;
    default:
      throw ContractError("monomial degree must be 1, 2 or 3");
  }
}

Eigen::VectorXd PhiMonomial(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const MonomialConfig& config) {
  config.Validate();
  if (x.size() != config.input_dim) {
    throw ContractError("monomial input has dimension " +
                        std::to_string(x.size()) + ", expected " +
                        std::to_string(config.input_dim));
  }
  const double norm = x.norm();
  if (std::abs(norm - 1.0) > kUnitNormTolerance) {
    throw ContractError("monomial embedding requires a unit vector, norm = " +
                        std::to_string(norm));
  }

  const int d = config.input_dim;
  if (config.degree == 1) return x;

  Eigen::VectorXd out(config.OutputDim());
  Eigen::Index pos = 0;
  if (config.degree == 2) {
    for (int i = 0; i < d; ++i) out[pos++] = x[i] * x[i];
    for (int i = 0; i < d; ++i) {
      const double xi = std::numbers::sqrt2 * x[i];
      for (int j = i + 1; j < d; ++j) out[pos++] = xi * x[j];
    }
    return out;
  }

  const double sqrt3 = std::numbers::sqrt3;
  const double sqrt6 = std::sqrt(6.0);
  for (int i = 0; i < d; ++i) out[pos++] = x[i] * x[i] * x[i];
  for (int i = 0; i < d; ++i) {
    const double xi2 = sqrt3 * x[i] * x[i];
    for (int j = 0; j < d; ++j) {
      if (j != i) out[pos++] = xi2 * x[j];
    }
  }
  for (int i = 0; i < d; ++i) {
    const double xi = sqrt6 * x[i];
    for (int j = i + 1; j < d; ++j) {
      const double xij = xi * x[j];
      for (int k = j + 1; k < d; ++k) out[pos++] = xij * x[k];
    }
  }
  return out;
}

double MonomialKernelCheck(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           int degree) {
  const MonomialConfig config{degree, static_cast<int>(x.size())};
  return PhiMonomial(x, config).dot(PhiMonomial(y, config));
}

}  // namespace cvag
