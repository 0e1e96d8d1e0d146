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

#ifndef CVAG_MONOMIAL_EMBED_H_
#define CVAG_MONOMIAL_EMBED_H_

#include <Eigen/Core>
#include <cstdint>

namespace cvag {

// Exact feature map of the monomial kernel <x, y>^p for p in {1, 2, 3}.
//
// Component order:
//   p = 1: x.
//   p = 2: x_i^2 for all i, then sqrt(2) x_i x_j for i < j (lexicographic).
//   p = 3: x_i^3 for all i, then sqrt(3) x_i^2 x_j for i != j (lexicographic
//          on (i, j)), then sqrt(6) x_i x_j x_k for i < j < k (lexicographic).
struct MonomialConfig {
  int degree = 2;
  int input_dim = 0;

  void Validate() const;
  std::int64_t OutputDim() const;
};

// Output length: d, d(d+1)/2 or (d^3 + 3d^2 + 2d)/6.
std::int64_t MonomialOutputDim(int degree, int input_dim);

// Tolerance on |‖x‖ - 1| accepted by PhiMonomial.
inline constexpr double kUnitNormTolerance = 1e-6;

// Throws ContractError if x is not unit norm or its size differs from
// config.input_dim.
Eigen::VectorXd PhiMonomial(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const MonomialConfig& config);

// <phi_p(x), phi_p(y)>, which equals <x, y>^p up to rounding.
double MonomialKernelCheck(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           int degree);

}  // namespace cvag

#endif  // CVAG_MONOMIAL_EMBED_H_
