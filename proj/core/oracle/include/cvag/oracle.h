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

#ifndef CVAG_ORACLE_H_
#define CVAG_ORACLE_H_

#include <Eigen/Core>
#include <vector>

#include "cvag/angle_map.h"
#include "cvag/descriptor_embed.h"

namespace cvag::oracle {

// Reference match kernels evaluated as explicit double sums over all cross
// pairs. Quadratic cost; meant for sets of at most a few hundred records.
// Each is normalised as K(X,Y) / sqrt(K(X,X) K(Y,Y)).

// Local kernel of the embedding, computed from its closed form rather than
// through EmbedDescriptor.
double LocalKernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const EmbeddingConfig& embedding);

// gamma_0 + sum_n gamma_n cos(n delta).
double AngleKernel(double delta, const FourierCoefficients& coeffs);

double BruteMatchKernel(const DescriptorSet& x, const DescriptorSet& y,
                        const EmbeddingConfig& embedding,
                        const FourierCoefficients& coeffs);

double BruteMonomialKernel(const std::vector<Eigen::VectorXd>& x,
                           const std::vector<Eigen::VectorXd>& y, int degree);

}  // namespace cvag::oracle

#endif  // CVAG_ORACLE_H_
