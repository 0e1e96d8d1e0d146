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

// Non-linear post-processing of aggregated image vectors.

#ifndef CVAG_POSTPROCESS_H_
#define CVAG_POSTPROCESS_H_

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cvag/modulate_aggregate.h"

namespace cvag {

inline constexpr double kPowerLawCodebook = 0.4;  // VLAD and Fisher
inline constexpr double kPowerLawMonomial = 0.2;
inline constexpr double kRnExponent = 0.5;

// Scales v to unit l2 norm; zero vectors are returned unchanged.
Eigen::VectorXd L2Normalize(const Eigen::Ref<const Eigen::VectorXd>& v);

// z -> sign(z) |z|^a component-wise, then l2 normalisation.
Eigen::VectorXd PowerLaw(const Eigen::Ref<const Eigen::VectorXd>& v, double a);

// Power-law variant that commutes with block rotations: X_0 gets the plain
// signed power, while every (X_{n,c}[j], X_{n,s}[j]) pair is divided by its
// modulus^(1-a) so that the phase is kept. Zero pairs stay zero. The result
// is l2-normalised.
ModulatedVector AdaptedPowerLaw(const ModulatedVector& x, double a);

enum class RnMode {
  kPowerLaw,  // second signed power-law after the rotation (default)
  kWhiten,    // divide the leading coordinates by sqrt(eigenvalue)
};

// Rotation + normalisation learned on aggregated vectors of a held-out
// corpus.
//
// The rotation is orthonormal on the whole space: its first rank()
// coordinates are the projections on the principal directions of the
// training vectors; the remaining coordinates span their orthogonal
// complement (Householder completion), which leaves that part of the space
// untouched up to an orthonormal change of basis.
class RnModel {
 public:
  RnModel() = default;
  // basis: rank x dim matrix with orthonormal rows sorted by decreasing
  // eigenvalue.
  RnModel(Eigen::MatrixXd basis, Eigen::VectorXd eigenvalues,
          double exponent = kRnExponent, RnMode mode = RnMode::kPowerLaw);

  Eigen::Index dim() const { return basis_.cols(); }
  Eigen::Index rank() const { return basis_.rows(); }
  double exponent() const { return exponent_; }
  RnMode mode() const { return mode_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  void set_exponent(double exponent) { exponent_ = exponent; }
  void set_mode(RnMode mode) { mode_ = mode; }

  // Orthonormal change of basis without normalisation.
  Eigen::VectorXd Rotate(const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  struct Completion;

  Eigen::MatrixXd basis_;
  Eigen::VectorXd eigenvalues_;
  double exponent_ = kRnExponent;
  RnMode mode_ = RnMode::kPowerLaw;
  std::shared_ptr<const Completion> completion_;
};

struct RnTrainResult {
  RnModel model;
  // Set when there were fewer samples than dimensions.
  std::string warning;
};

// Principal directions of the (mean-centred) training vectors. With fewer
// samples than dimensions only the sample-spanned subspace is learned.
RnTrainResult TrainRn(const std::vector<Eigen::VectorXd>& vectors,
                      double exponent = kRnExponent);

// Rotate, then second power-law (or whitening), then l2 normalisation.
Eigen::VectorXd ApplyRn(const Eigen::Ref<const Eigen::VectorXd>& v,
                        const RnModel& model);

// Keeps the first d_out components and l2-normalises.
Eigen::VectorXd TruncateL2(const Eigen::Ref<const Eigen::VectorXd>& v,
                           int d_out);

}  // namespace cvag

#endif  // CVAG_POSTPROCESS_H_
