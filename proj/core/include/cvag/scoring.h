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

// Image-to-image scores.
//
// Rotating image X by theta (all angles theta_x - theta) turns each
// frequency pair of its vector by n * theta, so the similarity to Y is the
// trigonometric polynomial
//
//   s(theta) = c0 + sum_n a_n cos(n theta) + b_n sin(n theta)
//
// with c0 = <X0,Y0>, a_n = <Xnc,Ync> + <Xns,Yns>, b_n = <Xns,Ync> - <Xnc,Yns>.

#ifndef CVAG_SCORING_H_
#define CVAG_SCORING_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cvag/descriptor_embed.h"
#include "cvag/modulate_aggregate.h"
#include "cvag/pipeline.h"

namespace cvag {

struct ScorePolynomial {
  double c0 = 0.0;
  std::vector<double> a;  // a_1..a_N
  std::vector<double> b;  // b_1..b_N

  int degree() const { return static_cast<int>(a.size()); }
  double Evaluate(double theta) const;
};

inline constexpr int kDefaultScoreSamples = 64;
inline constexpr int kGoldenSectionSteps = 20;
inline constexpr int kDefaultQueryRotations = 8;

double ScoreCosine(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);
double ScoreCosine(const ModulatedVector& x, const ModulatedVector& y);

// Coefficients of s_{X,Y}. Performs exactly 1 + 4N inner products of length
// D.
ScorePolynomial ComputeScorePolynomial(const ModulatedVector& x,
                                       const ModulatedVector& y);

// Number of block inner products performed by ComputeScorePolynomial since
// the last reset (process-wide).
std::uint64_t BlockInnerProductCount();
void ResetBlockInnerProductCount();

struct ScoreMaximum {
  double theta = 0.0;  // in (-pi, pi]
  double score = 0.0;
};

// Evaluates p on `samples` equally spaced angles, then refines every sampled
// local maximum with kGoldenSectionSteps golden-section steps inside its two
// neighbouring intervals. Requires samples >= 2N + 1.
ScoreMaximum MaxScore(const ScorePolynomial& p,
                      int samples = kDefaultScoreSamples);

struct RotationScores {
  // Best score of every database vector over the query rotations.
  Eigen::VectorXd score;
  // Rotation index attaining it (lowest index on ties) and its angle.
  std::vector<int> best_rotation;
  std::vector<double> theta;
};

// Encodes the query under the rotations 2 pi r / n_rot, r = 0..n_rot-1, with
// the full pipeline and scores each database row against all of them with a
// single matrix product.
RotationScores QueryMultiRotation(const DescriptorSet& query,
                                  const Encoder& encoder,
                                  const Eigen::MatrixXd& database,
                                  int n_rot = kDefaultQueryRotations);

// Scores of already encoded query rotations (one per row of `queries`).
RotationScores ScoreRotations(const Eigen::MatrixXd& queries,
                              const Eigen::MatrixXd& database);

}  // namespace cvag

#endif  // CVAG_SCORING_H_
