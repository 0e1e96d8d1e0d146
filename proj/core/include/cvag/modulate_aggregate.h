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

#ifndef CVAG_MODULATE_AGGREGATE_H_
#define CVAG_MODULATE_AGGREGATE_H_

#include <Eigen/Core>
#include <cstdint>

#include "cvag/angle_map.h"
#include "cvag/descriptor_embed.h"

namespace cvag {

// Image vector made of 2N+1 blocks of base_dim entries, stored
// frequency-major:
//
//   [X_0; X_{1,c}; X_{1,s}; ...; X_{N,c}; X_{N,s}]
//
// Block X_0 does not depend on the angles; the (cos, sin) pair of frequency n
// turns by n * theta under a global rotation theta of the image.
class ModulatedVector {
 public:
  ModulatedVector() = default;
  ModulatedVector(Eigen::Index base_dim, int num_frequencies);
  ModulatedVector(Eigen::Index base_dim, int num_frequencies,
                  Eigen::VectorXd values);

  Eigen::Index base_dim() const { return base_dim_; }
  int num_frequencies() const { return num_frequencies_; }
  Eigen::Index size() const { return values_.size(); }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  // Block b in storage order: 0 is X_0, 2n-1 is X_{n,c}, 2n is X_{n,s}.
  auto block(int b) const { return values_.segment(b * base_dim_, base_dim_); }
  auto block(int b) { return values_.segment(b * base_dim_, base_dim_); }
  auto constant_block() const { return block(0); }
  auto cos_block(int n) const { return block(2 * n - 1); }
  auto sin_block(int n) const { return block(2 * n); }
  auto cos_block(int n) { return block(2 * n - 1); }
  auto sin_block(int n) { return block(2 * n); }

  // Throws ContractError when layouts differ.
  void CheckCompatible(const ModulatedVector& other) const;

 private:
  Eigen::Index base_dim_ = 0;
  int num_frequencies_ = 0;
  Eigen::VectorXd values_;
};

// Storage dimension base_dim * (2N + 1).
std::int64_t ModulatedDim(std::int64_t base_dim, int num_frequencies);

// Kronecker product v (x) alpha, rearranged from the interleaved
// per-component order into the frequency-major block layout.
ModulatedVector Modulate(const Eigen::Ref<const Eigen::VectorXd>& v,
                         const Eigen::Ref<const Eigen::VectorXd>& alpha);

// Index in the frequency-major layout of entry (component j, angle feature
// index a) of the plain Kronecker product, where a follows the
// cosines-then-sines layout of AngleFeature.
Eigen::Index KroneckerToFrequencyMajor(Eigen::Index j, int a,
                                       Eigen::Index base_dim,
                                       int num_frequencies);

// Sum of Modulate(EmbedDescriptor(x), AngleFeature(theta_x)) over the set,
// scaled to unit norm. Records are summed in order: sequentially within
// chunks of kAggregateChunk records, then chunk sums combine pairwise.
// Throws ContractError for an empty set and NumericalError when the sum is
// zero.
ModulatedVector Aggregate(const DescriptorSet& set,
                          const EmbeddingConfig& embedding,
                          const FourierCoefficients& coeffs);

// As Aggregate but without the final normalisation.
ModulatedVector AggregateUnnormalized(const DescriptorSet& set,
                                      const EmbeddingConfig& embedding,
                                      const FourierCoefficients& coeffs);

inline constexpr int kAggregateChunk = 32;

// Applies the block rotation produced by rotating every angle of the
// underlying set by theta (angles theta_x - theta):
//   X_{n,c} <- X_{n,c} cos n theta + X_{n,s} sin n theta
//   X_{n,s} <- -X_{n,c} sin n theta + X_{n,s} cos n theta
ModulatedVector RotateBlocks(const ModulatedVector& x, double theta);

}  // namespace cvag

#endif  // CVAG_MODULATE_AGGREGATE_H_
