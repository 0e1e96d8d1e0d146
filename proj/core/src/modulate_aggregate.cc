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

#include "cvag/modulate_aggregate.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cvag/error.h"

namespace cvag {

ModulatedVector::ModulatedVector(Eigen::Index base_dim, int num_frequencies)
    : ModulatedVector(
          base_dim, num_frequencies,
          Eigen::VectorXd::Zero(base_dim * (2 * num_frequencies + 1))) {}

ModulatedVector::ModulatedVector(Eigen::Index base_dim, int num_frequencies,
                                 Eigen::VectorXd values)
    : base_dim_(base_dim),
      num_frequencies_(num_frequencies),
      values_(std::move(values)) {
  if (base_dim < 0 || num_frequencies < 0 ||
      values_.size() != base_dim * (2 * num_frequencies + 1)) {
    throw ContractError(
        "modulated vector of size " + std::to_string(values_.size()) +
        " does not match base dimension " + std::to_string(base_dim) +
        " with " + std::to_string(num_frequencies) + " frequencies");
  }
}

void ModulatedVector::CheckCompatible(const ModulatedVector& other) const {
  if (base_dim_ != other.base_dim_ ||
      num_frequencies_ != other.num_frequencies_) {
    throw ContractError(
        "modulated vectors differ in layout: (D=" + std::to_string(base_dim_) +
        ", N=" + std::to_string(num_frequencies_) +
        ") vs (D=" + std::to_string(other.base_dim_) +
        ", N=" + std::to_string(other.num_frequencies_) + ")");
  }
}

std::int64_t ModulatedDim(std::int64_t base_dim, int num_frequencies) {
  return base_dim * (2 * static_cast<std::int64_t>(num_frequencies) + 1);
}

namespace {

// Storage block of angle feature entry a.
int BlockOfFeature(int a, int num_frequencies) {
  if (a == 0) return 0;
  return a <= num_frequencies ? 2 * a - 1 : 2 * (a - num_frequencies);
}

}  // namespace

Eigen::Index KroneckerToFrequencyMajor(Eigen::Index j, int a,
                                       Eigen::Index base_dim,
                                       int num_frequencies) {
  return BlockOfFeature(a, num_frequencies) * base_dim + j;
}

namespace {

int FrequenciesOf(Eigen::Index alpha_size) {
  if (alpha_size < 1 || alpha_size % 2 == 0) {
    throw ContractError("angle feature must have odd length 2N+1, got " +
                        std::to_string(alpha_size));
  }
  return static_cast<int>((alpha_size - 1) / 2);
}

void AccumulateModulated(const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& alpha, int num_frequencies,
                         Eigen::VectorXd* acc) {
  const Eigen::Index d = phi.size();
  for (int a = 0; a < alpha.size(); ++a) {
    acc->segment(BlockOfFeature(a, num_frequencies) * d, d) += alpha[a] * phi;
  }
}

}  // namespace

ModulatedVector Modulate(const Eigen::Ref<const Eigen::VectorXd>& v,
                         const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  const int n_freq = FrequenciesOf(alpha.size());
  const Eigen::Index d = v.size();
  ModulatedVector out(d, n_freq);
  // Entry j * (2N+1) + a of v (x) alpha is v[j] * alpha[a].
  for (Eigen::Index j = 0; j < d; ++j) {
    for (int a = 0; a < alpha.size(); ++a) {
      out.values()[KroneckerToFrequencyMajor(j, a, d, n_freq)] =
          v[j] * alpha[a];
    }
  }
  return out;
}

ModulatedVector AggregateUnnormalized(const DescriptorSet& set,
                                      const EmbeddingConfig& embedding,
                                      const FourierCoefficients& coeffs) {
  if (set.empty()) {
    throw ContractError("cannot aggregate empty descriptor set '" +
                        set.image_id + "'");
  }
  set.dim();
  const Eigen::Index base_dim = embedding.output_dim();
  const int n_freq = coeffs.num_frequencies();
  const Eigen::Index total = ModulatedDim(base_dim, n_freq);

  // Binary-counter stack of partial sums; entry i covers 2^level chunks.
  std::vector<std::pair<int, Eigen::VectorXd>> stack;
  auto push_chunk = [&stack](Eigen::VectorXd chunk) {
    int level = 0;
    while (!stack.empty() && stack.back().first == level) {
      chunk = stack.back().second + chunk;
      stack.pop_back();
      ++level;
    }
    stack.emplace_back(level, std::move(chunk));
  };

  Eigen::VectorXd chunk = Eigen::VectorXd::Zero(total);
  int in_chunk = 0;
  for (const DescriptorRecord& record : set.records) {
    const Eigen::VectorXd phi = EmbedDescriptor(record.descriptor, embedding);
    const Eigen::VectorXd alpha = AngleFeature(record.angle, coeffs);
    AccumulateModulated(phi, alpha, n_freq, &chunk);
    if (++in_chunk == kAggregateChunk) {
      push_chunk(std::move(chunk));
      chunk = Eigen::VectorXd::Zero(total);
      in_chunk = 0;
    }
  }
  if (in_chunk > 0) push_chunk(std::move(chunk));

  Eigen::VectorXd sum = std::move(stack.back().second);
  stack.pop_back();
  while (!stack.empty()) {
    sum = stack.back().second + sum;
    stack.pop_back();
  }
  return ModulatedVector(base_dim, n_freq, std::move(sum));
}

ModulatedVector Aggregate(const DescriptorSet& set,
                          const EmbeddingConfig& embedding,
                          const FourierCoefficients& coeffs) {
  ModulatedVector x = AggregateUnnormalized(set, embedding, coeffs);
  const double norm = x.values().norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericalError("aggregated vector of '" + set.image_id +
                         "' has zero norm");
  }
  x.values() /= norm;
  return x;
}

ModulatedVector RotateBlocks(const ModulatedVector& x, double theta) {
  ModulatedVector out = x;
  for (int n = 1; n <= x.num_frequencies(); ++n) {
    const double c = std::cos(n * theta);
    const double s = std::sin(n * theta);
    out.cos_block(n) = c * x.cos_block(n) + s * x.sin_block(n);
    out.sin_block(n) = -s * x.cos_block(n) + c * x.sin_block(n);
  }
  return out;
}

}  // namespace cvag
