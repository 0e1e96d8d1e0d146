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

// End-to-end image encoder: descriptor preprocessing, embedding, angle
// modulation, aggregation and post-processing.

#ifndef CVAG_PIPELINE_H_
#define CVAG_PIPELINE_H_

#include <Eigen/Core>
#include <optional>
#include <string>

#include "cvag/angle_map.h"
#include "cvag/codebook_training.h"
#include "cvag/descriptor_embed.h"
#include "cvag/modulate_aggregate.h"
#include "cvag/postprocess.h"

namespace cvag {

enum class PowerLawMode {
  kNone,
  kPlain,    // component-wise signed power on the whole vector
  kAdapted,  // modulus-based variant, compatible with polynomial scoring
};

struct PostprocessOptions {
  PowerLawMode power_law = PowerLawMode::kPlain;
  double exponent = kPowerLawMonomial;
  std::optional<RnModel> rn;
  // Keep the first `truncate` components after RN; 0 keeps everything.
  int truncate = 0;
};

// Default power-law exponent of an embedding family.
double DefaultPowerLawExponent(EmbeddingFamily family);

// RootSIFT for raw sets, then PCA (reduced or full rotation) or plain l2
// normalisation of every record.
DescriptorSet PreprocessDescriptors(const DescriptorSet& set,
                                    const PcaModel* pca, bool reduce);

class Encoder {
 public:
  // pca is optional. When present, monomial and Fisher embeddings use the
  // reduced basis and VLAD uses the full rotation.
  Encoder(EmbeddingConfig embedding, AngleMapConfig angle,
          PostprocessOptions post = {}, std::optional<PcaModel> pca = {});

  const EmbeddingConfig& embedding() const { return embedding_; }
  const AngleMapConfig& angle_config() const { return angle_; }
  const FourierCoefficients& coefficients() const { return coeffs_; }
  const PostprocessOptions& postprocess() const { return post_; }
  const std::optional<PcaModel>& pca() const { return pca_; }

  Eigen::Index base_dim() const { return embedding_.output_dim(); }
  int num_frequencies() const { return coeffs_.num_frequencies(); }
  Eigen::Index modulated_dim() const;
  Eigen::Index output_dim() const;

  // RootSIFT (for raw sets), PCA or plain l2 normalisation of every record.
  DescriptorSet PreprocessSet(const DescriptorSet& set) const;

  // Unit-norm modulated vector of the set seen after a global rotation,
  // before any post-processing.
  ModulatedVector AggregateSet(const DescriptorSet& set,
                               double rotation = 0.0) const;

  // Full pipeline: aggregation, power law, RN, truncation.
  Eigen::VectorXd Encode(const DescriptorSet& set, double rotation = 0.0) const;

  // Post-processing applied to an already aggregated vector.
  Eigen::VectorXd Postprocess(const ModulatedVector& x) const;

 private:
  EmbeddingConfig embedding_;
  AngleMapConfig angle_;
  FourierCoefficients coeffs_;
  PostprocessOptions post_;
  std::optional<PcaModel> pca_;
};

}  // namespace cvag

#endif  // CVAG_PIPELINE_H_
