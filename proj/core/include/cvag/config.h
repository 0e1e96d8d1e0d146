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

#ifndef CVAG_CONFIG_H_
#define CVAG_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>

#include "cvag/angle_map.h"
#include "cvag/descriptor_embed.h"
#include "cvag/pipeline.h"
#include "cvag/scoring.h"

namespace cvag {

// Everything needed to rebuild an Encoder and score with it. Serialised as
// the JSON manifest written by the CLI.
struct PipelineConfig {
  EmbeddingFamily family = EmbeddingFamily::kMonomial;
  int monomial_degree = 2;
  // Model file paths; empty when unused.
  std::string pca_model;
  std::string codebook_model;
  std::string gmm_model;
  std::string rn_model;

  AngleMapConfig angle;

  PowerLawMode power_law = PowerLawMode::kPlain;
  // Defaults to the family exponent when unset.
  std::optional<double> power_law_exponent;
  std::optional<double> rn_exponent;
  bool rn_whiten = false;
  int truncate = 0;

  int rotations = kDefaultQueryRotations;
  bool polynomial_scoring = false;
  int score_samples = kDefaultScoreSamples;

  double EffectivePowerLawExponent() const;

  std::string ToJson() const;
  static PipelineConfig FromJson(std::string_view json);
};

// Loads the referenced models and builds the encoder. input_dim is only
// used by monomial embeddings without PCA.
Encoder BuildEncoder(const PipelineConfig& config, int input_dim);

}  // namespace cvag

#endif  // CVAG_CONFIG_H_
