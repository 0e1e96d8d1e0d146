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

#include "cvag/descriptor_embed.h"

#include <cmath>

#include "cvag/angle_map.h"
#include "cvag/error.h"

namespace cvag {

int DescriptorSet::dim() const {
  if (records.empty()) return 0;
  const Eigen::Index d = records.front().descriptor.size();
  for (const DescriptorRecord& r : records) {
    if (r.descriptor.size() != d) {
      throw ContractError("descriptor set '" + image_id +
                          "' mixes dimensions " + std::to_string(d) + " and " +
                          std::to_string(r.descriptor.size()));
    }
  }
  return static_cast<int>(d);
}

DescriptorSet RotateSet(const DescriptorSet& set, double rotation) {
  DescriptorSet out = set;
  for (DescriptorRecord& r : out.records) {
    r.angle = WrapAngle(r.angle - rotation);
  }
  return out;
}

std::string_view ToString(EmbeddingFamily family) {
  switch (family) {
    case EmbeddingFamily::kMonomial:
      return "monomial";
    case EmbeddingFamily::kVlad:
      return "vlad";
    case EmbeddingFamily::kFisher:
      return "fisher";
  }
  return "unknown";
}

EmbeddingFamily ParseEmbeddingFamily(std::string_view name) {
  if (name == "monomial") return EmbeddingFamily::kMonomial;
  if (name == "vlad") return EmbeddingFamily::kVlad;
  if (name == "fisher") return EmbeddingFamily::kFisher;
  throw ParseError("unknown embedding family '" + std::string(name) + "'");
}

EmbeddingConfig EmbeddingConfig::Monomial(int degree, int input_dim) {
  const MonomialConfig mc{degree, input_dim};
  mc.Validate();
  EmbeddingConfig config;
  config.family_ = EmbeddingFamily::kMonomial;
  config.input_dim_ = input_dim;
  config.monomial_degree_ = degree;
  config.output_dim_ = mc.OutputDim();
  return config;
}

EmbeddingConfig EmbeddingConfig::Vlad(CodebookModel codebook) {
  codebook.Validate();
  EmbeddingConfig config;
  config.family_ = EmbeddingFamily::kVlad;
  config.input_dim_ = codebook.dim();
  config.output_dim_ = static_cast<std::int64_t>(codebook.k()) * codebook.dim();
  config.codebook_ = std::make_shared<const CodebookModel>(std::move(codebook));
  return config;
}

EmbeddingConfig EmbeddingConfig::Fisher(GmmModel gmm) {
  gmm.Validate();
  EmbeddingConfig config;
  config.family_ = EmbeddingFamily::kFisher;
  config.input_dim_ = gmm.dim();
  config.output_dim_ = static_cast<std::int64_t>(gmm.k()) * gmm.dim();
  config.gmm_ = std::make_shared<const GmmModel>(std::move(gmm));
  return config;
}

int EmbeddingConfig::num_codewords() const {
  switch (family_) {
    case EmbeddingFamily::kVlad:
      return codebook_->k();
    case EmbeddingFamily::kFisher:
      return gmm_->k();
    default:
      return 0;
  }
}

Eigen::VectorXd RootSift(const Eigen::Ref<const Eigen::VectorXd>& raw) {
  if ((raw.array() < 0.0).any()) {
    throw ContractError("RootSIFT input has negative components");
  }
  const double l1 = raw.sum();
  if (!(l1 > 0.0)) throw ContractError("RootSIFT input is all zero");
  return (raw / l1).cwiseSqrt();
}

Eigen::VectorXd Preprocess(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PcaModel& pca, bool reduce) {
  if (x.size() != pca.input_dim()) {
    throw ContractError("descriptor dimension " + std::to_string(x.size()) +
                        " does not match PCA input dimension " +
                        std::to_string(pca.input_dim()));
  }
  const Eigen::VectorXd centered = x - pca.mean;
  Eigen::VectorXd out = reduce ? Eigen::VectorXd(pca.ReducedBasis() * centered)
                               : Eigen::VectorXd(pca.basis * centered);
  const double norm = out.norm();
  if (!(norm > 0.0)) {
    throw NumericalError("descriptor vanishes after PCA centring");
  }
  return out / norm;
}

Eigen::VectorXd EmbedDescriptor(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const EmbeddingConfig& config) {
  if (x.size() != config.input_dim()) {
    throw ContractError("descriptor dimension " + std::to_string(x.size()) +
                        " does not match embedding input dimension " +
                        std::to_string(config.input_dim()));
  }
  switch (config.family()) {
    case EmbeddingFamily::kMonomial:
      return PhiMonomial(x, {config.monomial_degree(), config.input_dim()});

    case EmbeddingFamily::kVlad: {
      const CodebookModel& cb = config.codebook();
      const int d = cb.dim();
      Eigen::VectorXd out = Eigen::VectorXd::Zero(config.output_dim());
      const int c = NearestCentroid(cb, x);
      Eigen::VectorXd residual = x - cb.centroids.row(c).transpose();
      const double norm = residual.norm();
      if (norm > 0.0)
        out.segment(static_cast<Eigen::Index>(c) * d, d) = residual / norm;
      return out;
    }

    case EmbeddingFamily::kFisher: {
      const GmmModel& gmm = config.gmm();
      const int d = gmm.dim();
      const Eigen::VectorXd post = GmmPosteriors(gmm, x);
      Eigen::VectorXd out(config.output_dim());
      for (int g = 0; g < gmm.k(); ++g) {
        const double scale = post[g] / std::sqrt(gmm.weights[g]);
        out.segment(static_cast<Eigen::Index>(g) * d, d) =
            scale * ((x - gmm.means.row(g).transpose()).array() /
                     gmm.variances.row(g).transpose().array().sqrt())
                        .matrix();
      }
      return out;
    }
  }
  throw ContractError("unknown embedding family");
}

}  // namespace cvag
