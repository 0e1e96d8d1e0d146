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

#include "cvag/pipeline.h"

#include <string>
#include <utility>

#include "cvag/error.h"

namespace cvag {

double DefaultPowerLawExponent(EmbeddingFamily family) {
  return family == EmbeddingFamily::kMonomial ? kPowerLawMonomial
                                              : kPowerLawCodebook;
}

Encoder::Encoder(EmbeddingConfig embedding, AngleMapConfig angle,
                 PostprocessOptions post, std::optional<PcaModel> pca)
    : embedding_(std::move(embedding)),
      angle_(angle),
      coeffs_(ComputeFourierCoefficients(angle)),
      post_(std::move(post)),
      pca_(std::move(pca)) {
  if (pca_) {
    pca_->Validate();
    const bool reduce = embedding_.family() != EmbeddingFamily::kVlad;
    const int pca_out = reduce ? pca_->out_dim : pca_->input_dim();
    if (pca_out != embedding_.input_dim()) {
      throw ContractError("PCA produces " + std::to_string(pca_out) +
                          "-dimensional descriptors but the " +
                          std::string(ToString(embedding_.family())) +
                          " embedding expects " +
                          std::to_string(embedding_.input_dim()));
    }
  }
  if (post_.rn && post_.rn->dim() != modulated_dim()) {
    throw ContractError(
        "RN model dimension " + std::to_string(post_.rn->dim()) +
        " does not match encoded dimension " + std::to_string(modulated_dim()));
  }
  if (post_.truncate < 0 || post_.truncate > modulated_dim()) {
    throw ContractError("truncation dimension " +
                        std::to_string(post_.truncate) + " out of range");
  }
}

Eigen::Index Encoder::modulated_dim() const {
  return ModulatedDim(base_dim(), num_frequencies());
}

Eigen::Index Encoder::output_dim() const {
  return post_.truncate > 0 ? post_.truncate : modulated_dim();
}

DescriptorSet PreprocessDescriptors(const DescriptorSet& set,
                                    const PcaModel* pca, bool reduce) {
  DescriptorSet out;
  out.image_id = set.image_id;
  out.records.reserve(set.records.size());
  for (const DescriptorRecord& record : set.records) {
    Eigen::VectorXd x =
        set.raw_sift ? RootSift(record.descriptor) : record.descriptor;
    if (pca) {
      x = Preprocess(x, *pca, reduce);
    } else {
      const double norm = x.norm();
      if (!(norm > 0.0)) {
        throw ContractError("zero descriptor in set '" + set.image_id + "'");
      }
      x /= norm;
    }
    out.records.push_back({std::move(x), record.angle});
  }
  return out;
}

DescriptorSet Encoder::PreprocessSet(const DescriptorSet& set) const {
  return PreprocessDescriptors(set, pca_ ? &*pca_ : nullptr,
                               embedding_.family() != EmbeddingFamily::kVlad);
}

ModulatedVector Encoder::AggregateSet(const DescriptorSet& set,
                                      double rotation) const {
  DescriptorSet processed = PreprocessSet(set);
  if (rotation != 0.0) processed = RotateSet(processed, rotation);
  return Aggregate(processed, embedding_, coeffs_);
}

Eigen::VectorXd Encoder::Postprocess(const ModulatedVector& x) const {
  Eigen::VectorXd v;
  switch (post_.power_law) {
    case PowerLawMode::kNone:
      v = x.values();
      break;
    case PowerLawMode::kPlain:
      v = PowerLaw(x.values(), post_.exponent);
      break;
    case PowerLawMode::kAdapted:
      v = AdaptedPowerLaw(x, post_.exponent).values();
      break;
  }
  if (post_.rn) v = ApplyRn(v, *post_.rn);
  if (post_.truncate > 0) v = TruncateL2(v, post_.truncate);
  return v;
}

Eigen::VectorXd Encoder::Encode(const DescriptorSet& set,
                                double rotation) const {
  return Postprocess(AggregateSet(set, rotation));
}

}  // namespace cvag
