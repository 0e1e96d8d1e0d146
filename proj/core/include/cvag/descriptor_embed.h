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

#ifndef CVAG_DESCRIPTOR_EMBED_H_
#define CVAG_DESCRIPTOR_EMBED_H_

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cvag/codebook_training.h"
#include "cvag/monomial_embed.h"

namespace cvag {

// A local descriptor with its dominant orientation in radians.
struct DescriptorRecord {
  Eigen::VectorXd descriptor;
  double angle = 0.0;
};

// All local features of one image.
struct DescriptorSet {
  std::string image_id;
  std::vector<DescriptorRecord> records;
  // Records hold raw SIFT histograms that still need RootSIFT.
  bool raw_sift = false;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  // Dimension shared by all records; 0 for an empty set. Throws
  // ContractError if records disagree.
  int dim() const;
};

// Returns a copy of the set with every angle replaced by WrapAngle(angle -
// rotation), i.e. the image as seen after a global in-plane rotation.
DescriptorSet RotateSet(const DescriptorSet& set, double rotation);

enum class EmbeddingFamily : std::uint32_t {
  kMonomial = 0,
  kVlad = 1,
  kFisher = 2,
};

std::string_view ToString(EmbeddingFamily family);
EmbeddingFamily ParseEmbeddingFamily(std::string_view name);

// Per-descriptor embedding phi. Models are shared so that copies of a config
// are cheap.
class EmbeddingConfig {
 public:
  static EmbeddingConfig Monomial(int degree, int input_dim);
  static EmbeddingConfig Vlad(CodebookModel codebook);
  static EmbeddingConfig Fisher(GmmModel gmm);

  EmbeddingFamily family() const { return family_; }
  int input_dim() const { return input_dim_; }
  std::int64_t output_dim() const { return output_dim_; }
  int monomial_degree() const { return monomial_degree_; }
  // Number of codewords / components; 0 for monomial embeddings.
  int num_codewords() const;
  const CodebookModel& codebook() const { return *codebook_; }
  const GmmModel& gmm() const { return *gmm_; }

 private:
  EmbeddingConfig() = default;

  EmbeddingFamily family_ = EmbeddingFamily::kMonomial;
  int input_dim_ = 0;
  std::int64_t output_dim_ = 0;
  int monomial_degree_ = 1;
  std::shared_ptr<const CodebookModel> codebook_;
  std::shared_ptr<const GmmModel> gmm_;
};

// l1-normalisation followed by a component-wise square root. The input must
// be non-negative and not all zero.
Eigen::VectorXd RootSift(const Eigen::Ref<const Eigen::VectorXd>& raw);

// Centres x on the PCA mean, rotates it onto the principal basis, keeps the
// first out_dim coordinates when reduce is set, and l2-normalises.
Eigen::VectorXd Preprocess(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PcaModel& pca, bool reduce);

// phi(x) for the configured family:
//  - monomial: PhiMonomial(x, degree);
//  - VLAD: k blocks of size d, all zero except the block of the nearest
//    centroid, which holds the l2-normalised residual x - c;
//  - Fisher: block g is p(g|x) (x - mu_g) / sigma_g / sqrt(w_g).
Eigen::VectorXd EmbedDescriptor(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const EmbeddingConfig& config);

}  // namespace cvag

#endif  // CVAG_DESCRIPTOR_EMBED_H_
