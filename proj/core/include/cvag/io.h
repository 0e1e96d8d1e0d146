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

// Binary file formats. All integers and reals are little-endian.
//
// Descriptor file:
//   "CVAGDSC1" | u32 dim | u64 count | u32 flags
//   count x ( dim x f32 descriptor | f32 angle in radians )
//   flags bit 0: descriptors are raw SIFT histograms (RootSIFT pending).
//
// Model file:
//   "CVAGMDL1" | u32 kind | kind-specific header | f64 payload, row-major
//   kind 1 (PCA):     u64 d_in | u64 out_dim | mean[d_in] | eigenvalues[d_in]
//                     | basis[d_in x d_in]
//   kind 2 (k-means): u64 k | u64 d | centroids[k x d]
//   kind 3 (GMM):     u64 k | u64 d | weights[k] | means[k x d]
//                     | variances[k x d]
//   kind 4 (RN):      u64 dim | u64 rank | f64 exponent | u32 mode
//                     | eigenvalues[rank] | basis[rank x dim]
//
// Vector file:
//   "CVAGVEC1" | u64 count | u64 base_dim | u32 num_frequencies
//   | u32 family | u64 stored_dim
//   count x ( u32 id_length | id bytes (UTF-8) | stored_dim x f32 )

#ifndef CVAG_IO_H_
#define CVAG_IO_H_

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvag/codebook_training.h"
#include "cvag/descriptor_embed.h"
#include "cvag/postprocess.h"

namespace cvag {

inline constexpr std::string_view kDescriptorMagic = "CVAGDSC1";
inline constexpr std::string_view kModelMagic = "CVAGMDL1";
inline constexpr std::string_view kVectorMagic = "CVAGVEC1";

inline constexpr std::uint32_t kDescriptorFlagRawSift = 1u;

enum class ModelKind : std::uint32_t {
  kPca = 1,
  kKmeans = 2,
  kGmm = 3,
  kRn = 4,
};

std::string_view ToString(ModelKind kind);

// Reads a whole file; throws ParseError if it cannot be opened.
std::string ReadFileBytes(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

std::string EncodeDescriptorSet(const DescriptorSet& set);
DescriptorSet DecodeDescriptorSet(std::string_view bytes,
                                  const std::string& source,
                                  std::string image_id);

void WriteDescriptorFile(const DescriptorSet& set,
                         const std::filesystem::path& path);
// image_id defaults to the file stem.
DescriptorSet ReadDescriptorFile(
    const std::filesystem::path& path,
    std::optional<std::string> image_id = std::nullopt);

ModelKind PeekModelKind(const std::filesystem::path& path);

void WriteModelFile(const PcaModel& model, const std::filesystem::path& path);
void WriteModelFile(const CodebookModel& model,
                    const std::filesystem::path& path);
void WriteModelFile(const GmmModel& model, const std::filesystem::path& path);
void WriteModelFile(const RnModel& model, const std::filesystem::path& path);

PcaModel ReadPcaModel(const std::filesystem::path& path);
CodebookModel ReadCodebookModel(const std::filesystem::path& path);
GmmModel ReadGmmModel(const std::filesystem::path& path);
RnModel ReadRnModel(const std::filesystem::path& path);

struct VectorFileHeader {
  std::uint64_t base_dim = 0;
  std::uint32_t num_frequencies = 0;
  EmbeddingFamily family = EmbeddingFamily::kMonomial;
  // Length of each stored vector. Equals base_dim * (2N + 1) unless the
  // vectors were truncated.
  std::uint64_t stored_dim = 0;

  bool operator==(const VectorFileHeader&) const = default;
};

// Encoded images, one row per image.
struct VectorDatabase {
  VectorFileHeader header;
  std::vector<std::string> ids;
  Eigen::MatrixXd vectors;

  std::size_t size() const { return ids.size(); }
};

std::string EncodeVectorDatabase(const VectorDatabase& db);
VectorDatabase DecodeVectorDatabase(std::string_view bytes,
                                    const std::string& source);
void WriteVectorFile(const VectorDatabase& db,
                     const std::filesystem::path& path);
VectorDatabase ReadVectorFile(const std::filesystem::path& path);

}  // namespace cvag

#endif  // CVAG_IO_H_
