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

#ifndef CVAG_SIMILARITY_HISTOGRAM_H_
#define CVAG_SIMILARITY_HISTOGRAM_H_

#include <Eigen/Core>
#include <ostream>
#include <utility>
#include <vector>

#include "cvag/angle_map.h"
#include "cvag/descriptor_embed.h"

namespace cvag {

using MatchedPair = std::pair<DescriptorRecord, DescriptorRecord>;

// Distribution of descriptor similarity of matched pairs, split by the
// difference of their orientations. Angle differences are wrapped to
// (-pi, pi] and split into equal bins [lo, hi), except that pi itself falls
// into the last bin. Similarity bins partition [-1, 1] the same way (values
// outside are clamped into the end bins, 1 falls into the last bin).
struct SimilarityHistogram {
  int angle_bins = 8;
  int similarity_bins = 20;
  Eigen::MatrixXi raw;        // angle_bins x similarity_bins, <x, y>
  Eigen::MatrixXi modulated;  // same for <x, y> * k_N(delta)
  // Per-pair values, in input order.
  std::vector<int> angle_bin;
  std::vector<double> raw_similarity;
  std::vector<double> modulated_similarity;

  double AngleBinLow(int b) const;
  double AngleBinHigh(int b) const;
  double SimilarityBinLow(int b) const;
  double SimilarityBinHigh(int b) const;
};

inline constexpr int kDefaultAngleBins = 8;
inline constexpr int kDefaultSimilarityBins = 20;

int AngleBinOf(double delta, int bins);
int SimilarityBinOf(double value, int bins);

// Descriptors are l2-normalised before taking inner products.
SimilarityHistogram ComputeSimilarityHistogram(
    const std::vector<MatchedPair>& pairs, const FourierCoefficients& coeffs,
    int angle_bins = kDefaultAngleBins,
    int similarity_bins = kDefaultSimilarityBins);

// CSV with header
//   angle_bin,angle_lo,angle_hi,kind,sim_bin,sim_lo,sim_hi,count
// where kind is "raw" or "modulated".
void WriteSimilarityHistogramCsv(const SimilarityHistogram& hist,
                                 std::ostream& out);

}  // namespace cvag

#endif  // CVAG_SIMILARITY_HISTOGRAM_H_
