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

#include "cvag/similarity_histogram.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvag/error.h"

namespace cvag {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

double SimilarityHistogram::AngleBinLow(int b) const {
  return -kPi + 2.0 * kPi * b / angle_bins;
}
double SimilarityHistogram::AngleBinHigh(int b) const {
  return AngleBinLow(b + 1);
}
double SimilarityHistogram::SimilarityBinLow(int b) const {
  return -1.0 + 2.0 * b / similarity_bins;
}
double SimilarityHistogram::SimilarityBinHigh(int b) const {
  return SimilarityBinLow(b + 1);
}

int AngleBinOf(double delta, int bins) {
  const double d = WrapAngle(delta);
  const int b = static_cast<int>(std::floor((d + kPi) / (2.0 * kPi) * bins));
  return std::clamp(b, 0, bins - 1);
}

int SimilarityBinOf(double value, int bins) {
  const int b = static_cast<int>(std::floor((value + 1.0) / 2.0 * bins));
  return std::clamp(b, 0, bins - 1);
}

SimilarityHistogram ComputeSimilarityHistogram(
    const std::vector<MatchedPair>& pairs, const FourierCoefficients& coeffs,
    int angle_bins, int similarity_bins) {
  if (angle_bins < 1 || similarity_bins < 1) {
    throw ContractError("histogram bin counts must be >= 1");
  }
  SimilarityHistogram hist;
  hist.angle_bins = angle_bins;
  hist.similarity_bins = similarity_bins;
  hist.raw = Eigen::MatrixXi::Zero(angle_bins, similarity_bins);
  hist.modulated = Eigen::MatrixXi::Zero(angle_bins, similarity_bins);
  for (const auto& [a, b] : pairs) {
    if (a.descriptor.size() != b.descriptor.size()) {
      throw ContractError("matched descriptors differ in dimension");
    }
    const double na = a.descriptor.norm();
    const double nb = b.descriptor.norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
      throw ContractError("matched pair contains a zero descriptor");
    }
    const double delta = WrapAngle(a.angle - b.angle);
    const double raw = a.descriptor.dot(b.descriptor) / (na * nb);
    const double modulated = raw * TruncatedKernel(delta, coeffs);
    const int ab = AngleBinOf(delta, angle_bins);
    ++hist.raw(ab, SimilarityBinOf(raw, similarity_bins));
    ++hist.modulated(ab, SimilarityBinOf(modulated, similarity_bins));
    hist.angle_bin.push_back(ab);
    hist.raw_similarity.push_back(raw);
    hist.modulated_similarity.push_back(modulated);
  }
  return hist;
}

void WriteSimilarityHistogramCsv(const SimilarityHistogram& hist,
                                 std::ostream& out) {
  out << "angle_bin,angle_lo,angle_hi,kind,sim_bin,sim_lo,sim_hi,count\n";
  for (int a = 0; a < hist.angle_bins; ++a) {
    for (int kind = 0; kind < 2; ++kind) {
      const Eigen::MatrixXi& counts = kind == 0 ? hist.raw : hist.modulated;
      for (int s = 0; s < hist.similarity_bins; ++s) {
        out << a << ',' << hist.AngleBinLow(a) << ',' << hist.AngleBinHigh(a)
            << ',' << (kind == 0 ? "raw" : "modulated") << ',' << s << ','
            << hist.SimilarityBinLow(s) << ',' << hist.SimilarityBinHigh(s)
            << ',' << counts(a, s) << '\n';
      }
    }
  }
}

}  // namespace cvag
