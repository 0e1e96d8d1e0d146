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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cvag/error.h"
#include "test_util.h"

namespace cvag {
namespace {

using testing::kPi;
using testing::RandomAngle;
using testing::RandomUnit;

TEST(AngleBinOfTest, HalfOpenBins) {
  EXPECT_EQ(AngleBinOf(-kPi + 1e-9, 8), 0);
  // -pi wraps to pi, which closes the last bin.
  EXPECT_EQ(AngleBinOf(-kPi, 8), 7);
  EXPECT_EQ(AngleBinOf(kPi, 8), 7);
  EXPECT_EQ(AngleBinOf(0.0, 8), 4);
  EXPECT_EQ(AngleBinOf(-1e-9, 8), 3);
  EXPECT_EQ(AngleBinOf(kPi / 4, 8), 5);
  EXPECT_EQ(AngleBinOf(kPi - 1e-9, 8), 7);
  EXPECT_EQ(AngleBinOf(2 * kPi + 0.1, 8), 4);
}

TEST(SimilarityBinOfTest, EdgesAndClamping) {
  EXPECT_EQ(SimilarityBinOf(-1.0, 20), 0);
  EXPECT_EQ(SimilarityBinOf(1.0, 20), 19);
  EXPECT_EQ(SimilarityBinOf(0.0, 20), 10);
  EXPECT_EQ(SimilarityBinOf(-0.85, 20), 1);
  EXPECT_EQ(SimilarityBinOf(-7.0, 20), 0);
  EXPECT_EQ(SimilarityBinOf(1.5, 20), 19);
}

TEST(SimilarityHistogramTest, CountsAndValues) {
  std::mt19937_64 rng(1);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  std::vector<MatchedPair> pairs;
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd x = RandomUnit(rng, 6);
    pairs.push_back({{x, RandomAngle(rng)},
                     {2.0 * (x + 0.3 * RandomUnit(rng, 6)), RandomAngle(rng)}});
  }
  const SimilarityHistogram h = ComputeSimilarityHistogram(pairs, c);
  EXPECT_EQ(h.raw.sum(), 500);
  EXPECT_EQ(h.modulated.sum(), 500);
  for (int i = 0; i < 500; ++i) {
    const auto& [a, b] = pairs[i];
    const double delta = WrapAngle(a.angle - b.angle);
    const double raw = a.descriptor.normalized().dot(b.descriptor.normalized());
    EXPECT_NEAR(h.raw_similarity[i], raw, 1e-14);
    EXPECT_NEAR(h.modulated_similarity[i], raw * TruncatedKernel(delta, c),
                1e-14);
    EXPECT_EQ(h.angle_bin[i], AngleBinOf(delta, 8));
  }
}

TEST(SimilarityHistogramTest, ModulationSuppressesLargeAngles) {
  std::mt19937_64 rng(2);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  std::vector<MatchedPair> pairs;
  for (int i = 0; i < 400; ++i) {
    const Eigen::VectorXd x = RandomUnit(rng, 8);
    pairs.push_back({{x, 0.0}, {x, RandomAngle(rng)}});
  }
  const SimilarityHistogram h = ComputeSimilarityHistogram(pairs, c);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_NEAR(h.raw_similarity[i], 1.0, 1e-14);
    const int bin = h.angle_bin[i];
    if (bin == 0 || bin == 7) EXPECT_LT(h.modulated_similarity[i], 0.2);
  }
}

TEST(SimilarityHistogramTest, Errors) {
  const FourierCoefficients c({1.0});
  EXPECT_THROW(ComputeSimilarityHistogram({}, c, 0, 5), ContractError);
  EXPECT_THROW(
      ComputeSimilarityHistogram(
          {{{Eigen::Vector2d(1, 0), 0.0}, {Eigen::Vector3d(1, 0, 0), 0.0}}}, c),
      ContractError);
  EXPECT_THROW(
      ComputeSimilarityHistogram(
          {{{Eigen::Vector2d(0, 0), 0.0}, {Eigen::Vector2d(1, 0), 0.0}}}, c),
      ContractError);
}

TEST(SimilarityHistogramTest, Csv) {
  const FourierCoefficients c({1.0});
  const SimilarityHistogram h = ComputeSimilarityHistogram(
      {{{Eigen::Vector2d(1, 0), 0.0}, {Eigen::Vector2d(1, 0), 0.0}}}, c, 2, 2);
  std::ostringstream out;
  WriteSimilarityHistogramCsv(h, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "angle_bin,angle_lo,angle_hi,kind,sim_bin,sim_lo,sim_hi,count");
  int rows = 0;
  int total = 0;
  while (std::getline(in, line)) {
    ++rows;
    total += std::stoi(line.substr(line.rfind(',') + 1));
  }
  EXPECT_EQ(rows, 2 * 2 * 2);
  EXPECT_EQ(total, 2);
  EXPECT_EQ(h.raw(1, 1), 1);
  EXPECT_EQ(h.modulated(1, 1), 1);
}

}  // namespace
}  // namespace cvag
