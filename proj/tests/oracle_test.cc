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

#include "cvag/oracle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvag/codebook_training.h"
#include "cvag/modulate_aggregate.h"
#include "test_util.h"

namespace cvag {
namespace {

using testing::RandomSet;
using testing::RandomUnit;

std::vector<Eigen::VectorXd> Descriptors(const DescriptorSet& set) {
  std::vector<Eigen::VectorXd> out;
  for (const DescriptorRecord& r : set.records) out.push_back(r.descriptor);
  return out;
}

TEST(BruteMatchKernelTest, SelfIsOne) {
  std::mt19937_64 rng(1);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  const DescriptorSet x = RandomSet(rng, 12, 6);
  EXPECT_NEAR(
      oracle::BruteMatchKernel(x, x, EmbeddingConfig::Monomial(2, 6), c), 1.0,
      1e-14);
}

TEST(BruteMatchKernelTest, ConstantAngleKernelGivesPlainKernel) {
  std::mt19937_64 rng(2);
  const FourierCoefficients flat({1.0});
  const DescriptorSet x = RandomSet(rng, 7, 5);
  const DescriptorSet y = RandomSet(rng, 9, 5);
  for (int p = 1; p <= 3; ++p) {
    EXPECT_NEAR(
        oracle::BruteMatchKernel(x, y, EmbeddingConfig::Monomial(p, 5), flat),
        oracle::BruteMonomialKernel(Descriptors(x), Descriptors(y), p), 1e-14);
  }
}

TEST(BruteMatchKernelTest, SymmetricAndBounded) {
  std::mt19937_64 rng(3);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 6);
  for (int i = 0; i < 10; ++i) {
    const DescriptorSet x = RandomSet(rng, 8, 6);
    const DescriptorSet y = RandomSet(rng, 11, 6);
    const double xy = oracle::BruteMatchKernel(x, y, emb, c);
    EXPECT_NEAR(xy, oracle::BruteMatchKernel(y, x, emb, c), 1e-14);
    EXPECT_LE(std::abs(xy), 1.0 + 1e-14);
  }
}

TEST(BruteMatchKernelTest, EqualsAggregatedInnerProduct) {
  std::mt19937_64 rng(4);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  CodebookModel cb;
  cb.centroids.resize(4, 8);
  for (int k = 0; k < 4; ++k) cb.centroids.row(k) = RandomUnit(rng, 8);
  GmmModel gmm;
  gmm.weights = Eigen::VectorXd::Constant(3, 1.0 / 3);
  gmm.means.resize(3, 8);
  for (int k = 0; k < 3; ++k) gmm.means.row(k) = 0.3 * RandomUnit(rng, 8);
  gmm.variances = Eigen::MatrixXd::Constant(3, 8, 0.1);
  for (const EmbeddingConfig& emb :
       {EmbeddingConfig::Monomial(2, 8), EmbeddingConfig::Vlad(cb),
        EmbeddingConfig::Fisher(gmm)}) {
    for (int i = 0; i < 10; ++i) {
      const DescriptorSet x = RandomSet(rng, 10, 8);
      const DescriptorSet y = RandomSet(rng, 10, 8);
      EXPECT_NEAR(
          Aggregate(x, emb, c).values().dot(Aggregate(y, emb, c).values()),
          oracle::BruteMatchKernel(x, y, emb, c), 1e-8)
          << ToString(emb.family());
    }
  }
}

TEST(BruteMonomialKernelTest, DegreeOneIsSummedVectors) {
  std::mt19937_64 rng(5);
  const DescriptorSet x = RandomSet(rng, 6, 4);
  const DescriptorSet y = RandomSet(rng, 5, 4);
  Eigen::VectorXd sx = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd sy = Eigen::VectorXd::Zero(4);
  for (const auto& r : x.records) sx += r.descriptor;
  for (const auto& r : y.records) sy += r.descriptor;
  EXPECT_NEAR(oracle::BruteMonomialKernel(Descriptors(x), Descriptors(y), 1),
              sx.normalized().dot(sy.normalized()), 1e-14);
}

TEST(BruteMonomialKernelTest, SingletonsAndAggregate) {
  std::mt19937_64 rng(6);
  const Eigen::VectorXd a = RandomUnit(rng, 5);
  const Eigen::VectorXd b = RandomUnit(rng, 5);
  const double dot = a.dot(b);
  for (int p = 1; p <= 3; ++p) {
    // Normalisation of a singleton is <x,x>^p = 1, so the result is exact
    // up to the sign convention of odd powers.
    EXPECT_NEAR(oracle::BruteMonomialKernel({a}, {b}, p), std::pow(dot, p),
                1e-15);
  }
  const FourierCoefficients flat({1.0});
  for (int p = 1; p <= 3; ++p) {
    const DescriptorSet x = RandomSet(rng, 9, 5);
    const DescriptorSet y = RandomSet(rng, 9, 5);
    const EmbeddingConfig emb = EmbeddingConfig::Monomial(p, 5);
    EXPECT_NEAR(
        Aggregate(x, emb, flat).values().dot(Aggregate(y, emb, flat).values()),
        oracle::BruteMonomialKernel(Descriptors(x), Descriptors(y), p), 1e-10);
  }
}

}  // namespace
}  // namespace cvag
