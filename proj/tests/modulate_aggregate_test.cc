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

#include "cvag/modulate_aggregate.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cvag/error.h"
#include "cvag/oracle.h"
#include "test_util.h"

namespace cvag {
namespace {

using testing::RandomAngle;
using testing::RandomSet;
using testing::RandomUnit;

FourierCoefficients VonMises(int n) {
  return ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, n));
}

TEST(ModulateTest, AxisVectorAtZero) {
  const FourierCoefficients c = VonMises(3);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v[0] = 1.0;
  const ModulatedVector m = Modulate(v, AngleFeature(0.0, c));
  EXPECT_EQ(m.size(), 28);
  EXPECT_DOUBLE_EQ(m.constant_block()[0], std::sqrt(c.gamma(0)));
  for (int n = 1; n <= 3; ++n) {
    EXPECT_DOUBLE_EQ(m.cos_block(n)[0], std::sqrt(c.gamma(n)));
    EXPECT_EQ(m.sin_block(n).squaredNorm(), 0.0);
  }
}

TEST(ModulateTest, IsPermutedKronecker) {
  std::mt19937_64 rng(1);
  const FourierCoefficients c = VonMises(2);
  const Eigen::VectorXd v = RandomUnit(rng, 3);
  const Eigen::VectorXd a = AngleFeature(0.8, c);
  const ModulatedVector m = Modulate(v, a);
  std::vector<int> hits(m.size(), 0);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < a.size(); ++k) {
      const Eigen::Index idx = KroneckerToFrequencyMajor(j, k, 3, 2);
      ++hits[idx];
      EXPECT_DOUBLE_EQ(m.values()[idx], v[j] * a[k]);
    }
  }
  EXPECT_TRUE(
      std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST(ModulateTest, InnerProductIdentity) {
  std::mt19937_64 rng(2);
  const FourierCoefficients c = VonMises(3);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = RandomUnit(rng, 10);
    const Eigen::VectorXd y = RandomUnit(rng, 10);
    const double tx = RandomAngle(rng);
    const double ty = RandomAngle(rng);
    const double lhs = Modulate(x, AngleFeature(tx, c))
                           .values()
                           .dot(Modulate(y, AngleFeature(ty, c)).values());
    EXPECT_NEAR(lhs, x.dot(y) * oracle::AngleKernel(tx - ty, c), 1e-10);
  }
}

TEST(ModulateTest, Dimensions) {
  EXPECT_EQ(ModulatedDim(80, 3), 560);
  EXPECT_EQ(ModulatedDim(3240, 3), 22680);
  EXPECT_EQ(ModulatedDim(4096, 3), 28672);
  EXPECT_EQ(ModulatedDim(2560, 3), 17920);
  EXPECT_EQ(ModulatedDim(80, 0), 80);
}

TEST(ModulatedVectorTest, Compatibility) {
  const ModulatedVector a(4, 2);
  const ModulatedVector b(4, 3);
  const ModulatedVector c(5, 2);
  EXPECT_NO_THROW(a.CheckCompatible(ModulatedVector(4, 2)));
  EXPECT_THROW(a.CheckCompatible(b), ContractError);
  EXPECT_THROW(a.CheckCompatible(c), ContractError);
  EXPECT_THROW(ModulatedVector(4, 2, Eigen::VectorXd::Zero(19)), ContractError);
}

TEST(AggregateTest, SingleDescriptor) {
  std::mt19937_64 rng(3);
  const FourierCoefficients c = VonMises(3);
  const DescriptorSet set = RandomSet(rng, 1, 6);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(1, 6);
  const ModulatedVector x = Aggregate(set, emb, c);
  const Eigen::VectorXd m =
      Modulate(set.records[0].descriptor, AngleFeature(set.records[0].angle, c))
          .values();
  EXPECT_LT((x.values() - m / m.norm()).norm(), 1e-14);
}

TEST(AggregateTest, UnitNormAndErrors) {
  std::mt19937_64 rng(4);
  const FourierCoefficients c = VonMises(3);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 5);
  EXPECT_NEAR(Aggregate(RandomSet(rng, 70, 5), emb, c).values().norm(), 1.0,
              1e-10);
  EXPECT_THROW(Aggregate(DescriptorSet{}, emb, c), ContractError);

  // Two opposite descriptors with the same angle cancel under phi_1.
  DescriptorSet cancel;
  const Eigen::VectorXd x = RandomUnit(rng, 5);
  cancel.records = {{x, 0.3}, {-x, 0.3}};
  EXPECT_THROW(Aggregate(cancel, EmbeddingConfig::Monomial(1, 5), c),
               NumericalError);
}

TEST(AggregateTest, MatchesOracle) {
  std::mt19937_64 rng(5);
  const FourierCoefficients c = VonMises(3);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 8);
  for (int i = 0; i < 20; ++i) {
    const DescriptorSet a = RandomSet(rng, 10, 8);
    const DescriptorSet b = RandomSet(rng, 10, 8);
    const double fast =
        Aggregate(a, emb, c).values().dot(Aggregate(b, emb, c).values());
    EXPECT_NEAR(fast, oracle::BruteMatchKernel(a, b, emb, c), 1e-8);
  }
}

TEST(AggregateTest, PermutationInvariance) {
  std::mt19937_64 rng(6);
  const FourierCoefficients c = VonMises(3);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 6);
  DescriptorSet set = RandomSet(rng, 100, 6);
  const Eigen::VectorXd before = Aggregate(set, emb, c).values();
  std::shuffle(set.records.begin(), set.records.end(), rng);
  EXPECT_LT((Aggregate(set, emb, c).values() - before).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(AggregateTest, GlobalRotationKeepsNorm) {
  std::mt19937_64 rng(7);
  const FourierCoefficients c = VonMises(3);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 6);
  const DescriptorSet set = RandomSet(rng, 40, 6);
  const double norm = AggregateUnnormalized(set, emb, c).values().norm();
  for (double theta : {0.3, -1.7, 3.0}) {
    EXPECT_NEAR(
        AggregateUnnormalized(RotateSet(set, theta), emb, c).values().norm(),
        norm, 1e-10 * norm);
  }
}

TEST(AggregateTest, Deterministic) {
  std::mt19937_64 rng(8);
  const FourierCoefficients c = VonMises(3);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 6);
  const DescriptorSet set = RandomSet(rng, 333, 6);
  EXPECT_EQ(Aggregate(set, emb, c).values(), Aggregate(set, emb, c).values());
}

TEST(RotateBlocksTest, MatchesRotatedSet) {
  std::mt19937_64 rng(9);
  const FourierCoefficients c = VonMises(4);
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 5);
  const DescriptorSet set = RandomSet(rng, 25, 5);
  const ModulatedVector x = Aggregate(set, emb, c);
  for (double theta : {0.0, 0.5, -2.2, 3.1}) {
    const ModulatedVector direct = Aggregate(RotateSet(set, theta), emb, c);
    EXPECT_LT((RotateBlocks(x, theta).values() - direct.values())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

}  // namespace
}  // namespace cvag
