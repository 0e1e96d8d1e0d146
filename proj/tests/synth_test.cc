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

#include "cvag/synth.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cvag/angle_map.h"
#include "cvag/error.h"

namespace cvag {
namespace {

TEST(SynthTest, Layout) {
  SynthConfig config;
  config.num_training = 5;
  const SynthCorpus c = GeneratePlantedCorpus(config);
  EXPECT_EQ(c.images.size(), 200u);
  EXPECT_EQ(c.rotations.size(), 200u);
  EXPECT_EQ(c.training.size(), 5u);
  EXPECT_EQ(c.images.front().image_id, "q0000");
  EXPECT_EQ(c.images[12].image_id, "m0_0000");
  EXPECT_EQ(c.images.back().image_id, "d0151");
  EXPECT_EQ(c.training[4].image_id, "t0004");
  std::set<std::string> ids;
  for (const DescriptorSet& s : c.images) {
    EXPECT_TRUE(ids.insert(s.image_id).second) << s.image_id;
    EXPECT_EQ(s.records.size(), 60u);
    EXPECT_EQ(s.dim(), 16);
  }
  ASSERT_EQ(c.ground_truth.queries.size(), 12u);
  for (const QueryGroundTruth& q : c.ground_truth.queries) {
    EXPECT_EQ(q.relevant.size(), 3u);
    for (const std::string& id : q.relevant) EXPECT_TRUE(ids.count(id));
  }
}

TEST(SynthTest, PlantedPairsFollowRotation) {
  SynthConfig config;
  config.angle_noise = 0.0;
  config.num_queries = 2;
  config.num_distractors = 0;
  const SynthCorpus c = GeneratePlantedCorpus(config);
  ASSERT_FALSE(c.planted_pairs.empty());
  for (const auto& [q, m] : c.planted_pairs) {
    EXPECT_NEAR((q.descriptor - m.descriptor).norm(), 0.0, 1.0);
    EXPECT_NEAR(m.descriptor.norm(), 1.0, 1e-12);
  }
  // Every planted angle differs from its source by one of the recorded
  // rotations.
  std::size_t matched = 0;
  for (const auto& [q, m] : c.planted_pairs) {
    for (double r : c.rotations) {
      if (r != 0.0 && std::abs(WrapAngle(q.angle - r - m.angle)) < 1e-12) {
        ++matched;
        break;
      }
    }
  }
  EXPECT_EQ(matched, c.planted_pairs.size());
}

TEST(SynthTest, Deterministic) {
  SynthConfig config;
  config.num_distractors = 3;
  const SynthCorpus a = GeneratePlantedCorpus(config);
  const SynthCorpus b = GeneratePlantedCorpus(config);
  ASSERT_EQ(a.images.size(), b.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    for (std::size_t r = 0; r < a.images[i].records.size(); ++r) {
      EXPECT_EQ(a.images[i].records[r].descriptor,
                b.images[i].records[r].descriptor);
      EXPECT_EQ(a.images[i].records[r].angle, b.images[i].records[r].angle);
    }
  }
  config.seed = 2;
  const SynthCorpus other = GeneratePlantedCorpus(config);
  EXPECT_NE(other.images[0].records[0].descriptor,
            a.images[0].records[0].descriptor);
}

TEST(SynthTest, InvalidConfig) {
  SynthConfig config;
  config.shared_fraction = 1.5;
  EXPECT_THROW(GeneratePlantedCorpus(config), ContractError);
  config = SynthConfig{};
  config.num_queries = 0;
  EXPECT_THROW(GeneratePlantedCorpus(config), ContractError);
  config = SynthConfig{};
  config.num_training = -1;
  EXPECT_THROW(GeneratePlantedCorpus(config), ContractError);
}

}  // namespace
}  // namespace cvag
