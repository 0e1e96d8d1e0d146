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

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "cvag/angle_map.h"
#include "cvag/error.h"

namespace cvag {
namespace {

class Generator {
 public:
  Generator(const SynthConfig& config)
      : config_(config), rng_(config.seed), words_(config.vocabulary) {
    for (Eigen::VectorXd& w : words_) w = RandomUnit();
  }

  Eigen::VectorXd RandomUnit() {
    Eigen::VectorXd v(config_.dim);
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = normal_(rng_);
    return v.normalized();
  }

  Eigen::VectorXd Perturb(const Eigen::VectorXd& x, double sigma) {
    Eigen::VectorXd v = x;
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += sigma * normal_(rng_);
    return v.normalized();
  }

  double UniformAngle() {
    return WrapAngle(std::uniform_real_distribution<double>(
        -std::numbers::pi, std::numbers::pi)(rng_));
  }

  DescriptorRecord Fresh() {
    std::uniform_int_distribution<int> word(0, config_.vocabulary - 1);
    return {Perturb(words_[word(rng_)], config_.word_spread), UniformAngle()};
  }

  DescriptorSet FreshImage(std::string id) {
    DescriptorSet set;
    set.image_id = std::move(id);
    for (int i = 0; i < config_.descriptors_per_image; ++i) {
      set.records.push_back(Fresh());
    }
    return set;
  }

  DescriptorSet Plant(
      const DescriptorSet& query, std::string id, double rotation,
      std::vector<std::pair<DescriptorRecord, DescriptorRecord>>* pairs) {
    std::bernoulli_distribution keep(config_.shared_fraction);
    DescriptorSet set;
    set.image_id = std::move(id);
    for (const DescriptorRecord& r : query.records) {
      if (!keep(rng_)) continue;
      set.records.push_back({Perturb(r.descriptor, config_.descriptor_noise),
                             WrapAngle(r.angle - rotation +
                                       config_.angle_noise * normal_(rng_))});
      pairs->emplace_back(r, set.records.back());
    }
    while (static_cast<int>(set.records.size()) <
           config_.descriptors_per_image) {
      set.records.push_back(Fresh());
    }
    // Planted records would otherwise always come first.
    std::shuffle(set.records.begin(), set.records.end(), rng_);
    return set;
  }

 private:
  const SynthConfig& config_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::vector<Eigen::VectorXd> words_;
};

std::string ImageId(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, index);
  return buf;
}

}  // namespace

SynthCorpus GeneratePlantedCorpus(const SynthConfig& config) {
  if (config.num_queries < 1 || config.matches_per_query < 1 ||
      config.num_distractors < 0 || config.num_training < 0 ||
      config.descriptors_per_image < 1 || config.dim < 2 ||
      config.vocabulary < 1 || config.shared_fraction < 0.0 ||
      config.shared_fraction > 1.0) {
    throw ContractError("invalid synthetic corpus configuration");
  }
  Generator gen(config);
  SynthCorpus corpus;
  std::vector<DescriptorSet> queries;
  for (int q = 0; q < config.num_queries; ++q) {
    queries.push_back(gen.FreshImage(ImageId("q", q)));
  }
  for (const DescriptorSet& q : queries) {
    corpus.images.push_back(q);
    corpus.rotations.push_back(0.0);
  }
  for (int q = 0; q < config.num_queries; ++q) {
    QueryGroundTruth gt;
    gt.query_id = queries[q].image_id;
    for (int m = 0; m < config.matches_per_query; ++m) {
      const double rotation = gen.UniformAngle();
      std::string id = ImageId(("m" + std::to_string(q) + "_").c_str(), m);
      gt.relevant.insert(id);
      corpus.images.push_back(gen.Plant(queries[q], std::move(id), rotation,
                                        &corpus.planted_pairs));
      corpus.rotations.push_back(rotation);
    }
    corpus.ground_truth.queries.push_back(std::move(gt));
  }
  for (int i = 0; i < config.num_distractors; ++i) {
    corpus.images.push_back(gen.FreshImage(ImageId("d", i)));
    corpus.rotations.push_back(0.0);
  }
  for (int i = 0; i < config.num_training; ++i) {
    corpus.training.push_back(gen.FreshImage(ImageId("t", i)));
  }
  return corpus;
}

}  // namespace cvag
