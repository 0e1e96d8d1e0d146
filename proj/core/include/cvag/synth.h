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

// Synthetic planted-match retrieval corpus.
//
// Local descriptors are drawn around a small shared vocabulary of random
// unit "visual words", so that unrelated images contain many similar
// descriptors. Each query image plants its descriptors into
// `matches_per_query` matching images: a `shared_fraction` of the query
// records is copied with Gaussian descriptor noise, every copied angle is
// shifted by one global rotation of the matching image (plus small angle
// noise), and the rest of the image is filled with fresh descriptors.
// Distractors consist of fresh descriptors only. Fresh descriptors have
// uniform random orientations.

#ifndef CVAG_SYNTH_H_
#define CVAG_SYNTH_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "cvag/descriptor_embed.h"
#include "cvag/retrieval_eval.h"

namespace cvag {

struct SynthConfig {
  int num_queries = 12;
  int matches_per_query = 3;
  int num_distractors = 152;
  int descriptors_per_image = 60;
  int dim = 16;
  int vocabulary = 8;
  // Spread of fresh descriptors around their visual word (per component).
  double word_spread = 0.15;
  // Noise added to planted copies of query descriptors (per component).
  double descriptor_noise = 0.1;
  double angle_noise = 0.05;
  double shared_fraction = 0.5;
  // Extra images of fresh descriptors for training auxiliary models; they
  // are not part of the database.
  int num_training = 0;
  std::uint64_t seed = 1;
};

struct SynthCorpus {
  // Queries first, then for each query its matches, then distractors. Every
  // image is part of the database; queries are excluded from their own
  // rankings.
  std::vector<DescriptorSet> images;
  GroundTruth ground_truth;
  // Global rotation applied to each image relative to its query (0 for
  // queries and distractors).
  std::vector<double> rotations;
  // num_training images with ids t0000, t0001, ...
  std::vector<DescriptorSet> training;
  // Every planted record as (query record, copy in the matching image).
  std::vector<std::pair<DescriptorRecord, DescriptorRecord>> planted_pairs;
};

SynthCorpus GeneratePlantedCorpus(const SynthConfig& config);

}  // namespace cvag

#endif  // CVAG_SYNTH_H_
