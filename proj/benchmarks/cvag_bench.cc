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

#include <benchmark/benchmark.h>

#include <random>

#include "cvag/angle_map.h"
#include "cvag/descriptor_embed.h"
#include "cvag/modulate_aggregate.h"
#include "cvag/monomial_embed.h"
#include "cvag/pipeline.h"
#include "cvag/scoring.h"

namespace cvag {
namespace {

Eigen::VectorXd RandomUnit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int j = 0; j < dim; ++j) v[j] = normal(rng);
  return v.normalized();
}

DescriptorSet RandomSet(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  DescriptorSet set;
  for (int i = 0; i < n; ++i)
    set.records.push_back({RandomUnit(rng, dim), angle(rng)});
  return set;
}

void BM_AngleFeature(benchmark::State& state) {
  const FourierCoefficients c = ComputeFourierCoefficients(
      AngleMapConfig::VonMises(8.0, static_cast<int>(state.range(0))));
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AngleFeature(theta, c));
    theta += 0.01;
  }
}
BENCHMARK(BM_AngleFeature)->Arg(3)->Arg(10);

void BM_PhiMonomial(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int dim = static_cast<int>(state.range(0));
  const MonomialConfig config{2, dim};
  const Eigen::VectorXd x = RandomUnit(rng, dim);
  for (auto _ : state) benchmark::DoNotOptimize(PhiMonomial(x, config));
}
BENCHMARK(BM_PhiMonomial)->Arg(32)->Arg(80);

void BM_Aggregate(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const FourierCoefficients c =
      ComputeFourierCoefficients(AngleMapConfig::VonMises(8.0, 3));
  const EmbeddingConfig emb = EmbeddingConfig::Monomial(2, 32);
  const DescriptorSet set =
      RandomSet(rng, static_cast<int>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(Aggregate(set, emb, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aggregate)->Arg(300)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_ComputeScorePolynomial(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int n = static_cast<int>(state.range(0));
  const ModulatedVector x(3240, n, RandomUnit(rng, 3240 * (2 * n + 1)));
  const ModulatedVector y(3240, n, RandomUnit(rng, 3240 * (2 * n + 1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeScorePolynomial(x, y));
  }
}
BENCHMARK(BM_ComputeScorePolynomial)->Arg(1)->Arg(3);

void BM_MaxScore(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const ModulatedVector x(64, 3, RandomUnit(rng, 64 * 7));
  const ModulatedVector y(64, 3, RandomUnit(rng, 64 * 7));
  const ScorePolynomial p = ComputeScorePolynomial(x, y);
  for (auto _ : state) benchmark::DoNotOptimize(MaxScore(p));
}
BENCHMARK(BM_MaxScore);

void BM_QueryMultiRotation(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const Encoder encoder(EmbeddingConfig::Monomial(2, 32),
                        AngleMapConfig::VonMises(8.0, 3));
  const DescriptorSet query = RandomSet(rng, 500, 32);
  Eigen::MatrixXd db(1000, encoder.output_dim());
  for (Eigen::Index i = 0; i < db.rows(); ++i) {
    db.row(i) = RandomUnit(rng, static_cast<int>(db.cols())).transpose();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(QueryMultiRotation(
        query, encoder, db, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_QueryMultiRotation)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cvag

BENCHMARK_MAIN();
