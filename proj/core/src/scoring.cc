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

#include "cvag/scoring.h"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "cvag/angle_map.h"
#include "cvag/error.h"

namespace cvag {
namespace {

std::atomic<std::uint64_t> g_block_inner_products{0};

template <typename A, typename B>
double BlockDot(const A& x, const B& y) {
  g_block_inner_products.fetch_add(1, std::memory_order_relaxed);
  return x.dot(y);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Golden-section search for a maximum of p on [lo, hi].
ScoreMaximum GoldenSection(const ScorePolynomial& p, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = p.Evaluate(c);
  double fd = p.Evaluate(d);
  for (int step = 0; step < kGoldenSectionSteps; ++step) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = p.Evaluate(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = p.Evaluate(d);
    }
  }
  return fc >= fd ? ScoreMaximum{c, fc} : ScoreMaximum{d, fd};
}

}  // namespace

double ScorePolynomial::Evaluate(double theta) const {
  double s = c0;
  for (int n = 1; n <= degree(); ++n) {
    s += a[n - 1] * std::cos(n * theta) + b[n - 1] * std::sin(n * theta);
  }
  return s;
}

double ScoreCosine(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw ContractError("cannot score vectors of dimension " +
                        std::to_string(x.size()) + " and " +
                        std::to_string(y.size()));
  }
  return x.dot(y);
}

double ScoreCosine(const ModulatedVector& x, const ModulatedVector& y) {
  x.CheckCompatible(y);
  return x.values().dot(y.values());
}

ScorePolynomial ComputeScorePolynomial(const ModulatedVector& x,
                                       const ModulatedVector& y) {
  x.CheckCompatible(y);
  ScorePolynomial p;
  p.c0 = BlockDot(x.constant_block(), y.constant_block());
  const int n_freq = x.num_frequencies();
  p.a.resize(n_freq);
  p.b.resize(n_freq);
  for (int n = 1; n <= n_freq; ++n) {
    const auto xc = x.cos_block(n);
    const auto xs = x.sin_block(n);
    const auto yc = y.cos_block(n);
    const auto ys = y.sin_block(n);
    p.a[n - 1] = BlockDot(xc, yc) + BlockDot(xs, ys);
    p.b[n - 1] = BlockDot(xs, yc) - BlockDot(xc, ys);
  }
  return p;
}

std::uint64_t BlockInnerProductCount() {
  return g_block_inner_products.load(std::memory_order_relaxed);
}

void ResetBlockInnerProductCount() {
  g_block_inner_products.store(0, std::memory_order_relaxed);
}

ScoreMaximum MaxScore(const ScorePolynomial& p, int samples) {
  if (samples < 2 * p.degree() + 1 || samples < 3) {
    throw ContractError("MaxScore needs at least max(3, 2N+1) samples, got " +
                        std::to_string(samples));
  }
  const double step = kTwoPi / samples;
  std::vector<double> values(samples);
  for (int i = 0; i < samples; ++i) values[i] = p.Evaluate(i * step);

  ScoreMaximum best{0.0, values[0]};
  for (int i = 1; i < samples; ++i) {
    if (values[i] > best.score) best = {i * step, values[i]};
  }
  for (int i = 0; i < samples; ++i) {
    const double prev = values[(i + samples - 1) % samples];
    const double next = values[(i + 1) % samples];
    if (values[i] < prev || values[i] < next) continue;
    const ScoreMaximum refined =
        GoldenSection(p, (i - 1) * step, (i + 1) * step);
    if (refined.score > best.score) best = refined;
  }
  best.theta = WrapAngle(best.theta);
  return best;
}

RotationScores ScoreRotations(const Eigen::MatrixXd& queries,
                              const Eigen::MatrixXd& database) {
  if (queries.cols() != database.cols()) {
    throw ContractError("query dimension " + std::to_string(queries.cols()) +
                        " does not match database dimension " +
                        std::to_string(database.cols()));
  }
  const Eigen::Index n_rot = queries.rows();
  const Eigen::MatrixXd scores = database * queries.transpose();
  RotationScores out;
  out.score.resize(database.rows());
  out.best_rotation.resize(database.rows());
  out.theta.resize(database.rows());
  for (Eigen::Index i = 0; i < database.rows(); ++i) {
    Eigen::Index r = 0;
    out.score[i] = scores.row(i).maxCoeff(&r);
    out.best_rotation[i] = static_cast<int>(r);
    out.theta[i] =
        WrapAngle(kTwoPi * static_cast<double>(r) / static_cast<double>(n_rot));
  }
  return out;
}

RotationScores QueryMultiRotation(const DescriptorSet& query,
                                  const Encoder& encoder,
                                  const Eigen::MatrixXd& database, int n_rot) {
  if (n_rot < 1) {
    throw ContractError("number of query rotations must be >= 1");
  }
  Eigen::MatrixXd queries(n_rot, encoder.output_dim());
  for (int r = 0; r < n_rot; ++r) {
    queries.row(r) = encoder.Encode(query, kTwoPi * r / n_rot).transpose();
  }
  return ScoreRotations(queries, database);
}

}  // namespace cvag
