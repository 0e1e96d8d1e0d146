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

// Auxiliary models learned on a training corpus: descriptor PCA, k-means
// codebooks for VLAD and diagonal Gaussian mixtures for Fisher vectors.
// All training routines are single-threaded and bit-reproducible for a fixed
// (data, parameters, seed) triple. Data matrices hold one sample per row.

#ifndef CVAG_CODEBOOK_TRAINING_H_
#define CVAG_CODEBOOK_TRAINING_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace cvag {

struct PcaModel {
  Eigen::VectorXd mean;
  // Full orthonormal basis, one principal direction per row, sorted by
  // descending eigenvalue. Rows past out_dim are kept so that descriptors
  // can be rotated without reduction.
  Eigen::MatrixXd basis;
  Eigen::VectorXd eigenvalues;
  int out_dim = 0;

  int input_dim() const { return static_cast<int>(mean.size()); }
  // First out_dim rows of the basis.
  Eigen::MatrixXd ReducedBasis() const { return basis.topRows(out_dim); }
  void Validate() const;
};

struct CodebookModel {
  Eigen::MatrixXd centroids;  // k x d

  int k() const { return static_cast<int>(centroids.rows()); }
  int dim() const { return static_cast<int>(centroids.cols()); }
  void Validate() const;
};

struct GmmModel {
  Eigen::VectorXd weights;    // k
  Eigen::MatrixXd means;      // k x d
  Eigen::MatrixXd variances;  // k x d, diagonal covariances

  int k() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }
  void Validate() const;
};

inline constexpr int kDefaultKmeansIterations = 25;
inline constexpr int kDefaultGmmIterations = 100;
// Variances are floored at this fraction of the global per-dimension
// variance.
inline constexpr double kGmmVarianceFloorRatio = 1e-4;

// Eigendecomposition of the empirical covariance. Throws NumericalError if
// the centred data has rank below out_dim; the message names the achievable
// rank.
PcaModel TrainPca(const Eigen::MatrixXd& data, int out_dim);

struct KmeansResult {
  CodebookModel model;
  // Objective (sum of squared distances) after every Lloyd iteration.
  std::vector<double> objective;
  int iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations. A cluster left empty by an
// assignment step is re-seeded at the point farthest from its centroid.
KmeansResult TrainKmeans(const Eigen::MatrixXd& data, int k, int max_iter,
                         std::uint64_t seed);

struct GmmResult {
  GmmModel model;
  // Mean per-sample log-likelihood, before the first EM step and after
  // every iteration.
  std::vector<double> log_likelihood;
  int iterations = 0;
};

// EM for a diagonal-covariance mixture, initialised from TrainKmeans with the
// same seed. Requires n >= 10 k.
GmmResult TrainGmm(const Eigen::MatrixXd& data, int k, int max_iter,
                   std::uint64_t seed);

// Posterior responsibilities of each component for x; sums to one.
Eigen::VectorXd GmmPosteriors(const GmmModel& model,
                              const Eigen::Ref<const Eigen::VectorXd>& x);

// Mean per-sample log-likelihood of data under the model.
double GmmLogLikelihood(const GmmModel& model, const Eigen::MatrixXd& data);

// Index of the nearest centroid; ties go to the lowest index.
int NearestCentroid(const CodebookModel& model,
                    const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace cvag

#endif  // CVAG_CODEBOOK_TRAINING_H_
