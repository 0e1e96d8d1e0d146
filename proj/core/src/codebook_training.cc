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

#include "cvag/codebook_training.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cvag/error.h"

namespace cvag {
namespace {

// Column-major copy of the samples so that each sample is contiguous.
Eigen::MatrixXd SamplesAsColumns(const Eigen::MatrixXd& data) {
  return data.transpose();
}

double SquaredDistance(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

// Fills assignment/distance for every sample; returns the objective.
double Assign(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& centers,
              std::vector<int>* assignment, std::vector<double>* dist) {
  const int d = static_cast<int>(samples.rows());
  const Eigen::Index n = samples.cols();
  const Eigen::Index k = centers.cols();
  double objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* x = samples.col(i).data();
    int best = 0;
    double best_d = SquaredDistance(x, centers.col(0).data(), d);
    for (Eigen::Index c = 1; c < k; ++c) {
      const double dc = SquaredDistance(x, centers.col(c).data(), d);
      if (dc < best_d) {
        best_d = dc;
        best = static_cast<int>(c);
      }
    }
    (*assignment)[i] = best;
    (*dist)[i] = best_d;
    objective += best_d;
  }
  return objective;
}

Eigen::MatrixXd KmeansPlusPlus(const Eigen::MatrixXd& samples, int k,
                               std::mt19937_64& rng) {
  const int d = static_cast<int>(samples.rows());
  const Eigen::Index n = samples.cols();
  Eigen::MatrixXd centers(d, k);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.col(0) = samples.col(pick(rng));

  std::vector<double> min_dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    min_dist[i] =
        SquaredDistance(samples.col(i).data(), centers.col(0).data(), d);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : min_dist) total += v;
    if (!(total > 0.0)) {
      throw ContractError("k-means: data has fewer than k = " +
                          std::to_string(k) + " distinct points");
    }
    const double target = unit(rng) * total;
    double acc = 0.0;
    Eigen::Index chosen = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (min_dist[i] <= 0.0) continue;
      acc += min_dist[i];
      chosen = i;
      if (acc >= target) break;
    }
    centers.col(c) = samples.col(chosen);
    for (Eigen::Index i = 0; i < n; ++i) {
      min_dist[i] = std::min(
          min_dist[i],
          SquaredDistance(samples.col(i).data(), centers.col(c).data(), d));
    }
  }
  return centers;
}

void CheckData(const Eigen::MatrixXd& data) {
  if (data.rows() == 0 || data.cols() == 0) {
    throw ContractError("training data is empty");
  }
  if (!data.allFinite()) {
    throw ContractError("training data contains non-finite values");
  }
}

struct KmeansState {
  Eigen::MatrixXd centers;  // d x k
  std::vector<int> assignment;
  std::vector<double> objective;
  int iterations = 0;
};

KmeansState RunKmeans(const Eigen::MatrixXd& samples, int k, int max_iter,
                      std::uint64_t seed) {
  const int d = static_cast<int>(samples.rows());
  const Eigen::Index n = samples.cols();
  std::mt19937_64 rng(seed);

  KmeansState state;
  state.centers = KmeansPlusPlus(samples, k, rng);
  state.assignment.assign(n, 0);
  std::vector<double> dist(n);
  state.objective.push_back(
      Assign(samples, state.centers, &state.assignment, &dist));

  std::vector<int> previous;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(d, k);
    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(state.assignment[i]) += samples.col(i);
      ++counts[state.assignment[i]];
    }
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) state.centers.col(c) = sums.col(c) / counts[c];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[i] =
          SquaredDistance(samples.col(i).data(),
                          state.centers.col(state.assignment[i]).data(), d);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      const auto far = std::max_element(dist.begin(), dist.end());
      const Eigen::Index idx = far - dist.begin();
      state.centers.col(c) = samples.col(idx);
      dist[idx] = 0.0;
      reseeded = true;
    }

    previous = state.assignment;
    state.objective.push_back(
        Assign(samples, state.centers, &state.assignment, &dist));
    state.iterations = iter + 1;
    if (!reseeded && previous == state.assignment) break;
  }
  return state;
}

}  // namespace

void PcaModel::Validate() const {
  const Eigen::Index d = mean.size();
  if (d == 0 || basis.rows() != d || basis.cols() != d ||
      eigenvalues.size() != d) {
    throw ContractError("PCA model has inconsistent dimensions");
  }
  if (out_dim < 1 || out_dim > d) {
    throw ContractError("PCA output dimension out of range");
  }
}

void CodebookModel::Validate() const {
  if (centroids.rows() < 1 || centroids.cols() < 1) {
    throw ContractError("codebook must have at least one centroid");
  }
  for (Eigen::Index a = 0; a < centroids.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < centroids.rows(); ++b) {
      if ((centroids.row(a) - centroids.row(b)).squaredNorm() == 0.0) {
        throw NumericalError("codebook has duplicate centroids " +
                             std::to_string(a) + " and " + std::to_string(b));
      }
    }
  }
}

void GmmModel::Validate() const {
  if (weights.size() < 1 || means.rows() != weights.size() ||
      variances.rows() != weights.size() || means.cols() != variances.cols() ||
      means.cols() < 1) {
    throw ContractError("GMM has inconsistent dimensions");
  }
  if ((weights.array() <= 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-10) {
    throw ContractError("GMM weights must be positive and sum to one");
  }
  if ((variances.array() <= 0.0).any()) {
    throw ContractError("GMM variances must be positive");
  }
}

PcaModel TrainPca(const Eigen::MatrixXd& data, int out_dim) {
  CheckData(data);
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (out_dim < 1 || out_dim > d) {
    throw ContractError("PCA output dimension " + std::to_string(out_dim) +
                        " not in [1, " + std::to_string(d) + "]");
  }
  if (n <= out_dim) {
    throw ContractError("PCA needs more samples (" + std::to_string(n) +
                        ") than output dimensions (" + std::to_string(out_dim) +
                        ")");
  }

  PcaModel model;
  model.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("PCA eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  model.basis.resize(d, d);
  model.eigenvalues.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index src = d - 1 - i;
    model.eigenvalues[i] = std::max(0.0, solver.eigenvalues()[src]);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    model.basis.row(i) = v.transpose();
  }

  const double top = model.eigenvalues[0];
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (top > 0.0 && model.eigenvalues[i] > 1e-12 * top) ++rank;
  }
  if (rank < out_dim) {
    throw NumericalError("PCA: training data has rank " + std::to_string(rank) +
                         ", cannot keep " + std::to_string(out_dim) +
                         " components");
  }
  model.out_dim = out_dim;
  return model;
}

KmeansResult TrainKmeans(const Eigen::MatrixXd& data, int k, int max_iter,
                         std::uint64_t seed) {
  CheckData(data);
  if (k < 1) throw ContractError("k-means needs k >= 1");
  if (data.rows() < k) {
    throw ContractError("k-means needs at least k = " + std::to_string(k) +
                        " samples, got " + std::to_string(data.rows()));
  }
  if (max_iter < 0) throw ContractError("negative iteration count");

  KmeansState state = RunKmeans(SamplesAsColumns(data), k, max_iter, seed);
  KmeansResult result;
  result.model.centroids = state.centers.transpose();
  result.objective = std::move(state.objective);
  result.iterations = state.iterations;
  result.model.Validate();
  return result;
}

namespace {

// log N(x | mean, diag(var)) for every component, plus log weight.
void ComponentLogDensities(const GmmModel& model, const double* x,
                           const Eigen::VectorXd& log_norm,
                           Eigen::VectorXd* out) {
  const int k = model.k();
  const int d = model.dim();
  for (int g = 0; g < k; ++g) {
    double q = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = x[j] - model.means(g, j);
      q += diff * diff / model.variances(g, j);
    }
    (*out)[g] = log_norm[g] - 0.5 * q;
  }
}

Eigen::VectorXd LogNormalizers(const GmmModel& model) {
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  Eigen::VectorXd log_norm(model.k());
  for (int g = 0; g < model.k(); ++g) {
    log_norm[g] = std::log(model.weights[g]) -
                  0.5 * (model.dim() * log_two_pi +
                         model.variances.row(g).array().log().sum());
  }
  return log_norm;
}

// Converts log densities to responsibilities in place; returns log p(x).
double NormalizeLogDensities(Eigen::VectorXd* v) {
  const double m = v->maxCoeff();
  double s = 0.0;
  for (Eigen::Index g = 0; g < v->size(); ++g) {
    (*v)[g] = std::exp((*v)[g] - m);
    s += (*v)[g];
  }
  *v /= s;
  return m + std::log(s);
}

}  // namespace

Eigen::VectorXd GmmPosteriors(const GmmModel& model,
                              const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.dim()) {
    throw ContractError("descriptor dimension " + std::to_string(x.size()) +
                        " does not match GMM dimension " +
                        std::to_string(model.dim()));
  }
  const Eigen::VectorXd xc = x;
  Eigen::VectorXd post(model.k());
  ComponentLogDensities(model, xc.data(), LogNormalizers(model), &post);
  NormalizeLogDensities(&post);
  return post;
}

double GmmLogLikelihood(const GmmModel& model, const Eigen::MatrixXd& data) {
  const Eigen::MatrixXd samples = SamplesAsColumns(data);
  const Eigen::VectorXd log_norm = LogNormalizers(model);
  Eigen::VectorXd buf(model.k());
  double total = 0.0;
  for (Eigen::Index i = 0; i < samples.cols(); ++i) {
    ComponentLogDensities(model, samples.col(i).data(), log_norm, &buf);
    total += NormalizeLogDensities(&buf);
  }
  return total / static_cast<double>(samples.cols());
}

GmmResult TrainGmm(const Eigen::MatrixXd& data, int k, int max_iter,
                   std::uint64_t seed) {
  CheckData(data);
  if (k < 1) throw ContractError("GMM needs k >= 1");
  const Eigen::Index n = data.rows();
  const int d = static_cast<int>(data.cols());
  if (n < 10 * static_cast<Eigen::Index>(k)) {
    throw ContractError("GMM needs at least 10 k = " + std::to_string(10 * k) +
                        " samples, got " + std::to_string(n));
  }
  if (max_iter < 0) throw ContractError("negative iteration count");

  const Eigen::MatrixXd samples = SamplesAsColumns(data);
  const Eigen::VectorXd global_mean = samples.rowwise().mean();
  const Eigen::VectorXd global_var =
      (samples.colwise() - global_mean).array().square().rowwise().mean();
  const Eigen::VectorXd floor = (kGmmVarianceFloorRatio * global_var.array())
                                    .max(std::numeric_limits<double>::min());

  const KmeansState km = RunKmeans(samples, k, kDefaultKmeansIterations, seed);

  GmmResult result;
  GmmModel& model = result.model;
  model.weights = Eigen::VectorXd::Zero(k);
  model.means = km.centers.transpose();
  model.variances = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = km.assignment[i];
    model.weights[c] += 1.0;
    model.variances.row(c) += (samples.col(i) - km.centers.col(c))
                                  .array()
                                  .square()
                                  .matrix()
                                  .transpose();
  }
  for (int g = 0; g < k; ++g) {
    model.variances.row(g) /= std::max(model.weights[g], 1.0);
    model.variances.row(g) = model.variances.row(g).cwiseMax(floor.transpose());
  }
  model.weights /= static_cast<double>(n);

  Eigen::MatrixXd resp(k, n);
  Eigen::VectorXd buf(k);
  double previous_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    // E step.
    const Eigen::VectorXd log_norm = LogNormalizers(model);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      ComponentLogDensities(model, samples.col(i).data(), log_norm, &buf);
      ll += NormalizeLogDensities(&buf);
      resp.col(i) = buf;
    }
    ll /= static_cast<double>(n);
    result.log_likelihood.push_back(ll);
    if (iter == max_iter) break;
    if (iter > 0 && std::abs(ll - previous_ll) <= 1e-12 * std::abs(ll)) break;
    previous_ll = ll;

    // M step.
    const Eigen::VectorXd mass = resp.rowwise().sum();
    for (int g = 0; g < k; ++g) {
      if (!(mass[g] > 0.0)) {
        throw NumericalError("GMM component " + std::to_string(g) +
                             " lost all its mass");
      }
      const Eigen::VectorXd mean = samples * resp.row(g).transpose() / mass[g];
      Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
      for (Eigen::Index i = 0; i < n; ++i) {
        var += resp(g, i) * (samples.col(i) - mean).array().square().matrix();
      }
      var /= mass[g];
      model.means.row(g) = mean.transpose();
      model.variances.row(g) = var.cwiseMax(floor).transpose();
    }
    model.weights = mass / mass.sum();
    result.iterations = iter + 1;
  }
  model.Validate();
  return result;
}

int NearestCentroid(const CodebookModel& model,
                    const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.dim()) {
    throw ContractError("descriptor dimension " + std::to_string(x.size()) +
                        " does not match codebook dimension " +
                        std::to_string(model.dim()));
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < model.k(); ++c) {
    const double dc = (model.centroids.row(c).transpose() - x).squaredNorm();
    if (dc < best_d) {
      best_d = dc;
      best = c;
    }
  }
  return best;
}

}  // namespace cvag
