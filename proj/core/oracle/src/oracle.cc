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

#include <cmath>
#include <limits>

namespace cvag::oracle {
namespace {

int Nearest(const CodebookModel& cb, const Eigen::VectorXd& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < cb.centroids.rows(); ++c) {
    double d = 0.0;
    for (int j = 0; j < x.size(); ++j) {
      const double t = x[j] - cb.centroids(c, j);
      d += t * t;
    }
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<double> Posteriors(const GmmModel& gmm, const Eigen::VectorXd& x) {
  const double kLog2Pi = std::log(2.0 * std::acos(-1.0));
  std::vector<double> logp(gmm.k());
  double top = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < gmm.k(); ++g) {
    double s = std::log(gmm.weights[g]);
    for (int j = 0; j < x.size(); ++j) {
      const double v = gmm.variances(g, j);
      const double t = x[j] - gmm.means(g, j);
      s -= 0.5 * (kLog2Pi + std::log(v) + t * t / v);
    }
    logp[g] = s;
    if (s > top) top = s;
  }
  double total = 0.0;
  for (double& l : logp) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logp) l /= total;
  return logp;
}

double Dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

}  // namespace

double LocalKernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const EmbeddingConfig& embedding) {
  switch (embedding.family()) {
    case EmbeddingFamily::kMonomial:
      return std::pow(Dot(x, y), embedding.monomial_degree());
    case EmbeddingFamily::kVlad: {
      const CodebookModel& cb = embedding.codebook();
      const int c = Nearest(cb, x);
      if (c != Nearest(cb, y)) return 0.0;
      const Eigen::VectorXd rx = x - cb.centroids.row(c).transpose();
      const Eigen::VectorXd ry = y - cb.centroids.row(c).transpose();
      const double nx = std::sqrt(Dot(rx, rx));
      const double ny = std::sqrt(Dot(ry, ry));
      if (nx == 0.0 || ny == 0.0) return 0.0;
      return Dot(rx, ry) / (nx * ny);
    }
    case EmbeddingFamily::kFisher: {
      const GmmModel& gmm = embedding.gmm();
      const std::vector<double> px = Posteriors(gmm, x);
      const std::vector<double> py = Posteriors(gmm, y);
      double s = 0.0;
      for (int g = 0; g < gmm.k(); ++g) {
        double inner = 0.0;
        for (int j = 0; j < x.size(); ++j) {
          inner += (x[j] - gmm.means(g, j)) * (y[j] - gmm.means(g, j)) /
                   gmm.variances(g, j);
        }
        s += px[g] * py[g] / gmm.weights[g] * inner;
      }
      return s;
    }
  }
  return 0.0;
}

double AngleKernel(double delta, const FourierCoefficients& coeffs) {
  double s = coeffs.gamma(0);
  for (int n = 1; n <= coeffs.num_frequencies(); ++n) {
    s += coeffs.gamma(n) * std::cos(n * delta);
  }
  return s;
}

namespace {

double CrossSum(const DescriptorSet& x, const DescriptorSet& y,
                const EmbeddingConfig& embedding,
                const FourierCoefficients& coeffs) {
  double s = 0.0;
  for (const DescriptorRecord& a : x.records) {
    for (const DescriptorRecord& b : y.records) {
      s += LocalKernel(a.descriptor, b.descriptor, embedding) *
           AngleKernel(a.angle - b.angle, coeffs);
    }
  }
  return s;
}

}  // namespace

double BruteMatchKernel(const DescriptorSet& x, const DescriptorSet& y,
                        const EmbeddingConfig& embedding,
                        const FourierCoefficients& coeffs) {
  const double kxx = CrossSum(x, x, embedding, coeffs);
  const double kyy = CrossSum(y, y, embedding, coeffs);
  return CrossSum(x, y, embedding, coeffs) / std::sqrt(kxx * kyy);
}

double BruteMonomialKernel(const std::vector<Eigen::VectorXd>& x,
                           const std::vector<Eigen::VectorXd>& y, int degree) {
  auto sum = [degree](const std::vector<Eigen::VectorXd>& a,
                      const std::vector<Eigen::VectorXd>& b) {
    double s = 0.0;
    for (const Eigen::VectorXd& u : a) {
      for (const Eigen::VectorXd& v : b) s += std::pow(Dot(u, v), degree);
    }
    return s;
  };
  return sum(x, y) / std::sqrt(sum(x, x) * sum(y, y));
}

}  // namespace cvag::oracle
