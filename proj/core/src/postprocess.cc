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

#include "cvag/postprocess.h"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <string>

#include "cvag/error.h"

namespace cvag {
namespace {

void CheckExponent(double a) {
  if (!(a > 0.0) || a > 1.0) {
    throw ContractError("power-law exponent must be in (0, 1], got " +
                        std::to_string(a));
  }
}

double SignedPower(double z, double a) {
  return std::copysign(std::pow(std::abs(z), a), z);
}

}  // namespace

Eigen::VectorXd L2Normalize(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) return v;
  return v / norm;
}

Eigen::VectorXd PowerLaw(const Eigen::Ref<const Eigen::VectorXd>& v, double a) {
  CheckExponent(a);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = SignedPower(v[i], a);
  return L2Normalize(out);
}

ModulatedVector AdaptedPowerLaw(const ModulatedVector& x, double a) {
  CheckExponent(a);
  ModulatedVector out = x;
  auto x0 = out.block(0);
  for (Eigen::Index j = 0; j < x0.size(); ++j) x0[j] = SignedPower(x0[j], a);
  for (int n = 1; n <= x.num_frequencies(); ++n) {
    auto c = out.cos_block(n);
    auto s = out.sin_block(n);
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      const double modulus = std::hypot(c[j], s[j]);
      if (modulus == 0.0) continue;
      const double scale = std::pow(modulus, a - 1.0);
      c[j] *= scale;
      s[j] *= scale;
    }
  }
  out.values() = L2Normalize(out.values());
  return out;
}

struct RnModel::Completion {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;
};

RnModel::RnModel(Eigen::MatrixXd basis, Eigen::VectorXd eigenvalues,
                 double exponent, RnMode mode)
    : basis_(std::move(basis)),
      eigenvalues_(std::move(eigenvalues)),
      exponent_(exponent),
      mode_(mode) {
  if (basis_.rows() < 1 || basis_.rows() > basis_.cols() ||
      eigenvalues_.size() != basis_.rows()) {
    throw ContractError("RN model has inconsistent dimensions");
  }
  CheckExponent(exponent_);
  const Eigen::MatrixXd gram = basis_ * basis_.transpose();
  const double err =
      (gram - Eigen::MatrixXd::Identity(rank(), rank())).cwiseAbs().maxCoeff();
  if (err > 1e-8) {
    throw ContractError("RN basis is not orthonormal (error " +
                        std::to_string(err) + ")");
  }
  if (rank() < dim()) {
    auto completion = std::make_shared<Completion>();
    completion->qr.compute(basis_.transpose());
    completion_ = std::move(completion);
  }
}

Eigen::VectorXd RnModel::Rotate(
    const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != dim()) {
    throw ContractError("RN model expects dimension " + std::to_string(dim()) +
                        ", got " + std::to_string(v.size()));
  }
  if (!completion_) return basis_ * v;
  // The first rank() columns of Q span the rows of basis_, so the trailing
  // coordinates of Q^T v describe the orthogonal complement.
  Eigen::VectorXd out = completion_->qr.householderQ().adjoint() * v;
  out.head(rank()) = basis_ * v;
  return out;
}

RnTrainResult TrainRn(const std::vector<Eigen::VectorXd>& vectors,
                      double exponent) {
  CheckExponent(exponent);
  if (vectors.size() < 2) {
    throw ContractError("RN training needs at least two vectors");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index dim = vectors.front().size();
  Eigen::MatrixXd data(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) {
      throw ContractError("RN training vectors differ in dimension");
    }
    data.row(i) = vectors[i].transpose();
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;

  // Directions as columns, eigenvalues of the covariance, descending.
  Eigen::MatrixXd directions;
  Eigen::VectorXd values;
  if (n <= dim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(data *
                                                          data.transpose());
    directions = data.transpose() * solver.eigenvectors();
    values = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(data.transpose() *
                                                          data);
    directions = solver.eigenvectors();
    values = solver.eigenvalues();
  }
  if (!values.allFinite()) {
    throw NumericalError("RN eigendecomposition failed");
  }

  const Eigen::Index m = values.size();
  const double top = std::max(values[m - 1], 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = m - 1; i >= 0; --i) {
    if (top > 0.0 && values[i] > 1e-12 * top) keep.push_back(i);
  }
  if (keep.empty()) {
    throw NumericalError("RN training vectors are all identical");
  }
  const Eigen::Index rank = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd basis(dim, rank);
  Eigen::VectorXd eigenvalues(rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    basis.col(r) = directions.col(keep[r]).normalized();
    eigenvalues[r] = values[keep[r]] / static_cast<double>(n);
  }
  // Re-orthonormalise (the Gram route loses a few digits), then fix signs so
  // the largest entry of each direction is positive.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    Eigen::Index arg = 0;
    q.col(r).cwiseAbs().maxCoeff(&arg);
    if (q(arg, r) < 0.0) q.col(r) = -q.col(r);
  }

  RnTrainResult result;
  result.model = RnModel(q.transpose(), eigenvalues, exponent);
  if (rank < dim) {
    result.warning = "RN: only " + std::to_string(n) +
                     " training vectors for dimension " + std::to_string(dim) +
                     "; rotation learned on a " + std::to_string(rank) +
                     "-dimensional subspace, identity elsewhere";
  }
  return result;
}

Eigen::VectorXd ApplyRn(const Eigen::Ref<const Eigen::VectorXd>& v,
                        const RnModel& model) {
  Eigen::VectorXd rotated = model.Rotate(v);
  if (model.mode() == RnMode::kWhiten) {
    const double eps = 1e-12 * std::max(model.eigenvalues()[0], 1e-300);
    for (Eigen::Index r = 0; r < model.rank(); ++r) {
      rotated[r] /= std::sqrt(model.eigenvalues()[r] + eps);
    }
    return L2Normalize(rotated);
  }
  return PowerLaw(rotated, model.exponent());
}

Eigen::VectorXd TruncateL2(const Eigen::Ref<const Eigen::VectorXd>& v,
                           int d_out) {
  if (d_out <= 0) {
    throw ContractError("truncation dimension must be positive, got " +
                        std::to_string(d_out));
  }
  if (d_out > v.size()) {
    throw ContractError("truncation dimension " + std::to_string(d_out) +
                        " exceeds vector dimension " +
                        std::to_string(v.size()));
  }
  return L2Normalize(v.head(d_out));
}

}  // namespace cvag
