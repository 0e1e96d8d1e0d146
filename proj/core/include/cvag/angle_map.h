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

// Explicit feature maps for angle kernels.
//
// The shifted Von Mises kernel
//
//   k_vm(d) = (exp(kappa cos d) - exp(-kappa)) / (2 sinh kappa)
//
// has the Fourier expansion sum_n gamma_n cos(n d). Truncating it after N
// frequencies gives a kernel that is exactly reproduced by the inner product
// of the (2N+1)-dimensional vectors
//
//   alpha(t) = [sqrt(g0), sqrt(g1) cos t, ..., sqrt(gN) cos Nt,
//                         sqrt(g1) sin t, ..., sqrt(gN) sin Nt].
//
// The cosine-power kernel cos(d/2)^P (P even) has a finite expansion with
// P/2 frequencies and is therefore reproduced without truncation error.

#ifndef CVAG_ANGLE_MAP_H_
#define CVAG_ANGLE_MAP_H_

#include <Eigen/Core>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cvag {

enum class AngleKernelFamily : std::uint32_t {
  kVonMises = 0,
  kCosinePower = 1,
};

std::string_view ToString(AngleKernelFamily family);
AngleKernelFamily ParseAngleKernelFamily(std::string_view name);

inline constexpr double kDefaultKappa = 8.0;
inline constexpr int kDefaultNumFrequencies = 3;

struct AngleMapConfig {
  AngleKernelFamily family = AngleKernelFamily::kVonMises;
  // Von Mises concentration. Must be positive for kVonMises.
  double kappa = kDefaultKappa;
  // Number of retained frequencies N. Forced to power / 2 for kCosinePower.
  int num_frequencies = kDefaultNumFrequencies;
  // Even exponent P >= 2, kCosinePower only.
  int power = 2;

  static AngleMapConfig VonMises(double kappa, int num_frequencies);
  static AngleMapConfig CosinePower(int power);

  // Throws ContractError when the invariants of the selected family fail.
  void Validate() const;
  int EffectiveFrequencies() const;
};

// Series coefficients gamma_0..gamma_N, computed once per configuration.
class FourierCoefficients {
 public:
  FourierCoefficients() = default;
  explicit FourierCoefficients(std::vector<double> gamma);

  int num_frequencies() const { return static_cast<int>(gamma_.size()) - 1; }
  // Length of the angle feature, 2N + 1.
  int feature_dim() const { return 2 * num_frequencies() + 1; }
  double gamma(int n) const { return gamma_[n]; }
  const std::vector<double>& gamma() const { return gamma_; }
  double sqrt_gamma(int n) const { return sqrt_gamma_[n]; }
  // Value of the truncated kernel at zero, i.e. the sum of all gamma_n.
  double sum() const;

 private:
  std::vector<double> gamma_;
  std::vector<double> sqrt_gamma_;
};

// Supported argument range of BesselI.
inline constexpr int kBesselMaxOrder = 64;
inline constexpr double kBesselMaxArgument = 100.0;

// Modified Bessel function of the first kind I_n(x), evaluated by its
// ascending power series. Relative accuracy is ~1e-15 on
// 0 <= n <= 64, 0 <= x <= 100; outside that range a DomainError is thrown.
double BesselI(int n, double x);

// Maps an angle to (-pi, pi].
double WrapAngle(double radians);

// Shifted Von Mises kernel, in [0, 1] with k(0) = 1 and k(pi) = 0.
double VonMisesKernel(double delta, double kappa);

// Exact (untruncated) kernel of the configured family: VonMisesKernel or
// cos(delta / 2)^P.
double ExactAngleKernel(double delta, const AngleMapConfig& config);

FourierCoefficients ComputeFourierCoefficients(const AngleMapConfig& config);

// sum_n gamma_n cos(n delta). Not clamped: for small N it may leave [0, 1].
double TruncatedKernel(double delta, const FourierCoefficients& coeffs);

// Angle feature in the cosines-then-sines layout described above. Its
// squared norm is coeffs.sum() for every theta.
Eigen::VectorXd AngleFeature(double theta, const FourierCoefficients& coeffs);

}  // namespace cvag

#endif  // CVAG_ANGLE_MAP_H_
