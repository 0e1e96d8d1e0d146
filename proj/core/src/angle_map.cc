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

#include "cvag/angle_map.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cvag/error.h"

namespace cvag {

std::string_view ToString(AngleKernelFamily family) {
  switch (family) {
    case AngleKernelFamily::kVonMises:
      return "von-mises";
    case AngleKernelFamily::kCosinePower:
      return "cosine-power";
  }
  return "unknown";
}

AngleKernelFamily ParseAngleKernelFamily(std::string_view name) {
  if (name == "von-mises" || name == "vm") return AngleKernelFamily::kVonMises;
  if (name == "cosine-power" || name == "cos") {
    return AngleKernelFamily::kCosinePower;
  }
  throw ParseError("unknown angle kernel family '" + std::string(name) + "'");
}

AngleMapConfig AngleMapConfig::VonMises(double kappa, int num_frequencies) {
  AngleMapConfig config;
  config.family = AngleKernelFamily::kVonMises;
  config.kappa = kappa;
  config.num_frequencies = num_frequencies;
  config.Validate();
  return config;
}

AngleMapConfig AngleMapConfig::CosinePower(int power) {
  AngleMapConfig config;
  config.family = AngleKernelFamily::kCosinePower;
  config.power = power;
  config.num_frequencies = power / 2;
  config.Validate();
  return config;
}

void AngleMapConfig::Validate() const {
  switch (family) {
    case AngleKernelFamily::kVonMises:
      if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw ContractError("Von Mises kappa must be positive, got " +
                            std::to_string(kappa));
      }
      if (num_frequencies < 0 || num_frequencies > kBesselMaxOrder - 1) {
        throw ContractError("number of frequencies out of range: " +
                            std::to_string(num_frequencies));
      }
      break;
    case AngleKernelFamily::kCosinePower:
      if (power < 2 || power % 2 != 0) {
        throw ContractError("cosine power must be even and >= 2, got " +
                            std::to_string(power));
      }
      break;
  }
}

int AngleMapConfig::EffectiveFrequencies() const {
  return family == AngleKernelFamily::kCosinePower ? power / 2
                                                   : num_frequencies;
}

FourierCoefficients::FourierCoefficients(std::vector<double> gamma)
    : gamma_(std::move(gamma)) {
  if (gamma_.empty()) {
    throw ContractError("Fourier coefficients need at least gamma_0");
  }
  sqrt_gamma_.reserve(gamma_.size());
  for (double g : gamma_) {
    if (!(g >= 0.0)) {
      throw ContractError("Fourier coefficients must be non-negative");
    }
    sqrt_gamma_.push_back(std::sqrt(g));
  }
}

double FourierCoefficients::sum() const {
  return std::accumulate(gamma_.begin(), gamma_.end(), 0.0);
}

double BesselI(int n, double x) {
  if (n < 0 || n > kBesselMaxOrder || !(x >= 0.0) || x > kBesselMaxArgument) {
    throw DomainError("BesselI(" + std::to_string(n) + ", " +
                      std::to_string(x) + ") outside supported range");
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  // Leading term (x/2)^n / n!, built as a product to avoid overflow of n!.
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= n; ++j) term *= half / j;

  const double quarter_sq = half * half;
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= quarter_sq / (static_cast<double>(k) * (k + n));
    sum += term;
    if (term <= 1e-16 * sum) break;
  }
  return sum;
}

double WrapAngle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(radians, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

double VonMisesKernel(double delta, double kappa) {
  if (!(kappa > 0.0)) throw ContractError("kappa must be positive");
  const double c = std::cos(WrapAngle(delta));
  // (e^{k c} - e^{-k}) / (e^k - e^{-k}), rescaled by e^{-k} so that large
  // kappa does not overflow.
  const double num = std::exp(kappa * (c - 1.0)) - std::exp(-2.0 * kappa);
  const double den = -std::expm1(-2.0 * kappa);
  return num / den;
}

double ExactAngleKernel(double delta, const AngleMapConfig& config) {
  if (config.family == AngleKernelFamily::kCosinePower) {
    return std::pow(std::cos(0.5 * WrapAngle(delta)), config.power);
  }
  return VonMisesKernel(delta, config.kappa);
}

namespace {

double BinomialCoefficient(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

}  // namespace

FourierCoefficients ComputeFourierCoefficients(const AngleMapConfig& config) {
  config.Validate();
  std::vector<double> gamma;
  if (config.family == AngleKernelFamily::kVonMises) {
    const double kappa = config.kappa;
    const int n_freq = config.num_frequencies;
    const double sinh_k = std::sinh(kappa);
    gamma.reserve(n_freq + 1);
    gamma.push_back((BesselI(0, kappa) - std::exp(-kappa)) / (2.0 * sinh_k));
    for (int n = 1; n <= n_freq; ++n) {
      gamma.push_back(BesselI(n, kappa) / sinh_k);
    }
  } else {
    const int p = config.power;
    const int half = p / 2;
    const double scale = std::ldexp(1.0, -p);
    gamma.push_back(scale * BinomialCoefficient(p, half));
    for (int n = 1; n <= half; ++n) {
      gamma.push_back(2.0 * scale * BinomialCoefficient(p, half - n));
    }
  }
  return FourierCoefficients(std::move(gamma));
}

double TruncatedKernel(double delta, const FourierCoefficients& coeffs) {
  const double d = WrapAngle(delta);
  double value = coeffs.gamma(0);
  for (int n = 1; n <= coeffs.num_frequencies(); ++n) {
    value += coeffs.gamma(n) * std::cos(n * d);
  }
  return value;
}

Eigen::VectorXd AngleFeature(double theta, const FourierCoefficients& coeffs) {
  const int n_freq = coeffs.num_frequencies();
  const double t = WrapAngle(theta);
  Eigen::VectorXd alpha(coeffs.feature_dim());
  alpha[0] = coeffs.sqrt_gamma(0);
  for (int n = 1; n <= n_freq; ++n) {
    alpha[n] = coeffs.sqrt_gamma(n) * std::cos(n * t);
    alpha[n_freq + n] = coeffs.sqrt_gamma(n) * std::sin(n * t);
  }
  return alpha;
}

}  // namespace cvag
