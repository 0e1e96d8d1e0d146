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

#include "cvag/config.h"

#include <nlohmann/json.hpp>

#include "cvag/error.h"
#include "cvag/io.h"

namespace cvag {
namespace {

using nlohmann::json;

std::string_view PowerLawName(PowerLawMode mode) {
  switch (mode) {
    case PowerLawMode::kNone:
      return "none";
    case PowerLawMode::kPlain:
      return "plain";
    case PowerLawMode::kAdapted:
      return "adapted";
  }
  return "plain";
}

PowerLawMode ParsePowerLawMode(const std::string& name) {
  if (name == "none") return PowerLawMode::kNone;
  if (name == "plain") return PowerLawMode::kPlain;
  if (name == "adapted") return PowerLawMode::kAdapted;
  throw ParseError("unknown power-law mode '" + name + "'");
}

}  // namespace

double PipelineConfig::EffectivePowerLawExponent() const {
  return power_law_exponent ? *power_law_exponent
                            : DefaultPowerLawExponent(family);
}

std::string PipelineConfig::ToJson() const {
  json j;
  j["family"] = std::string(ToString(family));
  j["monomial_degree"] = monomial_degree;
  j["pca_model"] = pca_model;
  j["codebook_model"] = codebook_model;
  j["gmm_model"] = gmm_model;
  j["rn_model"] = rn_model;
  j["angle"] = {
      {"family", std::string(ToString(angle.family))},
      {"kappa", angle.kappa},
      {"num_frequencies", angle.num_frequencies},
      {"power", angle.power},
  };
  j["power_law"] = std::string(PowerLawName(power_law));
  j["power_law_exponent"] = EffectivePowerLawExponent();
  if (rn_exponent) j["rn_exponent"] = *rn_exponent;
  j["rn_whiten"] = rn_whiten;
  j["truncate"] = truncate;
  j["rotations"] = rotations;
  j["polynomial_scoring"] = polynomial_scoring;
  j["score_samples"] = score_samples;
  return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::FromJson(std::string_view text) {
  PipelineConfig c;
  try {
    const json j = json::parse(text);
    c.family = ParseEmbeddingFamily(j.at("family").get<std::string>());
    c.monomial_degree = j.value("monomial_degree", c.monomial_degree);
    c.pca_model = j.value("pca_model", std::string());
    c.codebook_model = j.value("codebook_model", std::string());
    c.gmm_model = j.value("gmm_model", std::string());
    c.rn_model = j.value("rn_model", std::string());
    if (j.contains("angle")) {
      const json& a = j.at("angle");
      c.angle.family = ParseAngleKernelFamily(
          a.value("family", std::string(ToString(c.angle.family))));
      c.angle.kappa = a.value("kappa", c.angle.kappa);
      c.angle.num_frequencies =
          a.value("num_frequencies", c.angle.num_frequencies);
      c.angle.power = a.value("power", c.angle.power);
    }
    c.power_law = ParsePowerLawMode(j.value("power_law", std::string("plain")));
    if (j.contains("power_law_exponent")) {
      c.power_law_exponent = j.at("power_law_exponent").get<double>();
    }
    if (j.contains("rn_exponent")) {
      c.rn_exponent = j.at("rn_exponent").get<double>();
    }
    c.rn_whiten = j.value("rn_whiten", c.rn_whiten);
    c.truncate = j.value("truncate", c.truncate);
    c.rotations = j.value("rotations", c.rotations);
    c.polynomial_scoring = j.value("polynomial_scoring", c.polynomial_scoring);
    c.score_samples = j.value("score_samples", c.score_samples);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid pipeline manifest: ") + e.what());
  }
  return c;
}

Encoder BuildEncoder(const PipelineConfig& config, int input_dim) {
  std::optional<PcaModel> pca;
  if (!config.pca_model.empty()) pca = ReadPcaModel(config.pca_model);

  std::optional<EmbeddingConfig> embedding;
  switch (config.family) {
    case EmbeddingFamily::kMonomial:
      embedding = EmbeddingConfig::Monomial(config.monomial_degree,
                                            pca ? pca->out_dim : input_dim);
      break;
    case EmbeddingFamily::kVlad:
      if (config.codebook_model.empty()) {
        throw ContractError("VLAD encoding needs a k-means codebook model");
      }
      embedding =
          EmbeddingConfig::Vlad(ReadCodebookModel(config.codebook_model));
      break;
    case EmbeddingFamily::kFisher:
      if (config.gmm_model.empty()) {
        throw ContractError("Fisher encoding needs a GMM model");
      }
      embedding = EmbeddingConfig::Fisher(ReadGmmModel(config.gmm_model));
      break;
  }

  PostprocessOptions post;
  post.power_law = config.power_law;
  post.exponent = config.EffectivePowerLawExponent();
  if (!config.rn_model.empty()) {
    RnModel rn = ReadRnModel(config.rn_model);
    if (config.rn_exponent) rn.set_exponent(*config.rn_exponent);
    if (config.rn_whiten) rn.set_mode(RnMode::kWhiten);
    post.rn = std::move(rn);
  }
  post.truncate = config.truncate;
  return Encoder(std::move(*embedding), config.angle, std::move(post),
                 std::move(pca));
}

}  // namespace cvag
