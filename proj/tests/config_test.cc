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

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>

#include "cvag/error.h"
#include "cvag/io.h"

namespace cvag {
namespace {

TEST(PipelineConfigTest, JsonRoundTrip) {
  PipelineConfig c;
  c.family = EmbeddingFamily::kFisher;
  c.gmm_model = "/models/gmm.bin";
  c.pca_model = "/models/pca.bin";
  c.rn_model = "/models/rn.bin";
  c.angle = AngleMapConfig::CosinePower(6);
  c.power_law = PowerLawMode::kAdapted;
  c.power_law_exponent = 0.3;
  c.rn_exponent = 0.7;
  c.rn_whiten = true;
  c.truncate = 128;
  c.rotations = 1;
  c.polynomial_scoring = true;
  c.score_samples = 100;
  const PipelineConfig back = PipelineConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.family, c.family);
  EXPECT_EQ(back.gmm_model, c.gmm_model);
  EXPECT_EQ(back.pca_model, c.pca_model);
  EXPECT_EQ(back.rn_model, c.rn_model);
  EXPECT_TRUE(back.codebook_model.empty());
  EXPECT_EQ(back.angle.family, AngleKernelFamily::kCosinePower);
  EXPECT_EQ(back.angle.power, 6);
  EXPECT_EQ(back.angle.num_frequencies, c.angle.num_frequencies);
  EXPECT_EQ(back.power_law, PowerLawMode::kAdapted);
  EXPECT_EQ(back.power_law_exponent, 0.3);
  EXPECT_EQ(back.rn_exponent, 0.7);
  EXPECT_TRUE(back.rn_whiten);
  EXPECT_EQ(back.truncate, 128);
  EXPECT_EQ(back.rotations, 1);
  EXPECT_TRUE(back.polynomial_scoring);
  EXPECT_EQ(back.score_samples, 100);
  EXPECT_EQ(back.ToJson(), c.ToJson());
}

TEST(PipelineConfigTest, DefaultExponentDependsOnFamily) {
  PipelineConfig c;
  EXPECT_EQ(c.EffectivePowerLawExponent(), kPowerLawMonomial);
  c.family = EmbeddingFamily::kVlad;
  EXPECT_EQ(c.EffectivePowerLawExponent(), kPowerLawCodebook);
  EXPECT_FALSE(PipelineConfig::FromJson(c.ToJson()).rn_exponent.has_value());
}

TEST(PipelineConfigTest, ParseErrors) {
  EXPECT_THROW(PipelineConfig::FromJson("{"), ParseError);
  EXPECT_THROW(PipelineConfig::FromJson("{}"), ParseError);
  EXPECT_THROW(PipelineConfig::FromJson(R"({"family": "bow"})"), ParseError);
  EXPECT_THROW(
      PipelineConfig::FromJson(R"({"family": "monomial", "power_law": "x"})"),
      ParseError);
  EXPECT_THROW(
      PipelineConfig::FromJson(R"({"family": "monomial", "truncate": "x"})"),
      ParseError);
}

TEST(BuildEncoderTest, Monomial) {
  PipelineConfig c;
  c.monomial_degree = 3;
  const Encoder e = BuildEncoder(c, 8);
  EXPECT_EQ(e.base_dim(), 120);
  EXPECT_EQ(e.output_dim(), 120 * 7);
}

TEST(BuildEncoderTest, MissingModels) {
  PipelineConfig c;
  c.family = EmbeddingFamily::kVlad;
  EXPECT_THROW(BuildEncoder(c, 8), ContractError);
  c.family = EmbeddingFamily::kFisher;
  EXPECT_THROW(BuildEncoder(c, 8), ContractError);
  c.gmm_model = "/nonexistent/gmm.bin";
  EXPECT_THROW(BuildEncoder(c, 8), ParseError);
}

TEST(BuildEncoderTest, LoadsModels) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("cvag_config_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  PcaModel pca = TrainPca(Eigen::MatrixXd::Random(40, 6), 4);
  WriteModelFile(pca, dir / "pca.bin");
  RnModel rn(Eigen::MatrixXd::Identity(4 * 7, 4 * 7),
             Eigen::VectorXd::Ones(4 * 7));
  WriteModelFile(rn, dir / "rn.bin");

  PipelineConfig c;
  c.monomial_degree = 1;
  c.pca_model = (dir / "pca.bin").string();
  c.rn_model = (dir / "rn.bin").string();
  c.rn_exponent = 0.9;
  c.rn_whiten = true;
  c.truncate = 10;
  const Encoder e = BuildEncoder(c, 6);
  EXPECT_EQ(e.base_dim(), 4);
  EXPECT_EQ(e.output_dim(), 10);
  ASSERT_TRUE(e.postprocess().rn.has_value());
  EXPECT_EQ(e.postprocess().rn->exponent(), 0.9);
  EXPECT_EQ(e.postprocess().rn->mode(), RnMode::kWhiten);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace cvag
