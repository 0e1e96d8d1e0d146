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

#include "cvag/io.h"

#include <gtest/gtest.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "cvag/error.h"
#include "test_util.h"

namespace cvag {
namespace {

namespace fs = std::filesystem;
using testing::RandomSet;
using testing::RandomUnit;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cvag_io_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(IoTest, DescriptorRoundTrip) {
  std::mt19937_64 rng(1);
  DescriptorSet set = RandomSet(rng, 17, 9);
  set.raw_sift = true;
  WriteDescriptorFile(set, dir_ / "img.cvd");
  const DescriptorSet back = ReadDescriptorFile(dir_ / "img.cvd");
  EXPECT_EQ(back.image_id, "img");
  EXPECT_TRUE(back.raw_sift);
  ASSERT_EQ(back.records.size(), 17u);
  for (std::size_t i = 0; i < 17; ++i) {
    EXPECT_LT((back.records[i].descriptor - set.records[i].descriptor)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-7);
    EXPECT_NEAR(back.records[i].angle, set.records[i].angle, 1e-6);
  }
  EXPECT_EQ(ReadDescriptorFile(dir_ / "img.cvd", "other").image_id, "other");
}

TEST_F(IoTest, EmptyDescriptorSet) {
  DescriptorSet empty;
  const DescriptorSet back =
      DecodeDescriptorSet(EncodeDescriptorSet(empty), "mem", "e");
  EXPECT_TRUE(back.records.empty());
}

TEST_F(IoTest, TruncatedDescriptorFileReportsSizes) {
  std::mt19937_64 rng(2);
  const std::string bytes = EncodeDescriptorSet(RandomSet(rng, 3, 4));
  ASSERT_EQ(bytes.size(), 24u + 3u * 5u * 4u);
  try {
    DecodeDescriptorSet(std::string_view(bytes).substr(0, bytes.size() - 4),
                        "cut.cvd", "cut");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cut.cvd"), std::string::npos) << msg;
    EXPECT_NE(msg.find("needs 84 bytes"), std::string::npos) << msg;
    EXPECT_NE(msg.find("file has 80"), std::string::npos) << msg;
  }
  EXPECT_THROW(DecodeDescriptorSet(bytes + "x", "long", "l"), ParseError);
  EXPECT_THROW(DecodeDescriptorSet(bytes.substr(0, 10), "head", "h"),
               ParseError);
}

TEST_F(IoTest, BadMagicAndFlags) {
  std::mt19937_64 rng(3);
  std::string bytes = EncodeDescriptorSet(RandomSet(rng, 2, 3));
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DecodeDescriptorSet(bad, "m", "m"), ParseError);
  bad = bytes;
  bad[20] = 4;  // unknown flag bit
  EXPECT_THROW(DecodeDescriptorSet(bad, "m", "m"), ParseError);
}

TEST_F(IoTest, NonFiniteValuesRejected) {
  DescriptorSet set;
  set.records.push_back(
      {Eigen::Vector3d(1.0, std::numeric_limits<double>::quiet_NaN(), 0.0),
       0.0});
  EXPECT_THROW(DecodeDescriptorSet(EncodeDescriptorSet(set), "nan", "n"),
               ParseError);
  set.records[0] = {Eigen::Vector3d(1.0, 0.0, 0.0),
                    std::numeric_limits<double>::infinity()};
  EXPECT_THROW(DecodeDescriptorSet(EncodeDescriptorSet(set), "inf", "i"),
               ParseError);
}

TEST_F(IoTest, MissingFile) {
  EXPECT_THROW(ReadDescriptorFile(dir_ / "nope.cvd"), ParseError);
}

TEST_F(IoTest, PcaRoundTrip) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd data(50, 5);
  for (int i = 0; i < 50; ++i) data.row(i) = RandomUnit(rng, 5).transpose();
  const PcaModel model = TrainPca(data, 3);
  WriteModelFile(model, dir_ / "pca.bin");
  EXPECT_EQ(PeekModelKind(dir_ / "pca.bin"), ModelKind::kPca);
  const PcaModel back = ReadPcaModel(dir_ / "pca.bin");
  EXPECT_EQ(back.out_dim, 3);
  EXPECT_EQ(back.mean, model.mean);
  EXPECT_EQ(back.eigenvalues, model.eigenvalues);
  EXPECT_EQ(back.basis, model.basis);
  EXPECT_THROW(ReadCodebookModel(dir_ / "pca.bin"), ParseError);
}

TEST_F(IoTest, CodebookAndGmmRoundTrip) {
  CodebookModel cb;
  cb.centroids = Eigen::MatrixXd::Random(4, 3);
  WriteModelFile(cb, dir_ / "cb.bin");
  EXPECT_EQ(ReadCodebookModel(dir_ / "cb.bin").centroids, cb.centroids);
  EXPECT_EQ(PeekModelKind(dir_ / "cb.bin"), ModelKind::kKmeans);

  GmmModel gmm;
  gmm.weights = Eigen::Vector2d(0.25, 0.75);
  gmm.means = Eigen::MatrixXd::Random(2, 3);
  gmm.variances = Eigen::MatrixXd::Constant(2, 3, 0.5);
  WriteModelFile(gmm, dir_ / "gmm.bin");
  const GmmModel back = ReadGmmModel(dir_ / "gmm.bin");
  EXPECT_EQ(back.weights, gmm.weights);
  EXPECT_EQ(back.means, gmm.means);
  EXPECT_EQ(back.variances, gmm.variances);
}

TEST_F(IoTest, RnRoundTrip) {
  std::mt19937_64 rng(5);
  std::vector<Eigen::VectorXd> data;
  for (int i = 0; i < 30; ++i) data.push_back(RandomUnit(rng, 6));
  RnModel model = TrainRn(data, 0.4).model;
  model.set_mode(RnMode::kWhiten);
  WriteModelFile(model, dir_ / "rn.bin");
  const RnModel back = ReadRnModel(dir_ / "rn.bin");
  EXPECT_EQ(back.basis(), model.basis());
  EXPECT_EQ(back.eigenvalues(), model.eigenvalues());
  EXPECT_EQ(back.exponent(), 0.4);
  EXPECT_EQ(back.mode(), RnMode::kWhiten);
}

TEST_F(IoTest, TruncatedModel) {
  CodebookModel cb;
  cb.centroids = Eigen::MatrixXd::Random(4, 3);
  WriteModelFile(cb, dir_ / "cb.bin");
  const std::string bytes = ReadFileBytes(dir_ / "cb.bin");
  WriteFileAtomic(dir_ / "cut.bin", bytes.substr(0, bytes.size() - 8));
  try {
    ReadCodebookModel(dir_ / "cut.bin");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos)
        << e.what();
  }
}

TEST_F(IoTest, VectorDatabaseRoundTrip) {
  VectorDatabase db;
  db.header = {4, 1, EmbeddingFamily::kFisher, 12};
  db.ids = {"a", "bb", "ccc"};
  db.vectors = Eigen::MatrixXd::Random(3, 12).cast<float>().cast<double>();
  WriteVectorFile(db, dir_ / "db.vec");
  const VectorDatabase back = ReadVectorFile(dir_ / "db.vec");
  EXPECT_EQ(back.header, db.header);
  EXPECT_EQ(back.ids, db.ids);
  EXPECT_EQ(back.vectors, db.vectors);

  db.header.stored_dim = 11;
  EXPECT_THROW(EncodeVectorDatabase(db), ContractError);
}

TEST_F(IoTest, VectorDatabaseTruncated) {
  VectorDatabase db;
  db.header = {2, 0, EmbeddingFamily::kMonomial, 2};
  db.ids = {"a", "b"};
  db.vectors = Eigen::MatrixXd::Ones(2, 2);
  const std::string bytes = EncodeVectorDatabase(db);
  for (std::size_t cut : {std::size_t{5}, bytes.size() - 1}) {
    EXPECT_THROW(DecodeVectorDatabase(bytes.substr(0, cut), "db"), ParseError)
        << cut;
  }
}

TEST_F(IoTest, AtomicWriteLeavesNoTemporary) {
  WriteFileAtomic(dir_ / "f.txt", "hello");
  WriteFileAtomic(dir_ / "f.txt", "again");
  EXPECT_EQ(ReadFileBytes(dir_ / "f.txt"), "again");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    (void)e;
    ++entries;
  }
  EXPECT_EQ(entries, 1);
  EXPECT_THROW(WriteFileAtomic(dir_ / "missing" / "f.txt", "x"), Error);
}

}  // namespace
}  // namespace cvag
