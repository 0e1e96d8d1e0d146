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

#include "cvag/retrieval_eval.h"

#include <gtest/gtest.h>

#include <sstream>

#include "cvag/error.h"

namespace cvag {
namespace {

QueryGroundTruth Gt(std::set<std::string> relevant,
                    std::set<std::string> junk = {}) {
  QueryGroundTruth gt;
  gt.query_id = "q";
  gt.relevant = std::move(relevant);
  gt.junk = std::move(junk);
  return gt;
}

TEST(AveragePrecisionTest, HandExample) {
  EXPECT_DOUBLE_EQ(AveragePrecision({"a", "x", "b"}, Gt({"a", "b"})),
                   5.0 / 6.0);
}

TEST(AveragePrecisionTest, PerfectAndWorst) {
  EXPECT_DOUBLE_EQ(AveragePrecision({"a", "b", "x", "y"}, Gt({"a", "b"})), 1.0);
  EXPECT_DOUBLE_EQ(AveragePrecision({"x", "y", "a", "b"}, Gt({"a", "b"})),
                   (1.0 / 3.0 + 2.0 / 4.0) / 2.0);
}

TEST(AveragePrecisionTest, MissingRelevantCountsAsZero) {
  EXPECT_DOUBLE_EQ(AveragePrecision({"a", "x"}, Gt({"a", "b"})), 0.5);
}

TEST(AveragePrecisionTest, JunkIsRemoved) {
  EXPECT_DOUBLE_EQ(
      AveragePrecision({"j", "a", "x", "b"}, Gt({"a", "b"}, {"j"})), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(AveragePrecision({"a", "j", "b"}, Gt({"a", "b"}, {"j"})),
                   1.0);
}

TEST(AveragePrecisionTest, QueryImageIsJunk) {
  EXPECT_DOUBLE_EQ(AveragePrecision({"q", "a", "x", "b"}, Gt({"a", "b"})),
                   5.0 / 6.0);
  QueryGroundTruth keep = Gt({"a", "b"});
  keep.exclude_query = false;
  EXPECT_DOUBLE_EQ(AveragePrecision({"q", "a", "x", "b"}, keep),
                   (0.5 + 2.0 / 4.0) / 2.0);
}

TEST(AveragePrecisionTest, Errors) {
  EXPECT_THROW(AveragePrecision({"a"}, Gt({})), ContractError);
  EXPECT_THROW(AveragePrecision({"a"}, Gt({"q"})), ContractError);
  EXPECT_THROW(AveragePrecision({"a", "a"}, Gt({"a"})), ContractError);
  EXPECT_THROW(Gt({"a"}, {"a"}).Validate(), ContractError);
}

TEST(MeanAveragePrecisionTest, Average) {
  EXPECT_DOUBLE_EQ(MeanAveragePrecision({1.0, 0.5, 0.0}), 0.5);
  EXPECT_THROW(MeanAveragePrecision({}), ContractError);
}

TEST(RankByScoreTest, DescendingWithIdTieBreak) {
  Eigen::VectorXd scores(4);
  scores << 0.5, 0.9, 0.5, -1.0;
  const std::vector<std::string> ranked =
      RankByScore({"c", "a", "b", "d"}, scores);
  EXPECT_EQ(ranked, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_THROW(RankByScore({"a"}, scores), ContractError);
}

TEST(GroundTruthTest, ParseAndWrite) {
  std::istringstream in(
      "# comment\n"
      "q1\trelevant: a, b\tjunk: j\n"
      "\n"
      "q2\trelevant:c\n");
  const GroundTruth gt = ParseGroundTruth(in);
  ASSERT_EQ(gt.queries.size(), 2u);
  EXPECT_EQ(gt.queries[0].query_id, "q1");
  EXPECT_EQ(gt.queries[0].relevant, (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(gt.queries[0].junk, (std::set<std::string>{"j"}));
  EXPECT_TRUE(gt.queries[1].junk.empty());
  EXPECT_TRUE(gt.queries[1].exclude_query);

  std::ostringstream out;
  WriteGroundTruth(gt, out);
  EXPECT_EQ(out.str(),
            "q1\trelevant: a,b\tjunk: j\n"
            "q2\trelevant: c\tjunk: \n");
  std::istringstream again(out.str());
  const GroundTruth round = ParseGroundTruth(again, false);
  EXPECT_EQ(round.queries[1].relevant, gt.queries[1].relevant);
  EXPECT_FALSE(round.queries[0].exclude_query);
}

TEST(GroundTruthTest, ParseErrors) {
  for (const char* text :
       {"q1\n", "q1\ta,b\n", "q1\trelevant: a\tbad: b\n", "\trelevant: a\n",
        "q1\trelevant: a\tjunk: a\n", "q1\trelevant: a\tjunk: b\textra\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ParseGroundTruth(in), ParseError) << text;
  }
}

}  // namespace
}  // namespace cvag
