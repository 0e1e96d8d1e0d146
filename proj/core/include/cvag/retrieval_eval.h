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

#ifndef CVAG_RETRIEVAL_EVAL_H_
#define CVAG_RETRIEVAL_EVAL_H_

#include <Eigen/Core>
#include <istream>
#include <set>
#include <string>
#include <vector>

namespace cvag {

// Ground truth of one query. Junk images are dropped from the ranking before
// precision is measured.
struct QueryGroundTruth {
  std::string query_id;
  std::set<std::string> relevant;
  std::set<std::string> junk;
  // Treat the query image itself as junk (it is usually part of the
  // database and trivially ranked first).
  bool exclude_query = true;

  // Throws ContractError if relevant and junk intersect.
  void Validate() const;
};

struct GroundTruth {
  std::vector<QueryGroundTruth> queries;
};

// Parses lines of the form
//   query_id<TAB>relevant: id,id,...<TAB>junk: id,id,...
// Blank lines and lines starting with '#' are skipped.
GroundTruth ParseGroundTruth(std::istream& in, bool exclude_query = true);
void WriteGroundTruth(const GroundTruth& gt, std::ostream& out);

// Non-interpolated average precision: the mean over relevant items of the
// precision at the rank of each relevant hit, junk removed. Relevant items
// missing from the ranking contribute zero. Throws ContractError for an
// empty relevant set or duplicated ids in the ranking.
double AveragePrecision(const std::vector<std::string>& ranked,
                        const QueryGroundTruth& gt);

// Arithmetic mean. Throws ContractError for an empty list.
double MeanAveragePrecision(const std::vector<double>& aps);

// Database ids sorted by decreasing score; equal scores are ordered by id.
std::vector<std::string> RankByScore(
    const std::vector<std::string>& ids,
    const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace cvag

#endif  // CVAG_RETRIEVAL_EVAL_H_
