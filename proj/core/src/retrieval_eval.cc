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

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "cvag/error.h"

namespace cvag {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::set<std::string> ParseIdList(const std::string& field,
                                  const std::string& label, int line_no) {
  const std::string prefix = label + ":";
  const std::string trimmed = Trim(field);
  if (trimmed.rfind(prefix, 0) != 0) {
    throw ParseError("ground truth line " + std::to_string(line_no) +
                     ": expected field starting with '" + prefix + "'");
  }
  std::set<std::string> ids;
  std::stringstream ss(trimmed.substr(prefix.size()));
  std::string id;
  while (std::getline(ss, id, ',')) {
    id = Trim(id);
    if (!id.empty()) ids.insert(id);
  }
  return ids;
}

template <typename Range>
std::string JoinIds(const Range& ids) {
  std::string out;
  for (const std::string& id : ids) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

}  // namespace

void QueryGroundTruth::Validate() const {
  for (const std::string& id : relevant) {
    if (junk.count(id)) {
      throw ContractError("query '" + query_id + "': id '" + id +
                          "' is both relevant and junk");
    }
  }
}

GroundTruth ParseGroundTruth(std::istream& in, bool exclude_query) {
  GroundTruth gt;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("ground truth line " + std::to_string(line_no) +
                       ": expected 2 or 3 tab-separated fields, got " +
                       std::to_string(fields.size()));
    }
    QueryGroundTruth q;
    q.query_id = Trim(fields[0]);
    if (q.query_id.empty()) {
      throw ParseError("ground truth line " + std::to_string(line_no) +
                       ": empty query id");
    }
    q.relevant = ParseIdList(fields[1], "relevant", line_no);
    if (fields.size() == 3) q.junk = ParseIdList(fields[2], "junk", line_no);
    q.exclude_query = exclude_query;
    try {
      q.Validate();
    } catch (const ContractError& e) {
      throw ParseError("ground truth line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    gt.queries.push_back(std::move(q));
  }
  return gt;
}

void WriteGroundTruth(const GroundTruth& gt, std::ostream& out) {
  for (const QueryGroundTruth& q : gt.queries) {
    out << q.query_id << "\trelevant: " << JoinIds(q.relevant)
        << "\tjunk: " << JoinIds(q.junk) << '\n';
  }
}

double AveragePrecision(const std::vector<std::string>& ranked,
                        const QueryGroundTruth& gt) {
  std::set<std::string> relevant = gt.relevant;
  if (gt.exclude_query) relevant.erase(gt.query_id);
  if (relevant.empty()) {
    throw ContractError("query '" + gt.query_id + "' has no relevant images");
  }
  std::unordered_set<std::string> seen;
  std::size_t rank = 0;  // position after junk removal
  std::size_t hits = 0;
  double precision_sum = 0.0;
  for (const std::string& id : ranked) {
    if (!seen.insert(id).second) {
      throw ContractError("ranking for '" + gt.query_id + "' lists '" + id +
                          "' twice");
    }
    if (gt.junk.count(id) || (gt.exclude_query && id == gt.query_id)) continue;
    ++rank;
    if (relevant.count(id)) {
      ++hits;
      precision_sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }
  return precision_sum / static_cast<double>(relevant.size());
}

double MeanAveragePrecision(const std::vector<double>& aps) {
  if (aps.empty()) throw ContractError("mAP of an empty query list");
  return std::accumulate(aps.begin(), aps.end(), 0.0) /
         static_cast<double>(aps.size());
}

std::vector<std::string> RankByScore(
    const std::vector<std::string>& ids,
    const Eigen::Ref<const Eigen::VectorXd>& scores) {
  if (static_cast<Eigen::Index>(ids.size()) != scores.size()) {
    throw ContractError("RankByScore: " + std::to_string(ids.size()) +
                        " ids for " + std::to_string(scores.size()) +
                        " scores");
  }
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  std::vector<std::string> ranked;
  ranked.reserve(ids.size());
  for (std::size_t i : order) ranked.push_back(ids[i]);
  return ranked;
}

}  // namespace cvag
