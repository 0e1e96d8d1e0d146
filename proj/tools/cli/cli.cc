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

#include "cli/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "cvag/angle_map.h"
#include "cvag/codebook_training.h"
#include "cvag/config.h"
#include "cvag/error.h"
#include "cvag/io.h"
#include "cvag/pipeline.h"
#include "cvag/postprocess.h"
#include "cvag/retrieval_eval.h"
#include "cvag/scoring.h"
#include "cvag/similarity_histogram.h"
#include "cvag/synth.h"

namespace cvag::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kDescriptorExtension = ".cvd";
constexpr std::string_view kTrainIdsSuffix = ".train-ids";
constexpr std::string_view kPipelineSuffix = ".pipeline.json";

// Shortest representation that reads back to the same double.
std::string Num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

fs::path WithSuffix(const fs::path& path, std::string_view suffix) {
  return fs::path(path.string() + std::string(suffix));
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0..n-1) on `threads` workers with a fixed interleaved split. The
// exception of the lowest failing index is rethrown.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Files given directly plus every *.cvd file of the given directories, the
// latter in lexicographic order.
std::vector<fs::path> ExpandInputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const fs::directory_entry& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() &&
            e.path().extension() == kDescriptorExtension) {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw ContractError("no descriptor files given");
  return files;
}

std::vector<DescriptorSet> LoadSets(const std::vector<std::string>& inputs,
                                    int threads) {
  const std::vector<fs::path> files = ExpandInputs(inputs);
  std::vector<DescriptorSet> sets(files.size());
  ParallelFor(files.size(), threads,
              [&](std::size_t i) { sets[i] = ReadDescriptorFile(files[i]); });
  std::set<std::string> seen;
  for (const DescriptorSet& s : sets) {
    if (!seen.insert(s.image_id).second) {
      throw ContractError("image id '" + s.image_id + "' appears twice");
    }
  }
  return sets;
}

int CommonDim(const std::vector<DescriptorSet>& sets) {
  int dim = 0;
  for (const DescriptorSet& s : sets) {
    const int d = s.dim();
    if (d == 0) continue;
    if (dim != 0 && d != dim) {
      throw ContractError("descriptor dimension " + std::to_string(d) +
                          " of '" + s.image_id + "' differs from " +
                          std::to_string(dim));
    }
    dim = d;
  }
  if (dim == 0) throw ContractError("all descriptor sets are empty");
  return dim;
}

Eigen::MatrixXd StackDescriptors(const std::vector<DescriptorSet>& sets) {
  std::size_t rows = 0;
  for (const DescriptorSet& s : sets) rows += s.size();
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), CommonDim(sets));
  Eigen::Index r = 0;
  for (const DescriptorSet& s : sets) {
    for (const DescriptorRecord& rec : s.records) {
      data.row(r++) = rec.descriptor.transpose();
    }
  }
  return data;
}

std::vector<DescriptorSet> PreprocessAll(const std::vector<DescriptorSet>& sets,
                                         const PcaModel* pca, bool reduce) {
  std::vector<DescriptorSet> out;
  out.reserve(sets.size());
  for (const DescriptorSet& s : sets) {
    out.push_back(PreprocessDescriptors(s, pca, reduce));
  }
  return out;
}

std::vector<DescriptorSet> RootSiftAll(const std::vector<DescriptorSet>& sets) {
  std::vector<DescriptorSet> out = sets;
  for (DescriptorSet& s : out) {
    if (!s.raw_sift) continue;
    for (DescriptorRecord& r : s.records) r.descriptor = RootSift(r.descriptor);
    s.raw_sift = false;
  }
  return out;
}

void WriteTrainIds(const fs::path& model_path,
                   const std::vector<DescriptorSet>& sets) {
  std::vector<std::string> ids;
  for (const DescriptorSet& s : sets) ids.push_back(s.image_id);
  std::sort(ids.begin(), ids.end());
  std::string text;
  for (const std::string& id : ids) text += id + "\n";
  WriteFileAtomic(WithSuffix(model_path, kTrainIdsSuffix), text);
}

std::set<std::string> ReadTrainIds(const fs::path& model_path) {
  std::set<std::string> ids;
  const fs::path p = WithSuffix(model_path, kTrainIdsSuffix);
  if (!fs::exists(p)) return ids;
  std::istringstream in(ReadFileBytes(p));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ids.insert(line);
  }
  return ids;
}

// Training and evaluation images must be distinct.
void CheckDisjoint(const PipelineConfig& config,
                   const std::vector<std::string>& ids) {
  for (const std::string& model : {config.pca_model, config.codebook_model,
                                   config.gmm_model, config.rn_model}) {
    if (model.empty()) continue;
    const std::set<std::string> train = ReadTrainIds(model);
    for (const std::string& id : ids) {
      if (train.count(id)) {
        throw ContractError("image '" + id + "' was used to train " + model);
      }
    }
  }
}

void WriteOutput(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteFileAtomic(path, text);
  }
}

std::string Absolute(const std::string& path) {
  if (path.empty()) return path;
  return fs::absolute(path).lexically_normal().string();
}

// Pipeline options shared by train-rn and encode.
struct PipelineFlags {
  std::string family = "monomial";
  int degree = 2;
  std::string pca;
  std::string codebook;
  std::string gmm;
  std::string rn;
  std::string angle_kernel = "von-mises";
  double kappa = kDefaultKappa;
  int frequencies = kDefaultNumFrequencies;
  int cos_power = 2;
  double power_law = 0.0;
  double adapted_power_law = 0.0;
  bool no_power_law = false;
  double rn_exponent = 0.0;
  bool rn_whiten = false;
  int truncate = 0;
};

struct AngleFlags {
  std::string kernel = "von-mises";
  double kappa = kDefaultKappa;
  int frequencies = kDefaultNumFrequencies;
  int cos_power = 2;

  AngleMapConfig ToConfig() const {
    AngleMapConfig c;
    c.family = ParseAngleKernelFamily(kernel);
    c.kappa = kappa;
    c.num_frequencies = frequencies;
    c.power = cos_power;
    c.Validate();
    return c;
  }
};

void AddAngleFlags(CLI::App* app, const std::string& family_flag,
                   std::string* kernel, double* kappa, int* frequencies,
                   int* cos_power) {
  app->add_option(family_flag, *kernel,
                  "Angle kernel: von-mises or cosine-power");
  app->add_option("--kappa", *kappa, "Von Mises concentration");
  app->add_option("--nfreq", *frequencies,
                  "Retained frequencies N (von-mises)");
  app->add_option("--cos-power", *cos_power, "Even exponent P (cosine-power)");
}

void AddPipelineFlags(CLI::App* app, PipelineFlags* f, bool with_rn) {
  app->add_option("--family", f->family, "monomial, vlad or fisher");
  app->add_option("--degree", f->degree, "Monomial degree");
  app->add_option("--pca", f->pca, "Descriptor PCA model");
  app->add_option("--codebook", f->codebook, "k-means model (vlad)");
  app->add_option("--gmm", f->gmm, "GMM model (fisher)");
  AddAngleFlags(app, "--angle-family", &f->angle_kernel, &f->kappa,
                &f->frequencies, &f->cos_power);
  // Mutual exclusion is checked on the values in ToPipelineConfig so that
  // manifests, which list every option, can be replayed.
  app->add_option(
      "--power-law", f->power_law,
      "Component-wise power-law exponent; 0 selects the family default");
  app->add_option("--adapted-power-law", f->adapted_power_law,
                  "Use the modulus-based power law with this exponent");
  app->add_flag("--no-power-law", f->no_power_law, "Skip the power law");
  app->add_option("--rn-exponent", f->rn_exponent,
                  "Second power-law exponent; 0 keeps the model value");
  if (with_rn) {
    app->add_option("--rn", f->rn, "RN model");
    app->add_flag("--rn-whiten", f->rn_whiten,
                  "Whiten instead of the second power law");
    app->add_option("--truncate", f->truncate,
                    "Keep the leading components; 0 keeps all");
  }
}

PipelineConfig ToPipelineConfig(const PipelineFlags& f) {
  PipelineConfig c;
  c.family = ParseEmbeddingFamily(f.family);
  c.monomial_degree = f.degree;
  c.pca_model = Absolute(f.pca);
  c.codebook_model = Absolute(f.codebook);
  c.gmm_model = Absolute(f.gmm);
  c.rn_model = Absolute(f.rn);
  c.angle = AngleFlags{f.angle_kernel, f.kappa, f.frequencies, f.cos_power}
                .ToConfig();
  if ((f.no_power_law ? 1 : 0) + (f.adapted_power_law != 0.0 ? 1 : 0) +
          (f.power_law != 0.0 ? 1 : 0) >
      1) {
    throw ParseError(
        "--power-law, --adapted-power-law and --no-power-law are mutually "
        "exclusive");
  }
  if (f.no_power_law) {
    c.power_law = PowerLawMode::kNone;
  } else if (f.adapted_power_law != 0.0) {
    c.power_law = PowerLawMode::kAdapted;
    c.power_law_exponent = f.adapted_power_law;
  } else {
    c.power_law = PowerLawMode::kPlain;
    if (f.power_law != 0.0) c.power_law_exponent = f.power_law;
  }
  if (f.rn_exponent != 0.0) c.rn_exponent = f.rn_exponent;
  c.rn_whiten = f.rn_whiten;
  c.truncate = f.truncate;
  return c;
}

struct ScoringFlags {
  int rotations = kDefaultQueryRotations;
  bool upright = false;
  bool polynomial = false;
  int score_samples = kDefaultScoreSamples;
  CLI::Option* rotations_opt = nullptr;
  CLI::Option* polynomial_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
};

void AddScoringFlags(CLI::App* app, ScoringFlags* f) {
  f->rotations_opt =
      app->add_option("--rotations", f->rotations, "Number of query rotations");
  app->add_flag("--upright", f->upright, "Single query rotation");
  f->polynomial_opt = app->add_flag(
      "--polynomial", f->polynomial,
      "Maximise the score polynomial instead of rotating the query");
  f->samples_opt = app->add_option("--score-samples", f->score_samples,
                                   "Samples of the score polynomial");
}

// Flags given on the command line take precedence over `config`.
void ApplyScoringFlags(const ScoringFlags& f, bool explicit_only,
                       PipelineConfig* config) {
  if (!explicit_only || f.rotations_opt->count()) {
    config->rotations = f.rotations;
  }
  if (f.upright) config->rotations = 1;
  if (!explicit_only || f.polynomial_opt->count()) {
    config->polynomial_scoring = f.polynomial;
  }
  if (!explicit_only || f.samples_opt->count()) {
    config->score_samples = f.score_samples;
  }
  if (config->rotations < 1) throw ContractError("--rotations must be >= 1");
}

struct QueryScores {
  Eigen::VectorXd score;
  std::vector<double> theta;
};

void CheckDatabase(const Encoder& encoder, const VectorDatabase& db) {
  if (db.header.base_dim != static_cast<std::uint64_t>(encoder.base_dim()) ||
      db.header.num_frequencies !=
          static_cast<std::uint32_t>(encoder.num_frequencies()) ||
      db.header.family != encoder.embedding().family() ||
      db.header.stored_dim !=
          static_cast<std::uint64_t>(encoder.output_dim())) {
    throw ContractError(
        "vector file layout does not match the pipeline configuration");
  }
}

// Maximum of the score polynomial against every database vector.
QueryScores ScoreStoredQuery(const Eigen::VectorXd& query,
                             const VectorFileHeader& header,
                             const VectorDatabase& db,
                             const PipelineConfig& config) {
  if (config.power_law == PowerLawMode::kPlain || !config.rn_model.empty() ||
      config.truncate > 0) {
    throw ContractError(
        "polynomial scoring needs --adapted-power-law or --no-power-law, no "
        "RN and no truncation");
  }
  const auto base = static_cast<Eigen::Index>(header.base_dim);
  const auto n_freq = static_cast<int>(header.num_frequencies);
  const ModulatedVector q(base, n_freq, query);
  QueryScores result;
  result.score.resize(db.vectors.rows());
  result.theta.resize(db.vectors.rows());
  for (Eigen::Index i = 0; i < db.vectors.rows(); ++i) {
    const ModulatedVector y(base, n_freq, db.vectors.row(i).transpose());
    const ScoreMaximum m =
        MaxScore(ComputeScorePolynomial(q, y), config.score_samples);
    result.score[i] = m.score;
    result.theta[i] = m.theta;
  }
  return result;
}

QueryScores ScoreQuery(const DescriptorSet& query, const Encoder& encoder,
                       const VectorDatabase& db, const PipelineConfig& config) {
  QueryScores result;
  if (!config.polynomial_scoring) {
    RotationScores s =
        QueryMultiRotation(query, encoder, db.vectors, config.rotations);
    result.score = std::move(s.score);
    result.theta = std::move(s.theta);
    return result;
  }
  return ScoreStoredQuery(encoder.Encode(query), db.header, db, config);
}

PipelineConfig ReadPipeline(const std::string& pipeline_path,
                            const std::string& db_path) {
  const fs::path p = pipeline_path.empty()
                         ? WithSuffix(db_path, kPipelineSuffix)
                         : fs::path(pipeline_path);
  return PipelineConfig::FromJson(ReadFileBytes(p));
}

// ---------------------------------------------------------------- commands

struct TrainFlags {
  std::vector<std::string> train;
  std::string out;
  std::string pca;
  int dim = 0;
  int k = 0;
  int iters = 0;
  std::uint64_t seed = 0;
  int threads = 0;
};

void AddTrainFlags(CLI::App* app, TrainFlags* f) {
  app->add_option("--train-descriptors", f->train,
                  "Descriptor files or directories of the training corpus")
      ->required();
  app->add_option("--out", f->out, "Output model file")->required();
  app->add_option("--threads", f->threads, "Reader threads; 0 = all cores");
}

void RunTrainPca(const TrainFlags& f, std::ostream& out) {
  const std::vector<DescriptorSet> sets =
      RootSiftAll(LoadSets(f.train, ResolveThreads(f.threads)));
  const PcaModel model = TrainPca(StackDescriptors(sets), f.dim);
  WriteModelFile(model, f.out);
  WriteTrainIds(f.out, sets);
  out << "pca " << model.input_dim() << " -> " << model.out_dim << "\n";
}

Eigen::MatrixXd CodebookTrainingData(const TrainFlags& f,
                                     const std::vector<DescriptorSet>& sets,
                                     bool reduce) {
  std::optional<PcaModel> pca;
  if (!f.pca.empty()) pca = ReadPcaModel(f.pca);
  return StackDescriptors(PreprocessAll(sets, pca ? &*pca : nullptr, reduce));
}

void RunTrainKmeans(const TrainFlags& f, std::ostream& out) {
  const std::vector<DescriptorSet> sets =
      LoadSets(f.train, ResolveThreads(f.threads));
  const KmeansResult r =
      TrainKmeans(CodebookTrainingData(f, sets, false), f.k, f.iters, f.seed);
  WriteModelFile(r.model, f.out);
  WriteTrainIds(f.out, sets);
  out << "kmeans k=" << r.model.k() << " d=" << r.model.dim()
      << " iterations=" << r.iterations
      << " objective=" << Num(r.objective.back()) << "\n";
}

void RunTrainGmm(const TrainFlags& f, std::ostream& out) {
  const std::vector<DescriptorSet> sets =
      LoadSets(f.train, ResolveThreads(f.threads));
  const GmmResult r =
      TrainGmm(CodebookTrainingData(f, sets, true), f.k, f.iters, f.seed);
  WriteModelFile(r.model, f.out);
  WriteTrainIds(f.out, sets);
  out << "gmm k=" << r.model.k() << " d=" << r.model.dim()
      << " iterations=" << r.iterations
      << " log_likelihood=" << Num(r.log_likelihood.back()) << "\n";
}

void RunTrainRn(const TrainFlags& f, const PipelineFlags& pf, std::ostream& out,
                std::ostream& err) {
  PipelineConfig config = ToPipelineConfig(pf);
  config.rn_model.clear();
  config.truncate = 0;
  const int threads = ResolveThreads(f.threads);
  const std::vector<DescriptorSet> sets = LoadSets(f.train, threads);
  const Encoder encoder = BuildEncoder(config, CommonDim(sets));
  std::vector<Eigen::VectorXd> vectors(sets.size());
  ParallelFor(sets.size(), threads,
              [&](std::size_t i) { vectors[i] = encoder.Encode(sets[i]); });
  RnTrainResult r =
      TrainRn(vectors, config.rn_exponent ? *config.rn_exponent : kRnExponent);
  if (!r.warning.empty()) err << "warning: " << r.warning << "\n";
  WriteModelFile(r.model, f.out);
  WriteTrainIds(f.out, sets);
  out << "rn dim=" << r.model.dim() << " rank=" << r.model.rank() << "\n";
}

struct EncodeFlags {
  std::vector<std::string> inputs;
  std::string out;
  int threads = 0;
};

void RunEncode(const EncodeFlags& f, const PipelineFlags& pf,
               const ScoringFlags& sf, std::ostream& out) {
  PipelineConfig config = ToPipelineConfig(pf);
  ApplyScoringFlags(sf, false, &config);
  const int threads = ResolveThreads(f.threads);
  const std::vector<DescriptorSet> sets = LoadSets(f.inputs, threads);
  std::vector<std::string> ids;
  for (const DescriptorSet& s : sets) ids.push_back(s.image_id);
  CheckDisjoint(config, ids);
  const Encoder encoder = BuildEncoder(config, CommonDim(sets));

  VectorDatabase db;
  db.header.base_dim = encoder.base_dim();
  db.header.num_frequencies = encoder.num_frequencies();
  db.header.family = encoder.embedding().family();
  db.header.stored_dim = encoder.output_dim();
  db.ids = ids;
  db.vectors.resize(static_cast<Eigen::Index>(sets.size()),
                    encoder.output_dim());
  ParallelFor(sets.size(), threads, [&](std::size_t i) {
    db.vectors.row(static_cast<Eigen::Index>(i)) =
        encoder.Encode(sets[i]).transpose();
  });
  WriteVectorFile(db, f.out);
  WriteFileAtomic(WithSuffix(f.out, kPipelineSuffix), config.ToJson());
  out << "encoded " << sets.size() << " images, " << encoder.output_dim()
      << " dimensions\n";
}

struct QueryFlags {
  std::string db;
  std::string pipeline;
  std::string query;
  std::string out;
  int top = 0;
};

void RunQuery(const QueryFlags& f, const ScoringFlags& sf, std::ostream& out) {
  PipelineConfig config = ReadPipeline(f.pipeline, f.db);
  ApplyScoringFlags(sf, true, &config);
  const VectorDatabase db = ReadVectorFile(f.db);
  const DescriptorSet query = ReadDescriptorFile(f.query);
  CheckDisjoint(config, {query.image_id});
  const Encoder encoder = BuildEncoder(config, query.dim());
  CheckDatabase(encoder, db);
  const QueryScores s = ScoreQuery(query, encoder, db, config);

  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < db.ids.size(); ++i) {
    index[db.ids[i]] = static_cast<Eigen::Index>(i);
  }
  const std::vector<std::string> ranked = RankByScore(db.ids, s.score);
  const std::size_t n =
      f.top > 0 ? std::min<std::size_t>(f.top, ranked.size()) : ranked.size();
  std::ostringstream text;
  text << "rank\timage_id\tscore\ttheta_star\n";
  for (std::size_t r = 0; r < n; ++r) {
    const Eigen::Index i = index.at(ranked[r]);
    text << r + 1 << '\t' << ranked[r] << '\t' << Num(s.score[i]) << '\t'
         << Num(s.theta[i]) << '\n';
  }
  WriteOutput(f.out, text.str(), out);
}

struct EvaluateFlags {
  std::string db;
  std::string pipeline;
  std::string groundtruth;
  std::string query_dir;
  std::string out;
  bool keep_query = false;
  int threads = 0;
};

void RunEvaluate(const EvaluateFlags& f, const ScoringFlags& sf,
                 std::ostream& out) {
  PipelineConfig config = ReadPipeline(f.pipeline, f.db);
  ApplyScoringFlags(sf, true, &config);
  const VectorDatabase db = ReadVectorFile(f.db);
  GroundTruth gt;
  {
    std::istringstream in(ReadFileBytes(f.groundtruth));
    gt = ParseGroundTruth(in, !f.keep_query);
  }
  if (gt.queries.empty()) throw ContractError("ground truth has no queries");
  const int threads = ResolveThreads(f.threads);
  std::vector<std::string> query_ids;
  for (const QueryGroundTruth& q : gt.queries) query_ids.push_back(q.query_id);
  CheckDisjoint(config, query_ids);

  std::vector<double> aps(gt.queries.size());
  if (f.query_dir.empty()) {
    // Queries are taken from the database vectors themselves, which only
    // supports scoring that needs no re-encoding.
    if (config.rotations != 1 && !config.polynomial_scoring) {
      throw ContractError(
          "evaluate needs --query-dir for more than one query rotation");
    }
    std::map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < db.ids.size(); ++i) {
      index[db.ids[i]] = static_cast<Eigen::Index>(i);
    }
    const VectorFileHeader& h = db.header;
    ParallelFor(gt.queries.size(), threads, [&](std::size_t i) {
      const auto it = index.find(gt.queries[i].query_id);
      if (it == index.end()) {
        throw ContractError("query '" + gt.queries[i].query_id +
                            "' is not in the vector file");
      }
      const Eigen::VectorXd q = db.vectors.row(it->second).transpose();
      const QueryScores s = config.polynomial_scoring
                                ? ScoreStoredQuery(q, h, db, config)
                                : QueryScores{db.vectors * q, {}};
      aps[i] = AveragePrecision(RankByScore(db.ids, s.score), gt.queries[i]);
    });
  } else {
    std::vector<DescriptorSet> queries(gt.queries.size());
    ParallelFor(gt.queries.size(), threads, [&](std::size_t i) {
      const std::string& id = gt.queries[i].query_id;
      queries[i] = ReadDescriptorFile(
          fs::path(f.query_dir) / (id + std::string(kDescriptorExtension)), id);
    });
    const Encoder encoder = BuildEncoder(config, CommonDim(queries));
    CheckDatabase(encoder, db);
    ParallelFor(gt.queries.size(), threads, [&](std::size_t i) {
      const QueryScores s = ScoreQuery(queries[i], encoder, db, config);
      aps[i] = AveragePrecision(RankByScore(db.ids, s.score), gt.queries[i]);
    });
  }
  std::ostringstream text;
  text << "query_id\tap\n";
  for (std::size_t i = 0; i < aps.size(); ++i) {
    text << gt.queries[i].query_id << '\t' << Num(aps[i]) << '\n';
  }
  text << "mAP\t" << Num(MeanAveragePrecision(aps)) << '\n';
  WriteOutput(f.out, text.str(), out);
}

struct KernelDumpFlags {
  AngleFlags angle;
  int grid = 361;
  std::string out;
};

void RunAngleKernelDump(const KernelDumpFlags& f, std::ostream& out) {
  if (f.grid < 2) throw ContractError("--grid must be >= 2");
  const AngleMapConfig config = f.angle.ToConfig();
  const FourierCoefficients coeffs = ComputeFourierCoefficients(config);
  std::ostringstream text;
  // The exact column holds cos^P(delta / 2) for the cosine-power family.
  text << (config.family == AngleKernelFamily::kVonMises
               ? "delta,k_vm,k_bar\n"
               : "delta,k_cos,k_bar\n");
  for (int i = 0; i < f.grid; ++i) {
    const double delta =
        -std::numbers::pi + 2.0 * std::numbers::pi * i / (f.grid - 1);
    text << Num(delta) << ',' << Num(ExactAngleKernel(delta, config)) << ','
         << Num(TruncatedKernel(delta, coeffs)) << '\n';
  }
  WriteOutput(f.out, text.str(), out);
}

struct SimHistFlags {
  AngleFlags angle;
  std::string pairs_a;
  std::string pairs_b;
  int bins = kDefaultAngleBins;
  int sim_bins = kDefaultSimilarityBins;
  std::string out;
};

void RunSimHist(const SimHistFlags& f, std::ostream& out) {
  const DescriptorSet a = RootSiftAll({ReadDescriptorFile(f.pairs_a)})[0];
  const DescriptorSet b = RootSiftAll({ReadDescriptorFile(f.pairs_b)})[0];
  if (a.size() != b.size()) {
    throw ContractError("pair files hold " + std::to_string(a.size()) +
                        " and " + std::to_string(b.size()) + " records");
  }
  std::vector<MatchedPair> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pairs.emplace_back(a.records[i], b.records[i]);
  }
  const SimilarityHistogram hist = ComputeSimilarityHistogram(
      pairs, ComputeFourierCoefficients(f.angle.ToConfig()), f.bins,
      f.sim_bins);
  std::ostringstream text;
  WriteSimilarityHistogramCsv(hist, text);
  WriteOutput(f.out, text.str(), out);
}

struct SynthFlags {
  SynthConfig config;
  std::string out;
};

void WriteSets(const std::vector<DescriptorSet>& sets, const fs::path& dir) {
  fs::create_directories(dir);
  for (const DescriptorSet& s : sets) {
    WriteDescriptorFile(s,
                        dir / (s.image_id + std::string(kDescriptorExtension)));
  }
}

void RunSynth(const SynthFlags& f, std::ostream& out) {
  const SynthCorpus corpus = GeneratePlantedCorpus(f.config);
  const fs::path root(f.out);
  WriteSets(corpus.images, root / "db");
  WriteSets(
      {corpus.images.begin(), corpus.images.begin() + f.config.num_queries},
      root / "queries");
  WriteSets(corpus.training, root / "train");

  DescriptorSet a;
  DescriptorSet b;
  a.image_id = "a";
  b.image_id = "b";
  for (const auto& [x, y] : corpus.planted_pairs) {
    a.records.push_back(x);
    b.records.push_back(y);
  }
  WriteSets({a, b}, root / "pairs");

  std::ostringstream gt;
  WriteGroundTruth(corpus.ground_truth, gt);
  WriteFileAtomic(root / "groundtruth.txt", gt.str());
  std::ostringstream rot;
  rot << "image_id\trotation\n";
  for (std::size_t i = 0; i < corpus.images.size(); ++i) {
    rot << corpus.images[i].image_id << '\t' << Num(corpus.rotations[i])
        << '\n';
  }
  WriteFileAtomic(root / "rotations.tsv", rot.str());
  out << "wrote " << corpus.images.size() << " database images, "
      << corpus.training.size() << " training images to " << f.out << "\n";
}

int ExitCodeOf(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const ContractError*>(&e)) return kExitContract;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return 1;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Orientation-covariant aggregation of local descriptors",
               "cvag");
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read options from a TOML manifest");
  app.require_subcommand(1);
  std::string manifest;
  auto add_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->configurable();
    sub->add_option("--manifest", manifest,
                    "Write the options of this run to a TOML file")
        ->configurable(false);
    return sub;
  };

  TrainFlags pca_flags;
  CLI::App* train_pca = add_command("train-pca", "Learn a descriptor PCA");
  AddTrainFlags(train_pca, &pca_flags);
  train_pca->add_option("--dim", pca_flags.dim, "Output dimension")->required();

  TrainFlags kmeans_flags{.iters = kDefaultKmeansIterations};
  CLI::App* train_kmeans =
      add_command("train-kmeans", "Learn a k-means codebook for VLAD");
  AddTrainFlags(train_kmeans, &kmeans_flags);
  train_kmeans->add_option("--k", kmeans_flags.k, "Codebook size")->required();
  train_kmeans->add_option("--iters", kmeans_flags.iters, "Lloyd iterations");
  train_kmeans->add_option("--seed", kmeans_flags.seed, "Random seed");
  train_kmeans->add_option("--pca", kmeans_flags.pca,
                           "PCA model (full rotation)");

  TrainFlags gmm_flags{.iters = kDefaultGmmIterations};
  CLI::App* train_gmm =
      add_command("train-gmm", "Learn a diagonal GMM for Fisher vectors");
  AddTrainFlags(train_gmm, &gmm_flags);
  train_gmm->add_option("--k", gmm_flags.k, "Number of components")->required();
  train_gmm->add_option("--iters", gmm_flags.iters, "EM iterations");
  train_gmm->add_option("--seed", gmm_flags.seed, "Random seed");
  train_gmm->add_option("--pca", gmm_flags.pca, "PCA model (reduced)");

  TrainFlags rn_flags;
  PipelineFlags rn_pipeline;
  CLI::App* train_rn =
      add_command("train-rn", "Learn the RN rotation on encoded images");
  AddTrainFlags(train_rn, &rn_flags);
  AddPipelineFlags(train_rn, &rn_pipeline, false);

  EncodeFlags encode_flags;
  PipelineFlags encode_pipeline;
  ScoringFlags encode_scoring;
  CLI::App* encode = add_command("encode", "Encode images into a vector file");
  encode
      ->add_option("--input", encode_flags.inputs,
                   "Descriptor files or directories")
      ->required();
  encode->add_option("--out", encode_flags.out, "Output vector file")
      ->required();
  encode->add_option("--threads", encode_flags.threads,
                     "Worker threads; 0 = all cores");
  AddPipelineFlags(encode, &encode_pipeline, true);
  AddScoringFlags(encode, &encode_scoring);

  QueryFlags query_flags;
  ScoringFlags query_scoring;
  CLI::App* query = add_command("query", "Rank a vector file for one query");
  query->add_option("--db", query_flags.db, "Vector file")->required();
  query->add_option("--pipeline", query_flags.pipeline,
                    "Pipeline JSON; defaults to <db>.pipeline.json");
  query->add_option("--query-desc", query_flags.query, "Query descriptor file")
      ->required();
  query->add_option("--top", query_flags.top, "Rows to print; 0 = all");
  query->add_option("--out", query_flags.out, "Output TSV; default stdout");
  AddScoringFlags(query, &query_scoring);

  EvaluateFlags eval_flags;
  ScoringFlags eval_scoring;
  CLI::App* evaluate =
      add_command("evaluate", "Per-query average precision and mAP");
  evaluate->add_option("--db", eval_flags.db, "Vector file")->required();
  evaluate->add_option("--pipeline", eval_flags.pipeline,
                       "Pipeline JSON; defaults to <db>.pipeline.json");
  evaluate->add_option("--gt", eval_flags.groundtruth, "Ground-truth file")
      ->required();
  evaluate->add_option("--query-dir", eval_flags.query_dir,
                       "Directory holding <query_id>.cvd files; needed for "
                       "more than one query rotation");
  evaluate->add_option("--out", eval_flags.out, "Output TSV; default stdout");
  evaluate->add_flag("--keep-query", eval_flags.keep_query,
                     "Do not treat the query image as junk");
  evaluate->add_option("--threads", eval_flags.threads,
                       "Worker threads; 0 = all cores");
  AddScoringFlags(evaluate, &eval_scoring);

  KernelDumpFlags dump_flags;
  CLI::App* dump = add_command("angle-kernel-dump",
                               "Exact and truncated angle kernel as CSV");
  AddAngleFlags(dump, "--family", &dump_flags.angle.kernel,
                &dump_flags.angle.kappa, &dump_flags.angle.frequencies,
                &dump_flags.angle.cos_power);
  dump->add_option("--grid", dump_flags.grid,
                   "Equally spaced angles over [-pi, pi]");
  dump->add_option("--out", dump_flags.out, "Output CSV; default stdout");

  SimHistFlags hist_flags;
  CLI::App* sim_hist = add_command(
      "sim-hist", "Similarity histograms of matched descriptor pairs");
  AddAngleFlags(sim_hist, "--family", &hist_flags.angle.kernel,
                &hist_flags.angle.kappa, &hist_flags.angle.frequencies,
                &hist_flags.angle.cos_power);
  sim_hist
      ->add_option("--pairs-a", hist_flags.pairs_a,
                   "First descriptor of every pair")
      ->required();
  sim_hist
      ->add_option("--pairs-b", hist_flags.pairs_b,
                   "Second descriptor of every pair, same order")
      ->required();
  sim_hist->add_option("--bins", hist_flags.bins, "Angle-difference bins");
  sim_hist->add_option("--sim-bins", hist_flags.sim_bins, "Similarity bins");
  sim_hist->add_option("--out", hist_flags.out, "Output CSV; default stdout");

  SynthFlags synth_flags;
  synth_flags.config.num_training = 40;
  SynthConfig& sc = synth_flags.config;
  CLI::App* synth =
      add_command("synth", "Generate the synthetic planted-match corpus");
  synth->add_option("--out", synth_flags.out, "Output directory")->required();
  synth->add_option("--seed", sc.seed, "Random seed");
  synth->add_option("--queries", sc.num_queries, "Query images");
  synth->add_option("--matches", sc.matches_per_query, "Matches per query");
  synth->add_option("--distractors", sc.num_distractors, "Distractor images");
  synth->add_option("--training", sc.num_training, "Training images");
  synth->add_option("--descriptors", sc.descriptors_per_image,
                    "Descriptors per image");
  synth->add_option("--dim", sc.dim, "Descriptor dimension");
  synth->add_option("--vocabulary", sc.vocabulary, "Visual words");
  synth->add_option("--word-spread", sc.word_spread,
                    "Spread of descriptors around their word");
  synth->add_option("--noise", sc.descriptor_noise,
                    "Noise of planted descriptor copies");
  synth->add_option("--angle-noise", sc.angle_noise,
                    "Noise of planted angles (radians)");
  synth->add_option("--shared", sc.shared_fraction,
                    "Fraction of query descriptors planted in each match");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (!manifest.empty()) {
      const CLI::App* sub = app.get_subcommands().front();
      WriteFileAtomic(manifest, "[" + sub->get_name() + "]\n" +
                                    sub->config_to_str(true, false));
    }
    if (*train_pca) RunTrainPca(pca_flags, out);
    if (*train_kmeans) RunTrainKmeans(kmeans_flags, out);
    if (*train_gmm) RunTrainGmm(gmm_flags, out);
    if (*train_rn) RunTrainRn(rn_flags, rn_pipeline, out, err);
    if (*encode) RunEncode(encode_flags, encode_pipeline, encode_scoring, out);
    if (*query) RunQuery(query_flags, query_scoring, out);
    if (*evaluate) RunEvaluate(eval_flags, eval_scoring, out);
    if (*dump) RunAngleKernelDump(dump_flags, out);
    if (*sim_hist) RunSimHist(hist_flags, out);
    if (*synth) RunSynth(synth_flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeOf(e);
  }
  return kExitOk;
}

}  // namespace cvag::cli
