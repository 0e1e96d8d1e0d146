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

#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <system_error>

#include "byte_buffer.h"
#include "cvag/error.h"

namespace cvag {

using internal::ByteReader;
using internal::ByteWriter;

namespace {

constexpr std::size_t kDescriptorHeaderBytes = 8 + 4 + 8 + 4;

void WriteMatrix(ByteWriter& w, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.F64(m(r, c));
  }
}

void WriteVector(ByteWriter& w, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) w.F64(v[i]);
}

Eigen::MatrixXd ReadMatrix(ByteReader& r, std::uint64_t rows,
                           std::uint64_t cols, const char* what) {
  r.Require(rows * cols * 8, what);
  Eigen::MatrixXd m(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) m(i, j) = r.F64(what);
  }
  return m;
}

Eigen::VectorXd ReadVector(ByteReader& r, std::uint64_t n, const char* what) {
  r.Require(n * 8, what);
  Eigen::VectorXd v(n);
  for (std::uint64_t i = 0; i < n; ++i) v[i] = r.F64(what);
  return v;
}

// Guards against absurd headers before allocating.
void CheckDim(ByteReader& r, std::uint64_t value, const char* what) {
  if (value == 0 || value > (1ull << 31)) {
    r.Fail(std::string("invalid ") + what + " " + std::to_string(value));
  }
}

ByteWriter ModelHeader(ModelKind kind) {
  ByteWriter w;
  w.Bytes(kModelMagic);
  w.U32(static_cast<std::uint32_t>(kind));
  return w;
}

ByteReader OpenModel(std::string_view bytes, const std::string& source,
                     ModelKind expected) {
  ByteReader r(bytes, source);
  r.ExpectMagic(kModelMagic);
  const std::uint32_t kind = r.U32("model kind");
  if (kind != static_cast<std::uint32_t>(expected)) {
    r.Fail("model kind " + std::to_string(kind) + ", expected " +
           std::string(ToString(expected)));
  }
  return r;
}

}  // namespace

std::string_view ToString(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPca:
      return "pca";
    case ModelKind::kKmeans:
      return "kmeans";
    case ModelKind::kGmm:
      return "gmm";
    case ModelKind::kRn:
      return "rn";
  }
  return "unknown";
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view bytes) {
  std::random_device rd;
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

std::string EncodeDescriptorSet(const DescriptorSet& set) {
  const int dim = set.dim();
  ByteWriter w;
  w.Bytes(kDescriptorMagic);
  w.U32(static_cast<std::uint32_t>(dim));
  w.U64(set.records.size());
  w.U32(set.raw_sift ? kDescriptorFlagRawSift : 0u);
  for (const DescriptorRecord& r : set.records) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      w.F32(static_cast<float>(r.descriptor[j]));
    }
    w.F32(static_cast<float>(r.angle));
  }
  return std::move(w.buffer());
}

DescriptorSet DecodeDescriptorSet(std::string_view bytes,
                                  const std::string& source,
                                  std::string image_id) {
  ByteReader r(bytes, source);
  r.ExpectMagic(kDescriptorMagic);
  const std::uint32_t dim = r.U32("descriptor dimension");
  const std::uint64_t count = r.U64("record count");
  const std::uint32_t flags = r.U32("flags");
  if (count > 0) CheckDim(r, dim, "descriptor dimension");
  if (flags & ~kDescriptorFlagRawSift) {
    r.Fail("unknown flags " + std::to_string(flags));
  }
  const std::uint64_t expected =
      kDescriptorHeaderBytes +
      count * (static_cast<std::uint64_t>(dim) + 1) * 4;
  if (bytes.size() != expected) {
    throw ParseError(source + ": payload for " + std::to_string(count) +
                     " records of dimension " + std::to_string(dim) +
                     " needs " + std::to_string(expected) +
                     " bytes, file has " + std::to_string(bytes.size()) +
                     " (at byte offset " + std::to_string(r.offset()) + ")");
  }

  DescriptorSet set;
  set.image_id = std::move(image_id);
  set.raw_sift = (flags & kDescriptorFlagRawSift) != 0;
  set.records.resize(count);
  for (DescriptorRecord& rec : set.records) {
    rec.descriptor.resize(dim);
    for (std::uint32_t j = 0; j < dim; ++j) rec.descriptor[j] = r.F32("value");
    rec.angle = r.F32("angle");
  }
  return set;
}

void WriteDescriptorFile(const DescriptorSet& set,
                         const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeDescriptorSet(set));
}

DescriptorSet ReadDescriptorFile(const std::filesystem::path& path,
                                 std::optional<std::string> image_id) {
  return DecodeDescriptorSet(ReadFileBytes(path), path.string(),
                             image_id ? *image_id : path.stem().string());
}

ModelKind PeekModelKind(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r(bytes, path.string());
  r.ExpectMagic(kModelMagic);
  const std::uint32_t kind = r.U32("model kind");
  if (kind < 1 || kind > 4)
    r.Fail("unknown model kind " + std::to_string(kind));
  return static_cast<ModelKind>(kind);
}

void WriteModelFile(const PcaModel& model, const std::filesystem::path& path) {
  model.Validate();
  ByteWriter w = ModelHeader(ModelKind::kPca);
  w.U64(model.input_dim());
  w.U64(model.out_dim);
  WriteVector(w, model.mean);
  WriteVector(w, model.eigenvalues);
  WriteMatrix(w, model.basis);
  WriteFileAtomic(path, w.buffer());
}

void WriteModelFile(const CodebookModel& model,
                    const std::filesystem::path& path) {
  ByteWriter w = ModelHeader(ModelKind::kKmeans);
  w.U64(model.k());
  w.U64(model.dim());
  WriteMatrix(w, model.centroids);
  WriteFileAtomic(path, w.buffer());
}

void WriteModelFile(const GmmModel& model, const std::filesystem::path& path) {
  ByteWriter w = ModelHeader(ModelKind::kGmm);
  w.U64(model.k());
  w.U64(model.dim());
  WriteVector(w, model.weights);
  WriteMatrix(w, model.means);
  WriteMatrix(w, model.variances);
  WriteFileAtomic(path, w.buffer());
}

void WriteModelFile(const RnModel& model, const std::filesystem::path& path) {
  ByteWriter w = ModelHeader(ModelKind::kRn);
  w.U64(model.dim());
  w.U64(model.rank());
  w.F64(model.exponent());
  w.U32(model.mode() == RnMode::kWhiten ? 1u : 0u);
  WriteVector(w, model.eigenvalues());
  WriteMatrix(w, model.basis());
  WriteFileAtomic(path, w.buffer());
}

PcaModel ReadPcaModel(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r = OpenModel(bytes, path.string(), ModelKind::kPca);
  const std::uint64_t d = r.U64("input dimension");
  CheckDim(r, d, "input dimension");
  const std::uint64_t out = r.U64("output dimension");
  if (out == 0 || out > d) r.Fail("invalid output dimension");
  PcaModel model;
  model.out_dim = static_cast<int>(out);
  model.mean = ReadVector(r, d, "mean");
  model.eigenvalues = ReadVector(r, d, "eigenvalues");
  model.basis = ReadMatrix(r, d, d, "basis");
  r.ExpectEnd();
  return model;
}

CodebookModel ReadCodebookModel(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r = OpenModel(bytes, path.string(), ModelKind::kKmeans);
  const std::uint64_t k = r.U64("k");
  CheckDim(r, k, "k");
  const std::uint64_t d = r.U64("dimension");
  CheckDim(r, d, "dimension");
  CodebookModel model;
  model.centroids = ReadMatrix(r, k, d, "centroids");
  r.ExpectEnd();
  return model;
}

GmmModel ReadGmmModel(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r = OpenModel(bytes, path.string(), ModelKind::kGmm);
  const std::uint64_t k = r.U64("k");
  CheckDim(r, k, "k");
  const std::uint64_t d = r.U64("dimension");
  CheckDim(r, d, "dimension");
  GmmModel model;
  model.weights = ReadVector(r, k, "weights");
  model.means = ReadMatrix(r, k, d, "means");
  model.variances = ReadMatrix(r, k, d, "variances");
  r.ExpectEnd();
  try {
    model.Validate();
  } catch (const ContractError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return model;
}

RnModel ReadRnModel(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r = OpenModel(bytes, path.string(), ModelKind::kRn);
  const std::uint64_t dim = r.U64("dimension");
  CheckDim(r, dim, "dimension");
  const std::uint64_t rank = r.U64("rank");
  CheckDim(r, rank, "rank");
  if (rank > dim) r.Fail("rank exceeds dimension");
  const double exponent = r.F64("exponent");
  const std::uint32_t mode = r.U32("mode");
  if (mode > 1) r.Fail("unknown RN mode " + std::to_string(mode));
  Eigen::VectorXd eigenvalues = ReadVector(r, rank, "eigenvalues");
  Eigen::MatrixXd basis = ReadMatrix(r, rank, dim, "basis");
  r.ExpectEnd();
  try {
    return RnModel(std::move(basis), std::move(eigenvalues), exponent,
                   mode == 1 ? RnMode::kWhiten : RnMode::kPowerLaw);
  } catch (const ContractError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string EncodeVectorDatabase(const VectorDatabase& db) {
  if (static_cast<Eigen::Index>(db.ids.size()) != db.vectors.rows() ||
      static_cast<std::uint64_t>(db.vectors.cols()) != db.header.stored_dim) {
    throw ContractError("vector database has inconsistent shape");
  }
  ByteWriter w;
  w.Bytes(kVectorMagic);
  w.U64(db.ids.size());
  w.U64(db.header.base_dim);
  w.U32(db.header.num_frequencies);
  w.U32(static_cast<std::uint32_t>(db.header.family));
  w.U64(db.header.stored_dim);
  for (std::size_t i = 0; i < db.ids.size(); ++i) {
    w.U32(static_cast<std::uint32_t>(db.ids[i].size()));
    w.Bytes(db.ids[i]);
    for (Eigen::Index j = 0; j < db.vectors.cols(); ++j) {
      w.F32(static_cast<float>(db.vectors(static_cast<Eigen::Index>(i), j)));
    }
  }
  return std::move(w.buffer());
}

VectorDatabase DecodeVectorDatabase(std::string_view bytes,
                                    const std::string& source) {
  ByteReader r(bytes, source);
  r.ExpectMagic(kVectorMagic);
  VectorDatabase db;
  const std::uint64_t count = r.U64("count");
  db.header.base_dim = r.U64("base dimension");
  db.header.num_frequencies = r.U32("number of frequencies");
  const std::uint32_t family = r.U32("family");
  if (family > 2) r.Fail("unknown family tag " + std::to_string(family));
  db.header.family = static_cast<EmbeddingFamily>(family);
  db.header.stored_dim = r.U64("stored dimension");
  CheckDim(r, db.header.stored_dim, "stored dimension");
  if (count > r.remaining() / (4 + 4 * db.header.stored_dim)) {
    r.Fail("truncated payload: header declares " + std::to_string(count) +
           " records");
  }

  db.ids.reserve(count);
  db.vectors.resize(count, db.header.stored_dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.U32("id length");
    db.ids.emplace_back(r.Bytes(len, "image id"));
    r.Require(4 * db.header.stored_dim, "vector payload");
    for (std::uint64_t j = 0; j < db.header.stored_dim; ++j) {
      db.vectors(i, j) = r.F32("vector value");
    }
  }
  r.ExpectEnd();
  return db;
}

void WriteVectorFile(const VectorDatabase& db,
                     const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeVectorDatabase(db));
}

VectorDatabase ReadVectorFile(const std::filesystem::path& path) {
  return DecodeVectorDatabase(ReadFileBytes(path), path.string());
}

}  // namespace cvag
