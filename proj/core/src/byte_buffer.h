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

// Little-endian encoding helpers shared by the binary file formats.

#ifndef CVAG_SRC_BYTE_BUFFER_H_
#define CVAG_SRC_BYTE_BUFFER_H_

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "cvag/error.h"

namespace cvag::internal {

class ByteWriter {
 public:
  void Bytes(std::string_view bytes) { buffer_.append(bytes); }

  template <typename U>
  void Unsigned(U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buffer_.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
    }
  }
  void U32(std::uint32_t v) { Unsigned(v); }
  void U64(std::uint64_t v) { Unsigned(v); }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

  std::string& buffer() { return buffer_; }

 private:
  std::string buffer_;
};

// Reads from an in-memory file image. Every failure is reported as a
// ParseError carrying the file name and byte offset.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string source)
      : data_(data), source_(std::move(source)) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return data_.size() - offset_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(source_ + ": " + what + " at byte offset " +
                     std::to_string(offset_));
  }

  void Require(std::size_t n, const char* what) {
    if (remaining() < n) {
      Fail(std::string("truncated ") + what + ": expected " +
           std::to_string(offset_ + n) + " bytes, file has " +
           std::to_string(data_.size()));
    }
  }

  std::string_view Bytes(std::size_t n, const char* what) {
    Require(n, what);
    std::string_view out = data_.substr(offset_, n);
    offset_ += n;
    return out;
  }

  template <typename U>
  U Unsigned(const char* what) {
    Require(sizeof(U), what);
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      value |= static_cast<U>(static_cast<unsigned char>(data_[offset_ + i]))
               << (8 * i);
    }
    offset_ += sizeof(U);
    return value;
  }
  std::uint32_t U32(const char* what) { return Unsigned<std::uint32_t>(what); }
  std::uint64_t U64(const char* what) { return Unsigned<std::uint64_t>(what); }

  float F32(const char* what) {
    const std::size_t at = offset_;
    const float v = std::bit_cast<float>(U32(what));
    if (!std::isfinite(v)) {
      offset_ = at;
      Fail(std::string("non-finite ") + what);
    }
    return v;
  }
  double F64(const char* what) {
    const std::size_t at = offset_;
    const double v = std::bit_cast<double>(U64(what));
    if (!std::isfinite(v)) {
      offset_ = at;
      Fail(std::string("non-finite ") + what);
    }
    return v;
  }

  void ExpectMagic(std::string_view magic) {
    if (remaining() < magic.size() ||
        data_.substr(offset_, magic.size()) != magic) {
      Fail("bad magic, expected '" + std::string(magic) + "'");
    }
    offset_ += magic.size();
  }

  void ExpectEnd() {
    if (remaining() != 0) {
      Fail(std::to_string(remaining()) + " trailing bytes");
    }
  }

 private:
  std::string_view data_;
  std::string source_;
  std::size_t offset_ = 0;
};

}  // namespace cvag::internal

#endif  // CVAG_SRC_BYTE_BUFFER_H_
