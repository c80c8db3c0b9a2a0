//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Little-endian binary streams for the dataset archive and checkpoints.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/error.hpp"

namespace tridti {

// Creates parent directories; overwrites.
void write_binary_file(const std::filesystem::path &path,
                       std::string_view bytes);

class BinaryWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
  }
  void matrix(const Matrix &m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i)
      f64(m.data()[i]);
  }
  void ints(const std::vector<int> &v) {
    u64(v.size());
    for (int x : v)
      i32(x);
  }
  void pairs(const std::vector<std::pair<int, int>> &v) {
    u64(v.size());
    for (auto [a, b] : v) {
      i32(a);
      i32(b);
    }
  }

  const std::string &bytes() const { return buf_; }
  void save(const std::filesystem::path &path) const;

private:
  std::string buf_;
};

class BinaryReader {
public:
  explicit BinaryReader(std::string bytes, std::string what)
      : buf_(std::move(bytes)), what_(std::move(what)) { }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Matrix matrix() {
    const auto r = static_cast<Eigen::Index>(u64());
    const auto c = static_cast<Eigen::Index>(u64());
    need(static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(c) * 8);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m.data()[i] = f64();
    return m;
  }
  std::vector<int> ints() {
    const std::uint64_t n = u64();
    need(n * 4);
    std::vector<int> v(n);
    for (auto &x : v)
      x = i32();
    return v;
  }
  std::vector<std::pair<int, int>> pairs() {
    const std::uint64_t n = u64();
    need(n * 8);
    std::vector<std::pair<int, int>> v(n);
    for (auto &[a, b] : v) {
      a = i32();
      b = i32();
    }
    return v;
  }

  bool at_end() const { return pos_ == buf_.size(); }
  const std::string &what() const { return what_; }

  static BinaryReader open(const std::filesystem::path &path);

private:
  void need(std::uint64_t n) const {
    if (n > buf_.size() - pos_)
      throw ParseError(what_ + ": truncated file");
  }

  std::string buf_;
  std::string what_;
  std::size_t pos_ = 0;
};

} // namespace tridti
