// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smi/kernel_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace smi {
namespace {

constexpr std::array<char, 4> kMagic = {'S', 'I', 'M', 'K'};
constexpr std::size_t kHeaderSize = 16;

void put_u32(unsigned char* dst, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) dst[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint32_t get_u32(const unsigned char* src) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(src[i]) << (8 * i);
  return v;
}

void put_f64(unsigned char* dst, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) dst[i] = static_cast<unsigned char>(bits >> (8 * i));
}

double get_f64(const unsigned char* src) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(src[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_kernel(std::ostream& out, const SimilarityKernel& k) {
  if (k.rows() > std::numeric_limits<std::uint32_t>::max() ||
      k.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("write_kernel: kernel too large for u32 header");
  }
  std::array<unsigned char, kHeaderSize> header{};
  std::memcpy(header.data(), kMagic.data(), kMagic.size());
  put_u32(header.data() + 4, static_cast<std::uint32_t>(k.rows()));
  put_u32(header.data() + 8, static_cast<std::uint32_t>(k.cols()));
  header[12] = k.symmetric() ? 1 : 0;
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  std::array<unsigned char, 8> buf{};
  for (double x : k.data()) {
    put_f64(buf.data(), x);
    out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
  }
  if (!out) throw std::runtime_error("write_kernel: stream write failed");
}

SimilarityKernel read_kernel(std::istream& in) {
  std::array<unsigned char, kHeaderSize> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(kHeaderSize) ||
      std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw std::invalid_argument("read_kernel: missing SIMK header");
  }
  const std::size_t rows = get_u32(header.data() + 4);
  const std::size_t cols = get_u32(header.data() + 8);
  const bool symmetric = header[12] != 0;
  std::vector<double> data(rows * cols);
  std::array<unsigned char, 8> buf{};
  for (double& x : data) {
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in.gcount() != 8) throw std::invalid_argument("read_kernel: truncated payload");
    x = get_f64(buf.data());
  }
  std::vector<PointId> row_ids(rows);
  std::vector<PointId> col_ids(cols);
  std::iota(row_ids.begin(), row_ids.end(), PointId{0});
  std::iota(col_ids.begin(), col_ids.end(), PointId{0});
  // Regularization is recovered from a constant diagonal above 1.
  double reg = 0.0;
  if (symmetric && rows > 0) {
    const double d = data[0];
    bool constant = true;
    for (std::size_t i = 1; i < rows; ++i) constant = constant && data[i * cols + i] == d;
    if (constant && d > 1.0) reg = d - 1.0;
  }
  return SimilarityKernel(rows, cols, std::move(data), symmetric,
                          std::move(row_ids), std::move(col_ids), reg);
}

void save_kernel(const std::filesystem::path& path, const SimilarityKernel& k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_kernel: cannot open " + path.string());
  write_kernel(out, k);
}

SimilarityKernel load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_kernel: cannot open " + path.string());
  return read_kernel(in);
}

}  // namespace smi
