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

#ifndef SMI_KERNEL_IO_HPP_
#define SMI_KERNEL_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "smi/similarity.hpp"

namespace smi {

// Binary kernel dump:
//   bytes 0..3   "SIMK"
//   bytes 4..7   u32 n_rows (little endian)
//   bytes 8..11  u32 n_cols (little endian)
//   byte  12     u8 symmetric flag
//   bytes 13..15 zero padding
// followed by n_rows * n_cols little-endian IEEE-754 doubles, row-major.
// Ids are not stored; a loaded kernel gets ids 0..n-1.
void write_kernel(std::ostream& out, const SimilarityKernel& k);
SimilarityKernel read_kernel(std::istream& in);

void save_kernel(const std::filesystem::path& path, const SimilarityKernel& k);
SimilarityKernel load_kernel(const std::filesystem::path& path);

}  // namespace smi

#endif  // SMI_KERNEL_IO_HPP_
