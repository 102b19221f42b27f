#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gsac/nn/tensor.hpp"

namespace gsac::nn {

/// Named tensors in insertion order.
using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

// Parameter container, version 1, little-endian:
//   magic "GSACPARM" | u32 version | u32 count |
//   count x { u32 name_len | name bytes | u64 rows | u64 cols | rows*cols f64 row-major }
inline constexpr char kParamMagic[8] = {'G', 'S', 'A', 'C', 'P', 'A', 'R', 'M'};
inline constexpr std::uint32_t kParamVersion = 1;

void write_params(std::ostream& os, const NamedTensors& tensors);
NamedTensors read_params(std::istream& is);

/// Writes to a sibling temporary file and renames it into place.
void save_params(const std::filesystem::path& path, const NamedTensors& tensors);
NamedTensors load_params(const std::filesystem::path& path);

/// Writes `contents` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gsac::nn
