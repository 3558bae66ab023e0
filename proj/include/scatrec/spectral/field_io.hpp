#pragma once

#include "scatrec/spectral/field.hpp"

#include <filesystem>

namespace scatrec::spectral {

// Binary field file:
//   "NLSF" | u32 version = 1 | u32 d | u32 n | f64 L | n^d x (f64 re, f64 im)
// little-endian, row-major with x_1 fastest. Physical fields only.
// write_field goes through a temporary file and a rename.
void write_field(const std::filesystem::path& path, const ComplexField& field);
ComplexField read_field(const std::filesystem::path& path);

}  // namespace scatrec::spectral
