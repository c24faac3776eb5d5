#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "sgaudit/linalg.hpp"

namespace sgaudit {

// Matrix JSON object: {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
// Ragged rows, missing fields, unknown fields, non-finite entries and
// dimension mismatches are all rejected.
Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Mat& m);

Mat read_matrix_json(const std::string& path);
void write_matrix_json(const Mat& m, const std::string& path);

// Stable identifier "d<dim>-<16 hex digits>": FNV-1a over the dimension and
// the entries rounded to 1e-12 absolute, row-major, re then im.
std::string fingerprint(const Mat& m);

// FNV-1a 64 over a byte string.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex16(std::uint64_t v);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace sgaudit
