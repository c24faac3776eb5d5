#include "sgaudit/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sgaudit {

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const char* ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw InputError(std::string(ctx) + ": unknown field \"" + it.key() + "\"");
  }
}

Eigen::MatrixXd plane_from_json(const nlohmann::json& rows, long dim, const char* name) {
  if (!rows.is_array() || static_cast<long>(rows.size()) != dim)
    throw InputError(std::string("matrix field \"") + name + "\" must be an array of " +
                     std::to_string(dim) + " rows");
  Eigen::MatrixXd out(dim, dim);
  for (long i = 0; i < dim; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<long>(row.size()) != dim)
      throw InputError(std::string("matrix field \"") + name + "\" has a ragged row at index " +
                       std::to_string(i));
    for (long k = 0; k < dim; ++k) {
      if (!row[k].is_number())
        throw InputError(std::string("matrix field \"") + name + "\" has a non-numeric entry");
      out(i, k) = row[k].get<double>();
    }
  }
  return out;
}

}  // namespace

Mat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("matrix JSON must be an object");
  require_keys(j, {"dim", "re", "im"}, "matrix JSON");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError("matrix JSON wants an integer \"dim\"");
  const long dim = j["dim"].get<long>();
  if (dim < 1 || dim > kMaxDim)
    throw InputError("matrix JSON dimension out of range 1.." + std::to_string(kMaxDim));
  if (!j.contains("re") || !j.contains("im"))
    throw InputError("matrix JSON wants \"re\" and \"im\" plane arrays");
  Eigen::MatrixXd re = plane_from_json(j["re"], dim, "re");
  Eigen::MatrixXd im = plane_from_json(j["im"], dim, "im");
  Mat m = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  require_valid(m, "matrix from JSON");
  return m;
}

nlohmann::json matrix_to_json(const Mat& m) {
  require_valid(m);
  const long d = m.rows();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (long i = 0; i < d; ++i) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json irow = nlohmann::json::array();
    for (long k = 0; k < d; ++k) {
      rrow.push_back(m(i, k).real());
      irow.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return nlohmann::json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Mat read_matrix_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("failed to parse matrix JSON at " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_json(const Mat& m, const std::string& path) {
  write_file_atomic(path, matrix_to_json(m).dump(2) + "\n");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::int64_t quantize(double x) {
  const double scaled = x * 1e12;
  if (!(std::abs(scaled) < 9.0e18)) return scaled > 0 ? INT64_MAX : INT64_MIN;
  return std::llround(scaled);
}

}  // namespace

std::string fingerprint(const Mat& m) {
  require_valid(m);
  std::string bytes;
  bytes.reserve(16 + 16 * static_cast<std::size_t>(m.size()));
  auto put = [&bytes](std::int64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  put(m.rows());
  for (long i = 0; i < m.rows(); ++i)
    for (long k = 0; k < m.cols(); ++k) {
      put(quantize(m(i, k).real()));
      put(quantize(m(i, k).imag()));
    }
  return "d" + std::to_string(m.rows()) + "-" + hex16(fnv1a64(bytes));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename to " + path + " failed: " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("read from " + path + " failed");
  return ss.str();
}

}  // namespace sgaudit
