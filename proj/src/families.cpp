#include "sgaudit/families.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sgaudit/matrix_io.hpp"

namespace sgaudit {

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic stream: raw mt19937_64 words mapped to (0,1] by the 53-bit
// shift, normals by Box-Muller.  No std::distribution involved, so the
// sequence is pinned across standard libraries.
struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::mt19937_64 eng;
  bool have_spare = false;
  double spare = 0.0;

  double uniform() {  // (0, 1]
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * kPi * uniform();
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }
};

Mat ginibre(Rng& rng, int d) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  return g;
}

// Haar unitary: QR of a Ginibre draw with the R diagonal phases absorbed.
Mat haar_unitary(Rng& rng, int d) {
  Mat g = ginibre(rng, d);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double m = std::abs(rjj);
    q.col(j) *= (m > 0.0) ? rjj / m : Complex(1.0);
  }
  return q;
}

Mat diag_conjugate(const Mat& u, const Vec& d) {
  return u * d.asDiagonal() * u.adjoint();
}

Mat build_msectorial(Rng& rng, const FamilySpec& spec) {
  Mat u = haar_unitary(rng, spec.dim);
  Vec d(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    const double r = rng.uniform(0.0, spec.r_max);
    const double phi = rng.uniform(-spec.alpha, spec.alpha);
    d(i) = std::polar(r, phi);
  }
  return diag_conjugate(u, d);
}

Mat build_operator(const FamilySpec& spec) {
  Rng rng(spec.seed);
  switch (spec.kind) {
    case FamilyKind::RandomContraction: {
      // Complex Gaussian with singular values clipped to <= 1.
      Mat g = ginibre(rng, spec.dim);
      Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Vec s = svd.singularValues().cwiseMin(1.0).cast<Complex>();
      return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
    }
    case FamilyKind::SelfadjointContraction: {
      Mat u = haar_unitary(rng, spec.dim);
      Vec d(spec.dim);
      for (int i = 0; i < spec.dim; ++i) d(i) = rng.uniform();  // (0, 1]
      return herm_part(diag_conjugate(u, d));
    }
    case FamilyKind::MSectorial:
      return build_msectorial(rng, spec);
    case FamilyKind::ResolventQuasisectorial: {
      Mat a = build_msectorial(rng, spec);
      return resolvent(spec.t * a, 1.0);
    }
    case FamilyKind::ScalarUnitaryProbe: {
      Mat m(1, 1);
      m(0, 0) = std::polar(1.0, spec.theta);
      return m;
    }
    case FamilyKind::JordanBlock: {
      Mat m = Mat::Zero(spec.dim, spec.dim);
      for (int i = 0; i + 1 < spec.dim; ++i) m(i, i + 1) = 1.0;
      return m;
    }
    case FamilyKind::DiagonalFile: {
      Mat m = read_matrix_json(spec.path);
      Mat off = m;
      off.diagonal().setZero();
      if (max_abs(off) > 1e-12 * (1.0 + max_abs(m)))
        throw GenerationError("diagonal_file operator at " + spec.path +
                              " is not diagonal");
      return m;
    }
  }
  throw InputError("unhandled family kind");
}

void validate_spec(const FamilySpec& spec) {
  if (spec.dim < 1 || spec.dim > kMaxDim)
    throw InputError("family dim out of range 1.." + std::to_string(kMaxDim));
  switch (spec.kind) {
    case FamilyKind::ScalarUnitaryProbe:
      if (spec.dim != 1) throw InputError("scalar_unitary_probe wants dim = 1");
      if (!std::isfinite(spec.theta)) throw InputError("probe angle must be finite");
      break;
    case FamilyKind::JordanBlock:
      if (spec.dim < 2) throw InputError("jordan_block wants dim >= 2");
      break;
    case FamilyKind::MSectorial:
    case FamilyKind::ResolventQuasisectorial:
      (void)SemiAngle(spec.alpha);
      if (!(spec.r_max > 0.0) || !std::isfinite(spec.r_max))
        throw InputError("r_max must be finite and > 0");
      if (spec.kind == FamilyKind::ResolventQuasisectorial &&
          (!(spec.t > 0.0) || !std::isfinite(spec.t)))
        throw InputError("resolvent step t must be finite and > 0");
      break;
    case FamilyKind::DiagonalFile:
      if (spec.path.empty()) throw InputError("diagonal_file wants a path");
      break;
    default:
      break;
  }
}

void certify(GeneratedOperator& gen, int n_angles) {
  const FamilySpec& spec = gen.spec;
  const std::string label = to_string(spec.kind);
  auto fail = [&](const std::string& why) {
    throw GenerationError(label + " (seed " + std::to_string(spec.seed) + "): " + why);
  };
  switch (spec.kind) {
    case FamilyKind::MSectorial: {
      gen.cert = classify_generator(gen.op, n_angles);
      if (!gen.cert.semi_angle_min) fail("certificate found no sector");
      if (*gen.cert.semi_angle_min > spec.alpha + 1e-3)
        fail("sector angle exceeds the advertised " + std::to_string(spec.alpha));
      return;
    }
    case FamilyKind::DiagonalFile: {
      const double nn = opnorm(gen.op);
      gen.cert = nn <= 1.0 + 1e-10 ? classify_contraction(gen.op, n_angles)
                                   : classify_generator(gen.op, n_angles);
      return;
    }
    default:
      break;
  }
  gen.cert = classify_contraction(gen.op, n_angles);
  if (!gen.cert.is_contraction) fail("not a contraction");
  switch (spec.kind) {
    case FamilyKind::SelfadjointContraction:
      if (!gen.cert.semi_angle_min || *gen.cert.semi_angle_min > 1e-6)
        fail("numerical range is not a real segment in [0, 1]");
      break;
    case FamilyKind::ResolventQuasisectorial:
      if (!gen.cert.semi_angle_min) fail("certificate found no drop region");
      if (*gen.cert.semi_angle_min > spec.alpha + 1e-3)
        fail("drop-region angle exceeds the advertised " + std::to_string(spec.alpha));
      break;
    default:
      break;
  }
}

}  // namespace

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::RandomContraction: return "random_contraction";
    case FamilyKind::SelfadjointContraction: return "selfadjoint_contraction";
    case FamilyKind::MSectorial: return "msectorial";
    case FamilyKind::ResolventQuasisectorial: return "resolvent_quasisectorial";
    case FamilyKind::ScalarUnitaryProbe: return "scalar_unitary_probe";
    case FamilyKind::JordanBlock: return "jordan_block";
    case FamilyKind::DiagonalFile: return "diagonal_file";
  }
  return "random_contraction";
}

FamilyKind family_kind_from_string(const std::string& token) {
  if (token == "random_contraction") return FamilyKind::RandomContraction;
  if (token == "selfadjoint_contraction") return FamilyKind::SelfadjointContraction;
  if (token == "msectorial") return FamilyKind::MSectorial;
  if (token == "resolvent_quasisectorial") return FamilyKind::ResolventQuasisectorial;
  if (token == "scalar_unitary_probe") return FamilyKind::ScalarUnitaryProbe;
  if (token == "jordan_block") return FamilyKind::JordanBlock;
  if (token == "diagonal_file") return FamilyKind::DiagonalFile;
  throw ConfigError("unknown family kind \"" + token + "\"");
}

FamilySpec family_spec_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
  if (!j.is_object()) throw ConfigError("family spec must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "kind" && k != "dim" && k != "seed" && k != "params")
      throw ConfigError("family spec: unknown field \"" + k + "\"");
  }
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("family spec wants a string \"kind\"");
  FamilySpec spec;
  spec.kind = family_kind_from_string(j["kind"].get<std::string>());
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ConfigError("family spec wants an integer \"dim\"");
  spec.dim = j["dim"].get<int>();
  spec.seed = default_seed;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ConfigError("family spec \"seed\" must be a non-negative integer");
    const auto s = j["seed"].get<std::int64_t>();
    if (s < 0) throw ConfigError("family spec \"seed\" must be a non-negative integer");
    spec.seed = static_cast<std::uint64_t>(s);
  }
  nlohmann::json params = j.value("params", nlohmann::json::object());
  if (!params.is_object()) throw ConfigError("family spec \"params\" must be an object");
  auto take = [&params](const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number())
      throw ConfigError(std::string("family param \"") + key + "\" must be a number");
    const double v = params[key].get<double>();
    params.erase(key);
    return v;
  };
  switch (spec.kind) {
    case FamilyKind::MSectorial:
      spec.alpha = take("alpha", spec.alpha);
      spec.r_max = take("r_max", spec.r_max);
      break;
    case FamilyKind::ResolventQuasisectorial:
      spec.alpha = take("alpha", spec.alpha);
      spec.r_max = take("r_max", spec.r_max);
      spec.t = take("t", spec.t);
      break;
    case FamilyKind::ScalarUnitaryProbe:
      spec.theta = take("theta", spec.theta);
      break;
    case FamilyKind::DiagonalFile:
      if (!params.contains("path") || !params["path"].is_string())
        throw ConfigError("diagonal_file wants a string param \"path\"");
      spec.path = params["path"].get<std::string>();
      params.erase("path");
      break;
    default:
      break;
  }
  if (!params.empty())
    throw ConfigError("family spec params: unknown field \"" + params.begin().key() +
                      "\" for kind " + to_string(spec.kind));
  validate_spec(spec);
  return spec;
}

nlohmann::json to_json(const FamilySpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.kind) {
    case FamilyKind::MSectorial:
      params["alpha"] = spec.alpha;
      params["r_max"] = spec.r_max;
      break;
    case FamilyKind::ResolventQuasisectorial:
      params["alpha"] = spec.alpha;
      params["r_max"] = spec.r_max;
      params["t"] = spec.t;
      break;
    case FamilyKind::ScalarUnitaryProbe:
      params["theta"] = spec.theta;
      break;
    case FamilyKind::DiagonalFile:
      params["path"] = spec.path;
      break;
    default:
      break;
  }
  return nlohmann::json{{"kind", to_string(spec.kind)},
                        {"dim", spec.dim},
                        {"seed", spec.seed},
                        {"params", std::move(params)}};
}

GeneratedOperator make_operator(const FamilySpec& spec, int n_angles) {
  validate_spec(spec);
  GeneratedOperator gen;
  gen.spec = spec;
  gen.op = build_operator(spec);
  require_valid(gen.op, "generated operator");
  certify(gen, n_angles);
  gen.fingerprint = fingerprint(gen.op);
  return gen;
}

std::vector<GeneratedOperator> corpus(std::span<const FamilySpec> specs, int count,
                                      int n_angles) {
  if (count < 1) throw InputError("corpus wants count >= 1");
  std::vector<GeneratedOperator> out;
  out.reserve(specs.size() * static_cast<std::size_t>(count));
  for (const FamilySpec& base : specs)
    for (int i = 0; i < count; ++i) {
      FamilySpec spec = base;
      spec.seed = base.seed + static_cast<std::uint64_t>(i);
      out.push_back(make_operator(spec, n_angles));
    }
  return out;
}

std::vector<Vec> random_unit_vectors(std::uint64_t seed, long dim, int count) {
  if (dim < 1 || dim > kMaxDim) throw InputError("vector dimension out of range");
  if (count < 0) throw InputError("vector count must be >= 0");
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (long k = 0; k < dim; ++k) v(k) = rng.cnormal();
    const double nn = v.norm();
    if (nn > 0.0) v /= nn;
    else v(0) = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace sgaudit
