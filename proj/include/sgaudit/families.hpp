#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgaudit/regions.hpp"

namespace sgaudit {

// Identifier of the deterministic random stream backing all generators.
inline constexpr const char* kRngId = "mt19937_64+boxmuller";

enum class FamilyKind {
  RandomContraction,
  SelfadjointContraction,
  MSectorial,
  ResolventQuasisectorial,
  ScalarUnitaryProbe,
  JordanBlock,
  DiagonalFile,
};

std::string to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& token);

struct FamilySpec {
  FamilyKind kind = FamilyKind::RandomContraction;
  int dim = 1;
  std::uint64_t seed = 0;
  // Per-kind parameters; unused ones are ignored by the generator and
  // rejected by the JSON parser.
  double alpha = 0.7853981633974483;  // pi/4; msectorial, resolvent_quasisectorial
  double r_max = 4.0;                 // msectorial, resolvent_quasisectorial
  double t = 1.0;                     // resolvent_quasisectorial
  double theta = 0.0;                 // scalar_unitary_probe
  std::string path;                   // diagonal_file
};

FamilySpec family_spec_from_json(const nlohmann::json& j, std::uint64_t default_seed = 0);
nlohmann::json to_json(const FamilySpec& spec);

struct GeneratedOperator {
  Mat op;
  SectorialCert cert;
  std::string fingerprint;
  FamilySpec spec;
};

// Builds the operator and certifies the advertised class; GenerationError
// when the certificate refutes it.
GeneratedOperator make_operator(const FamilySpec& spec, int n_angles = 256);

// count operators per spec at seeds seed, seed+1, ..., flattened in order.
std::vector<GeneratedOperator> corpus(std::span<const FamilySpec> specs, int count,
                                      int n_angles = 256);

// Complex unit vectors from the same deterministic stream, drawn
// sequentially from one engine seeded as given.
std::vector<Vec> random_unit_vectors(std::uint64_t seed, long dim, int count);

}  // namespace sgaudit
