#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "sgaudit/families.hpp"
#include "sgaudit/matrix_io.hpp"

using namespace sgaudit;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

FamilySpec spec_of(FamilyKind kind, int dim, std::uint64_t seed) {
  FamilySpec s;
  s.kind = kind;
  s.dim = dim;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("family kind tokens round trip") {
  for (FamilyKind k :
       {FamilyKind::RandomContraction, FamilyKind::SelfadjointContraction,
        FamilyKind::MSectorial, FamilyKind::ResolventQuasisectorial,
        FamilyKind::ScalarUnitaryProbe, FamilyKind::JordanBlock,
        FamilyKind::DiagonalFile})
    CHECK(family_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(family_kind_from_string("fancy"), ConfigError);
}

TEST_CASE("generation is deterministic in the seed") {
  auto a1 = make_operator(spec_of(FamilyKind::RandomContraction, 5, 42));
  auto a2 = make_operator(spec_of(FamilyKind::RandomContraction, 5, 42));
  auto b = make_operator(spec_of(FamilyKind::RandomContraction, 5, 43));
  CHECK(a1.fingerprint == a2.fingerprint);
  CHECK(max_abs(a1.op - a2.op) == 0.0);
  CHECK(a1.fingerprint != b.fingerprint);
  CHECK(a1.fingerprint.substr(0, 3) == "d5-");
}

TEST_CASE("random contraction is certified contractive") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
    auto g = make_operator(spec_of(FamilyKind::RandomContraction, 6, seed));
    CHECK(g.cert.is_contraction);
    CHECK(opnorm(g.op) <= 1.0 + 1e-10);
    // clipping leaves the top singular value at exactly 1 for any dim this
    // small; the slack is nonnegative either way
    CHECK(g.cert.contraction_slack >= -1e-10);
  }
}

TEST_CASE("selfadjoint contraction has a real [0,1] numerical range") {
  auto g = make_operator(spec_of(FamilyKind::SelfadjointContraction, 8, 7));
  CHECK(max_abs(g.op - g.op.adjoint()) < 1e-14);
  REQUIRE(g.cert.semi_angle_min.has_value());
  CHECK(*g.cert.semi_angle_min <= 1e-6);
  CHECK(g.cert.region_checked == Region::Drop);
}

TEST_CASE("msectorial generator sits in its sector") {
  auto spec = spec_of(FamilyKind::MSectorial, 6, 11);
  spec.alpha = kPi / 4;
  spec.r_max = 4.0;
  auto g = make_operator(spec);
  CHECK(g.cert.region_checked == Region::Sector);
  REQUIRE(g.cert.semi_angle_min.has_value());
  CHECK(*g.cert.semi_angle_min <= kPi / 4 + 1e-3);
  // eigenvalues are the planted ones, so the spectral radius respects r_max
  CHECK(opnorm(g.op) <= 4.0 * 1.5);
}

TEST_CASE("resolvent-built operator is a quasi-sectorial contraction") {
  auto spec = spec_of(FamilyKind::ResolventQuasisectorial, 5, 23);
  spec.alpha = kPi / 4;
  spec.r_max = 4.0;
  spec.t = 1.0;
  auto g = make_operator(spec);
  CHECK(g.cert.is_contraction);
  CHECK(g.cert.region_checked == Region::Drop);
  REQUIRE(g.cert.semi_angle_min.has_value());
  CHECK(*g.cert.semi_angle_min <= kPi / 4 + 1e-3);
}

TEST_CASE("scalar probe and jordan block") {
  auto spec = spec_of(FamilyKind::ScalarUnitaryProbe, 1, 0);
  spec.theta = 1e-3;
  auto g = make_operator(spec);
  REQUIRE(g.op.rows() == 1);
  CHECK(std::abs(g.op(0, 0) - std::polar(1.0, 1e-3)) < 1e-16);

  auto j = make_operator(spec_of(FamilyKind::JordanBlock, 3, 0));
  CHECK(std::abs(j.op(0, 1) - 1.0) < 1e-16);
  CHECK(std::abs(j.op(1, 2) - 1.0) < 1e-16);
  CHECK(std::abs(j.op(0, 2)) == 0.0);
  CHECK(j.cert.is_contraction);

  auto bad = spec_of(FamilyKind::ScalarUnitaryProbe, 2, 0);
  CHECK_THROWS_AS(make_operator(bad), InputError);
  CHECK_THROWS_AS(make_operator(spec_of(FamilyKind::JordanBlock, 1, 0)), InputError);
}

TEST_CASE("diagonal file round trip and rejection") {
  auto dir = std::filesystem::temp_directory_path() / "sgaudit_fam_test";
  std::filesystem::create_directories(dir);

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = Complex(0.5, 0.1);
  d(1, 1) = 0.25;
  auto path = (dir / "diag.json").string();
  write_matrix_json(d, path);
  auto spec = spec_of(FamilyKind::DiagonalFile, 2, 0);
  spec.path = path;
  auto g = make_operator(spec);
  CHECK(max_abs(g.op - d) == 0.0);

  Mat full = d;
  full(0, 1) = 0.3;
  auto bad_path = (dir / "full.json").string();
  write_matrix_json(full, bad_path);
  spec.path = bad_path;
  CHECK_THROWS_AS(make_operator(spec), GenerationError);
}

TEST_CASE("family spec json round trip and strictness") {
  json j = {{"kind", "msectorial"},
            {"dim", 4},
            {"seed", 9},
            {"params", {{"alpha", 0.5}, {"r_max", 2.0}}}};
  FamilySpec s = family_spec_from_json(j);
  CHECK(s.kind == FamilyKind::MSectorial);
  CHECK(s.dim == 4);
  CHECK(s.seed == 9);
  CHECK(s.alpha == 0.5);
  CHECK(s.r_max == 2.0);
  FamilySpec back = family_spec_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));

  // default seed applies when absent
  json no_seed = {{"kind", "random_contraction"}, {"dim", 3}};
  CHECK(family_spec_from_json(no_seed, 77).seed == 77);

  json unknown_field = j;
  unknown_field["extra"] = 1;
  CHECK_THROWS_AS(family_spec_from_json(unknown_field), ConfigError);

  json unknown_param = j;
  unknown_param["params"]["beta"] = 0.1;
  CHECK_THROWS_AS(family_spec_from_json(unknown_param), ConfigError);

  // theta belongs to the probe kind, not to msectorial
  json misplaced = {{"kind", "msectorial"}, {"dim", 4}, {"params", {{"theta", 0.1}}}};
  CHECK_THROWS_AS(family_spec_from_json(misplaced), ConfigError);

  json no_kind = {{"dim", 4}};
  CHECK_THROWS_AS(family_spec_from_json(no_kind), ConfigError);
  json bad_seed = {{"kind", "random_contraction"}, {"dim", 3}, {"seed", -1}};
  CHECK_THROWS_AS(family_spec_from_json(bad_seed), ConfigError);
}

TEST_CASE("corpus seeds sequentially") {
  std::vector<FamilySpec> bases = {spec_of(FamilyKind::RandomContraction, 3, 100),
                                   spec_of(FamilyKind::SelfadjointContraction, 4, 200)};
  auto ops = corpus(bases, 3);
  REQUIRE(ops.size() == 6);
  CHECK(ops[0].spec.seed == 100);
  CHECK(ops[1].spec.seed == 101);
  CHECK(ops[2].spec.seed == 102);
  CHECK(ops[3].spec.seed == 200);
  CHECK(ops[5].spec.seed == 202);
  // matches individually generated operators
  auto solo = make_operator(spec_of(FamilyKind::RandomContraction, 3, 101));
  CHECK(ops[1].fingerprint == solo.fingerprint);
  CHECK_THROWS_AS(corpus(bases, 0), InputError);
}

TEST_CASE("random unit vectors are deterministic and normalized") {
  auto v1 = random_unit_vectors(5, 4, 3);
  auto v2 = random_unit_vectors(5, 4, 3);
  REQUIRE(v1.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(v1[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((v1[i] - v2[i]).norm() == 0.0);
  }
  // draws are sequential, so different counts share a prefix
  auto v_long = random_unit_vectors(5, 4, 5);
  CHECK((v_long[2] - v1[2]).norm() == 0.0);
  auto other = random_unit_vectors(6, 4, 1);
  CHECK((other[0] - v1[0]).norm() > 1e-6);
  CHECK_THROWS_AS(random_unit_vectors(5, 0, 1), InputError);
}
