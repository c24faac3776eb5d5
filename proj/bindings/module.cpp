#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgaudit/approximants.hpp"
#include "sgaudit/cli.hpp"
#include "sgaudit/defects.hpp"
#include "sgaudit/errors.hpp"
#include "sgaudit/families.hpp"
#include "sgaudit/matrix_io.hpp"
#include "sgaudit/poisson.hpp"
#include "sgaudit/rates.hpp"
#include "sgaudit/regions.hpp"

namespace py = pybind11;
using namespace sgaudit;

namespace {

FamilySpec build_spec(const std::string& kind, int dim, std::uint64_t seed, double alpha,
                      double r_max, double t, double theta, const std::string& path) {
  FamilySpec spec;
  spec.kind = family_kind_from_string(kind);
  spec.dim = dim;
  spec.seed = seed;
  spec.alpha = alpha;
  spec.r_max = r_max;
  spec.t = t;
  spec.theta = theta;
  spec.path = path;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "semigroup-approximation audit core";
  m.attr("__version__") = kToolVersion;
  m.attr("RNG_ID") = kRngId;
  m.attr("MAX_DIM") = kMaxDim;

  // Base first: translators run newest-first, so derived types match before
  // the catch-all.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ComputationError>(m, "ComputationError",
                                           PyExc_ArithmeticError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<FamilyContractError>(m, "FamilyContractError",
                                              PyExc_RuntimeError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  // ---- linear algebra ----
  m.def("opnorm", &opnorm, py::arg("m"), "Operator (spectral) norm.");
  m.def("expm", &expm, py::arg("m"), "Matrix exponential.");
  m.def("powm", &powm, py::arg("m"), py::arg("n"), "Integer matrix power, n >= 0.");
  m.def("resolvent", &resolvent, py::arg("m"), py::arg("zeta"),
        "(zeta + M)^{-1} with a singularity guard.");
  m.def("fingerprint", &fingerprint, py::arg("m"),
        "Stable identifier of a matrix (quantized FNV-1a).");

  // ---- regions and classification ----
  m.def(
      "drop_region_distance",
      [](Complex z, double alpha) { return drop_region_distance(z, SemiAngle(alpha)); },
      py::arg("z"), py::arg("alpha"),
      "Distance from z to the drop region of semi-angle alpha.");
  m.def(
      "sector_distance",
      [](Complex z, double alpha) { return sector_distance(z, SemiAngle(alpha)); },
      py::arg("z"), py::arg("alpha"));
  m.def(
      "in_drop_region",
      [](Complex z, double alpha) {
        return in_drop_region(z, SemiAngle(alpha), membership_tol(z));
      },
      py::arg("z"), py::arg("alpha"));
  m.def(
      "in_sector",
      [](Complex z, double alpha) {
        return in_sector(z, SemiAngle(alpha), membership_tol(z));
      },
      py::arg("z"), py::arg("alpha"));

  py::class_<NumericalRangeBoundary>(m, "NumericalRangeBoundary")
      .def_readonly("angles", &NumericalRangeBoundary::angles)
      .def_readonly("points", &NumericalRangeBoundary::points);
  m.def("numerical_range_boundary", &numerical_range_boundary, py::arg("m"),
        py::arg("n_angles") = 512,
        "Boundary points of the numerical range by a rotation sweep.");

  m.def("min_drop_semi_angle", &min_drop_semi_angle, py::arg("m"),
        py::arg("n_angles") = 512,
        "Smallest drop-region semi-angle containing the numerical range, or None.");
  m.def("min_sector_semi_angle", &min_sector_semi_angle, py::arg("m"),
        py::arg("n_angles") = 512);

  py::class_<SectorialCert>(m, "SectorialCert")
      .def_readonly("is_contraction", &SectorialCert::is_contraction)
      .def_readonly("contraction_slack", &SectorialCert::contraction_slack)
      .def_readonly("semi_angle_min", &SectorialCert::semi_angle_min)
      .def_property_readonly(
          "region", [](const SectorialCert& c) { return to_string(c.region_checked); })
      .def_readonly("n_angles", &SectorialCert::n_angles);
  m.def("classify_contraction", &classify_contraction, py::arg("m"),
        py::arg("n_angles") = 512);
  m.def("classify_generator", &classify_generator, py::arg("m"),
        py::arg("n_angles") = 512);

  // ---- poisson ----
  m.def("poisson_pmf", &poisson_pmf, py::arg("m"), py::arg("n"));
  m.def("poisson_var_sum", &poisson_var_sum, py::arg("n"));
  m.def("poisson_abs_moment", &poisson_abs_moment, py::arg("n"));

  py::class_<PoissonSplit>(m, "PoissonSplit")
      .def_readonly("n", &PoissonSplit::n)
      .def_readonly("delta", &PoissonSplit::delta)
      .def_readonly("epsilon", &PoissonSplit::epsilon)
      .def_readonly("central_abs", &PoissonSplit::central_abs)
      .def_readonly("tail_abs", &PoissonSplit::tail_abs)
      .def_readonly("tail_prob", &PoissonSplit::tail_prob)
      .def_readonly("var_sum", &PoissonSplit::var_sum);
  m.def("poisson_split", &poisson_split, py::arg("n"), py::arg("delta"),
        "Central/tail split of the first absolute moment at n^{delta+1/2}.");

  py::class_<TailClaimAudit>(m, "TailClaimAudit")
      .def_readonly("n", &TailClaimAudit::n)
      .def_readonly("delta", &TailClaimAudit::delta)
      .def_readonly("epsilon", &TailClaimAudit::epsilon)
      .def_readonly("tail_abs", &TailClaimAudit::tail_abs)
      .def_readonly("tail_prob", &TailClaimAudit::tail_prob)
      .def_readonly("claim_rhs", &TailClaimAudit::claim_rhs)
      .def_readonly("claim_margin", &TailClaimAudit::claim_margin)
      .def_readonly("claim_holds", &TailClaimAudit::claim_holds)
      .def_readonly("safe_rhs", &TailClaimAudit::safe_rhs)
      .def_readonly("safe_margin", &TailClaimAudit::safe_margin)
      .def_readonly("safe_holds", &TailClaimAudit::safe_holds);
  m.def("tail_claim_audit", &tail_claim_audit, py::arg("n"), py::arg("delta"));

  // ---- defects and bounds ----
  m.def("chernoff_defect_matrix", &chernoff_defect_matrix, py::arg("c"), py::arg("n"));
  m.def("chernoff_defect_norm", &chernoff_defect_norm, py::arg("c"), py::arg("n"));

  py::class_<VecDefect>(m, "VecDefect")
      .def_readonly("lhs", &VecDefect::lhs)
      .def_readonly("drive", &VecDefect::drive);
  m.def("chernoff_defect_vec", &chernoff_defect_vec, py::arg("c"), py::arg("x"),
        py::arg("n"));

  m.def("bound_sqrt_n", &bound_sqrt_n, py::arg("n"), py::arg("drive"));
  m.def("bound_split", &bound_split, py::arg("n"), py::arg("delta"), py::arg("drive"));
  m.def("bound_two_term", &bound_two_term, py::arg("n"), py::arg("delta"),
        py::arg("x_norm"), py::arg("drive"));
  m.def("bound_ritt", &bound_ritt, py::arg("n"), py::arg("delta"), py::arg("k"));
  m.def("bound_ritt_cbrt", &bound_ritt_cbrt, py::arg("n"), py::arg("k"));
  m.def("central_step_in_regime", &central_step_in_regime, py::arg("n"),
        py::arg("delta"));

  py::class_<RittEstimate>(m, "RittEstimate")
      .def_readonly("k_hat", &RittEstimate::k_hat)
      .def_readonly("n_max", &RittEstimate::n_max)
      .def_readonly("argmax_n", &RittEstimate::argmax_n)
      .def_readonly("max_at_end", &RittEstimate::max_at_end);
  m.def("ritt_constant", &ritt_constant, py::arg("c"), py::arg("n_max") = 512);

  py::class_<BoundAudit>(m, "BoundAudit")
      .def_readonly("lhs", &BoundAudit::lhs)
      .def_readonly("rhs", &BoundAudit::rhs)
      .def_readonly("margin", &BoundAudit::margin)
      .def_property_readonly(
          "verdict", [](const BoundAudit& a) { return to_string(a.verdict); })
      .def_property_readonly("n", [](const BoundAudit& a) { return a.context.n; })
      .def_property_readonly("delta",
                             [](const BoundAudit& a) { return a.context.delta; })
      .def_property_readonly(
          "bound_id", [](const BoundAudit& a) { return to_string(a.context.bound); });

  py::class_<AuditSweep>(m, "AuditSweep")
      .def_readonly("audits", &AuditSweep::audits)
      .def_readonly("min_margin", &AuditSweep::min_margin)
      .def_readonly("violations", &AuditSweep::violations)
      .def_readonly("out_of_regime", &AuditSweep::out_of_regime);
  m.def(
      "audit_vector_bound",
      [](const Mat& c, const Vec& x, const std::vector<long>& ns, double delta,
         const std::string& bound) {
        return audit_vector_bound(c, x, ns, delta, bound_id_from_string(bound));
      },
      py::arg("c"), py::arg("x"), py::arg("ns"), py::arg("delta"), py::arg("bound"),
      "Audit one of sqrt_n, lemma2, thm22 over an n grid.");
  m.def(
      "audit_norm_bound",
      [](const Mat& c, const std::vector<long>& ns, double delta,
         const RittEstimate& ritt) { return audit_norm_bound(c, ns, delta, ritt); },
      py::arg("c"), py::arg("ns"), py::arg("delta"), py::arg("ritt"),
      "Audit the quasi_sectorial norm bound over an n grid.");

  // ---- approximants ----
  m.def("exact_semigroup", &exact_semigroup, py::arg("a"), py::arg("t"));
  m.def("euler_approx", &euler_approx, py::arg("a"), py::arg("t"), py::arg("n"));
  m.def(
      "trotter_approx",
      [](const Mat& a, const Mat& b, double t, long n, const std::string& order) {
        if (order != "ab" && order != "ba")
          throw InputError("order must be \"ab\" or \"ba\"");
        return trotter_approx(a, b, t, n,
                              order == "ab" ? TrotterOrder::AB : TrotterOrder::BA);
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("n"), py::arg("order") = "ab");

  py::class_<ResolventDefect>(m, "ResolventDefect")
      .def_readonly("direct", &ResolventDefect::direct)
      .def_readonly("product_form", &ResolventDefect::product_form);
  m.def("resolvent_defect", &resolvent_defect, py::arg("a"), py::arg("s"),
        py::arg("zeta") = Complex(1.0, 0.0));

  // ---- families ----
  py::class_<GeneratedOperator>(m, "GeneratedOperator")
      .def_readonly("op", &GeneratedOperator::op)
      .def_readonly("cert", &GeneratedOperator::cert)
      .def_readonly("fingerprint", &GeneratedOperator::fingerprint)
      .def_property_readonly(
          "kind", [](const GeneratedOperator& g) { return to_string(g.spec.kind); })
      .def_property_readonly("seed",
                             [](const GeneratedOperator& g) { return g.spec.seed; });
  m.def(
      "generate",
      [](const std::string& kind, int dim, std::uint64_t seed, double alpha,
         double r_max, double t, double theta, const std::string& path, int n_angles) {
        return make_operator(build_spec(kind, dim, seed, alpha, r_max, t, theta, path),
                             n_angles);
      },
      py::arg("kind"), py::arg("dim"), py::arg("seed") = 0,
      py::arg("alpha") = 0.7853981633974483, py::arg("r_max") = 4.0, py::arg("t") = 1.0,
      py::arg("theta") = 0.0, py::arg("path") = "", py::arg("n_angles") = 256,
      "Build and certify a seeded test operator; kinds: random_contraction, "
      "selfadjoint_contraction, msectorial, resolvent_quasisectorial, "
      "scalar_unitary_probe, jordan_block, diagonal_file.");
  m.def("random_unit_vectors", &random_unit_vectors, py::arg("seed"), py::arg("dim"),
        py::arg("count"));

  // ---- rate fitting ----
  py::class_<PowerFit>(m, "PowerFit")
      .def_readonly("exponent", &PowerFit::exponent)
      .def_readonly("prefactor", &PowerFit::prefactor)
      .def_readonly("residual", &PowerFit::residual);
  py::class_<RatePoint>(m, "RatePoint")
      .def_readonly("n", &RatePoint::n)
      .def_readonly("value", &RatePoint::value);
  py::class_<RateReport>(m, "RateReport")
      .def_readonly("points", &RateReport::points)
      .def_readonly("fit_defined", &RateReport::fit_defined)
      .def_readonly("fit", &RateReport::fit)
      .def_readonly("n_min_used", &RateReport::n_min_used)
      .def_readonly("n_max_used", &RateReport::n_max_used);
  m.def(
      "fit_power",
      [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<RatePoint> rp;
        rp.reserve(pts.size());
        for (const auto& [n, v] : pts) rp.push_back({n, v});
        return fit_power(rp);
      },
      py::arg("points"), "Least-squares power law through (n, value) pairs.");
  m.def("dyadic_grid", &dyadic_grid, py::arg("lo"), py::arg("hi"));
  m.def(
      "sweep_chernoff",
      [](const Mat& c, const std::vector<double>& grid) {
        return sweep_chernoff(c, grid);
      },
      py::arg("c"), py::arg("grid"));
  m.def(
      "sweep_euler",
      [](const Mat& a, double t, const std::vector<double>& grid) {
        return sweep_euler(a, t, grid);
      },
      py::arg("a"), py::arg("t"), py::arg("grid"));
  m.def(
      "sweep_trotter",
      [](const Mat& a, const Mat& b, double t, const std::vector<double>& grid) {
        return sweep_trotter(a, b, t, grid);
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("grid"));
  m.def(
      "sweep_resolvent",
      [](const Mat& a, Complex zeta, const std::vector<double>& s_grid) {
        return sweep_resolvent(a, zeta, s_grid);
      },
      py::arg("a"), py::arg("zeta"), py::arg("s_grid"));

  // ---- command runner ----
  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json,
         const std::string& out_dir, bool svg, bool strict, std::uint64_t seed) {
        CliOptions opt;
        opt.out_dir = out_dir;
        opt.svg = svg;
        opt.strict = strict;
        opt.seed = seed;
        const auto res = run_command(command, nlohmann::json::parse(config_json), opt);
        return py::make_tuple(res.exit_code, res.artifacts, res.report.dump(2));
      },
      py::arg("command"), py::arg("config_json"), py::arg("out_dir"),
      py::arg("svg") = false, py::arg("strict") = false, py::arg("seed") = 12345,
      "Run a CLI command from a JSON config string; returns (exit_code, artifacts, "
      "report_json).");
}
