#include "sgaudit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "sgaudit/approximants.hpp"
#include "sgaudit/defects.hpp"
#include "sgaudit/families.hpp"
#include "sgaudit/matrix_io.hpp"
#include "sgaudit/poisson.hpp"
#include "sgaudit/rates.hpp"
#include "sgaudit/regions.hpp"
#include "sgaudit/svg.hpp"

namespace sgaudit {

namespace {

using nlohmann::json;

// ---------- config plumbing ----------

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
  }
}

const json& need(const json& cfg, const char* key, const std::string& ctx) {
  if (!cfg.contains(key)) throw ConfigError(ctx + ": missing key \"" + key + "\"");
  return cfg.at(key);
}

std::vector<long> long_list(const json& v, const std::string& what) {
  std::vector<long> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<long>());
    return out;
  }
  if (!v.is_array() || v.empty())
    throw ConfigError(what + " must be a non-empty array of integers");
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(what + " must hold integers");
    out.push_back(e.get<long>());
  }
  return out;
}

std::vector<double> num_list(const json& v, const std::string& what) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array() || v.empty())
    throw ConfigError(what + " must be a non-empty array of numbers");
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(what + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double num_or(const json& cfg, const char* key, double fallback, const std::string& ctx) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return cfg.at(key).get<double>();
}

long int_or(const json& cfg, const char* key, long fallback, const std::string& ctx) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number_integer())
    throw ConfigError(ctx + ": \"" + key + "\" must be an integer");
  return cfg.at(key).get<long>();
}

bool bool_or(const json& cfg, const char* key, bool fallback, const std::string& ctx) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_boolean())
    throw ConfigError(ctx + ": \"" + key + "\" must be a boolean");
  return cfg.at(key).get<bool>();
}

std::string str_or(const json& cfg, const char* key, const std::string& fallback,
                   const std::string& ctx) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string())
    throw ConfigError(ctx + ": \"" + key + "\" must be a string");
  return cfg.at(key).get<std::string>();
}

// ---------- run context ----------

struct Ctx {
  const CliOptions& opt;
  std::string out_dir;
  std::string config_hash;
  bool strict = false;
  int strict_violations = 0;
  std::vector<std::string> artifacts;

  std::string path(const std::string& name) const {
    return out_dir.empty() ? name : out_dir + "/" + name;
  }
  void emit(const std::string& name, const std::string& content) {
    write_file_atomic(path(name), content);
    artifacts.push_back(path(name));
  }
};

// ---------- CSV ----------

class Csv {
 public:
  explicit Csv(std::vector<std::string> cols) : n_cols_(cols.size()) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) body_ << ',';
      body_ << cols[i];
    }
    body_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    std::vector<std::string> padded = cells;
    padded.resize(n_cols_);
    for (std::size_t i = 0; i < padded.size(); ++i) {
      if (i) body_ << ',';
      body_ << padded[i];
    }
    body_ << '\n';
    ++rows_;
  }
  std::size_t rows() const { return rows_; }
  std::string str() const { return body_.str(); }

 private:
  std::size_t n_cols_;
  std::size_t rows_ = 0;
  std::ostringstream body_;
};

std::string fd(double v) { return format_double(v); }

// ---------- operators from configs ----------

struct LoadedOp {
  Mat op;
  std::string fp;
  std::string label;
  SectorialCert cert;
};

json cert_to_json(const SectorialCert& c) {
  json j{{"is_contraction", c.is_contraction},
         {"contraction_slack", c.contraction_slack},
         {"region", to_string(c.region_checked)},
         {"n_angles", c.n_angles}};
  if (c.semi_angle_min)
    j["semi_angle_min"] = *c.semi_angle_min;
  else
    j["semi_angle_min"] = nullptr;
  return j;
}

LoadedOp from_matrix(Mat m, const std::string& label) {
  LoadedOp out;
  out.op = std::move(m);
  out.label = label;
  out.fp = fingerprint(out.op);
  out.cert = opnorm(out.op) <= 1.0 + 1e-10 ? classify_contraction(out.op)
                                           : classify_generator(out.op);
  return out;
}

LoadedOp load_operator(const json& src, const CliOptions& opt, const std::string& ctx) {
  if (!src.is_object()) throw ConfigError(ctx + ": operator source must be an object");
  if (src.contains("kind")) {
    FamilySpec spec = family_spec_from_json(src, opt.seed);
    GeneratedOperator gen = make_operator(spec);
    return {std::move(gen.op), std::move(gen.fingerprint), to_string(spec.kind),
            gen.cert};
  }
  if (src.contains("file")) {
    require_keys(src, {"file"}, ctx);
    if (!src["file"].is_string()) throw ConfigError(ctx + ": \"file\" must be a string");
    return from_matrix(read_matrix_json(src["file"].get<std::string>()), "file");
  }
  if (src.contains("matrix")) {
    require_keys(src, {"matrix"}, ctx);
    return from_matrix(matrix_from_json(src["matrix"]), "matrix");
  }
  throw ConfigError(ctx + ": operator source wants \"kind\", \"file\" or \"matrix\"");
}

std::vector<LoadedOp> load_operators(const json& arr, long count, const CliOptions& opt,
                                     const std::string& ctx) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError(ctx + ": \"operators\" must be a non-empty array");
  if (count < 1) throw ConfigError(ctx + ": \"count\" must be >= 1");
  std::vector<LoadedOp> out;
  for (const auto& src : arr) {
    if (count > 1 && (!src.is_object() || !src.contains("kind")))
      throw ConfigError(ctx + ": count > 1 wants family-spec operator sources");
    if (count > 1) {
      FamilySpec base = family_spec_from_json(src, opt.seed);
      for (long i = 0; i < count; ++i) {
        FamilySpec spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(i);
        GeneratedOperator gen = make_operator(spec);
        out.push_back(
            {std::move(gen.op), std::move(gen.fingerprint), to_string(spec.kind), gen.cert});
      }
    } else {
      out.push_back(load_operator(src, opt, ctx));
    }
  }
  return out;
}

std::uint64_t vec_seed(std::uint64_t base, std::size_t op_index) {
  return base ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(op_index + 1));
}

// ---------- rate helpers ----------

json rate_to_json(const RateReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"n", p.n}, {"value", p.value}});
  json j{{"points", std::move(pts)}, {"fit_defined", r.fit_defined}};
  if (r.fit_defined) {
    j["fit"] = {{"exponent", r.fit.exponent},
                {"prefactor", r.fit.prefactor},
                {"residual", r.fit.residual}};
    j["n_min_used"] = r.n_min_used;
    j["n_max_used"] = r.n_max_used;
  }
  return j;
}

void rate_csv_rows(Csv& csv, const RateReport& r, const std::string& fp,
                   const std::string& hash) {
  for (const auto& p : r.points) csv.row({fd(p.n), fd(p.value), fp, hash});
  if (r.fit_defined)
    csv.row({"fit", fd(r.fit.exponent), fd(r.fit.prefactor), fd(r.fit.residual)});
}

void rate_svg(Ctx& ctx, const std::string& name, const std::string& title,
              const RateReport& r) {
  if (!ctx.opt.svg) return;
  PlotSeries pts{"defect", {}, false, true};
  for (const auto& p : r.points) pts.pts.push_back({p.n, p.value});
  std::vector<PlotSeries> series{pts};
  if (r.fit_defined) {
    PlotSeries fit{"fit c*n^-p (p=" + fd(r.fit.exponent) + ")", {}, true, false};
    for (const auto& p : r.points)
      fit.pts.push_back({p.n, r.fit.prefactor * std::pow(p.n, -r.fit.exponent)});
    series.push_back(std::move(fit));
  }
  write_loglog_svg(ctx.path(name), title, "n", "defect", series);
  ctx.artifacts.push_back(ctx.path(name));
}

std::vector<double> grid_from_config(const json& cfg, const char* key,
                                     const std::string& ctx) {
  if (!cfg.contains(key)) return dyadic_grid(16, 4096);
  std::vector<long> ns = long_list(cfg.at(key), ctx + ": \"" + key + "\"");
  std::vector<double> out;
  out.reserve(ns.size());
  for (long n : ns) out.push_back(static_cast<double>(n));
  return out;
}

// ---------- commands ----------

json cmd_poisson(Ctx& ctx, const json& cfg) {
  require_keys(cfg, {"n", "delta", "strict", "out"}, "poisson");
  const auto ns = long_list(need(cfg, "n", "poisson"), "poisson: \"n\"");
  const auto deltas = num_list(need(cfg, "delta", "poisson"), "poisson: \"delta\"");
  Csv csv({"n", "delta", "epsilon", "central_abs", "tail_abs", "tail_prob", "claim_rhs",
           "verdict", "safe_rhs", "safe_verdict", "var_sum", "abs_moment", "config_hash"});
  json results = json::array();
  int violations = 0;
  for (long n : ns) {
    const double abs_m = poisson_abs_moment(n);
    for (double delta : deltas) {
      const PoissonSplit split = poisson_split(n, delta);
      const TailClaimAudit audit = tail_claim_audit(n, delta);
      if (!audit.claim_holds) ++violations;
      csv.row({std::to_string(n), fd(delta), fd(split.epsilon), fd(split.central_abs),
               fd(split.tail_abs), fd(split.tail_prob), fd(audit.claim_rhs),
               audit.claim_holds ? "holds" : "violated", fd(audit.safe_rhs),
               audit.safe_holds ? "holds" : "violated", fd(split.var_sum), fd(abs_m),
               ctx.config_hash});
      results.push_back({{"n", n},
                         {"delta", delta},
                         {"epsilon", split.epsilon},
                         {"central_abs", split.central_abs},
                         {"tail_abs", split.tail_abs},
                         {"tail_prob", split.tail_prob},
                         {"claim_rhs", audit.claim_rhs},
                         {"claim_verdict", audit.claim_holds ? "holds" : "violated"},
                         {"safe_rhs", audit.safe_rhs},
                         {"safe_verdict", audit.safe_holds ? "holds" : "violated"},
                         {"var_sum", split.var_sum},
                         {"abs_moment", abs_m}});
    }
  }
  ctx.emit("poisson.csv", csv.str());
  // The tail claim is audited, never asserted: violations do not flip --strict.
  return json{{"rows", csv.rows()},
              {"claim_violations", violations},
              {"results", std::move(results)}};
}

struct BoundRowSink {
  Csv* csv = nullptr;
  Ctx* ctx = nullptr;
  json per_bound = json::object();

  void account(const AuditSweep& sweep, BoundId id, long probe_index) {
    const std::string token = to_string(id);
    if (!per_bound.contains(token))
      per_bound[token] = {{"audits", 0},
                          {"violations", 0},
                          {"out_of_regime", 0},
                          {"min_margin", nullptr}};
    auto& agg = per_bound[token];
    for (const auto& a : sweep.audits) {
      csv->row({token, std::to_string(a.context.n), fd(a.context.delta), fd(a.lhs),
                fd(a.rhs), fd(a.margin), to_string(a.verdict), a.context.fingerprint,
                probe_index >= 0 ? std::to_string(probe_index) : "", ctx->config_hash});
    }
    agg["audits"] = agg["audits"].get<long>() + static_cast<long>(sweep.audits.size());
    agg["violations"] = agg["violations"].get<long>() + sweep.violations;
    agg["out_of_regime"] = agg["out_of_regime"].get<long>() + sweep.out_of_regime;
    if (agg["min_margin"].is_null() || sweep.min_margin < agg["min_margin"].get<double>())
      agg["min_margin"] = sweep.min_margin;
    if (bound_is_asserted(id)) ctx->strict_violations += sweep.violations;
  }
};

json cmd_defect(Ctx& ctx, const json& cfg) {
  const std::string me = "defect";
  require_keys(cfg,
               {"operators", "count", "vectors", "n_grid", "delta", "bounds",
                "ritt_n_max", "strict", "out"},
               me);
  const long count = int_or(cfg, "count", 1, me);
  const auto ops = load_operators(need(cfg, "operators", me), count, ctx.opt, me);
  const auto n_grid = long_list(need(cfg, "n_grid", me), me + ": \"n_grid\"");
  std::vector<BoundId> bounds;
  {
    const json& b = need(cfg, "bounds", me);
    if (!b.is_array() || b.empty())
      throw ConfigError(me + ": \"bounds\" must be a non-empty array of bound ids");
    for (const auto& e : b) {
      if (!e.is_string()) throw ConfigError(me + ": bound ids must be strings");
      const BoundId id = bound_id_from_string(e.get<std::string>());
      if (std::find(bounds.begin(), bounds.end(), id) != bounds.end())
        throw ConfigError(me + ": duplicate bound id \"" + e.get<std::string>() + "\"");
      bounds.push_back(id);
    }
  }
  const bool wants_vector_bounds =
      std::any_of(bounds.begin(), bounds.end(), [](BoundId b) {
        return b != BoundId::QuasiSectorial;
      });
  const bool wants_quasi =
      std::find(bounds.begin(), bounds.end(), BoundId::QuasiSectorial) != bounds.end();
  const bool wants_delta = std::any_of(bounds.begin(), bounds.end(), [](BoundId b) {
    return b != BoundId::SqrtN;
  });
  std::vector<double> deltas{0.0};
  if (cfg.contains("delta"))
    deltas = num_list(cfg.at("delta"), me + ": \"delta\"");
  else if (wants_delta)
    throw ConfigError(me + ": \"delta\" is required by the requested bounds");
  const long vectors = int_or(cfg, "vectors", 1, me);
  if (wants_vector_bounds && vectors < 1)
    throw ConfigError(me + ": vector bounds want \"vectors\" >= 1");
  const long ritt_n_max = int_or(cfg, "ritt_n_max", 512, me);

  Csv csv({"bound_id", "n", "delta", "lhs", "rhs", "margin", "verdict", "fingerprint",
           "probe_index", "config_hash"});
  BoundRowSink sink{&csv, &ctx};
  json op_meta = json::array();
  for (std::size_t oi = 0; oi < ops.size(); ++oi) {
    const LoadedOp& lo = ops[oi];
    json meta{{"fingerprint", lo.fp}, {"label", lo.label}, {"cert", cert_to_json(lo.cert)}};
    RittEstimate ritt;
    if (wants_quasi) {
      ritt = ritt_constant(lo.op, ritt_n_max);
      meta["ritt"] = {{"k_hat", ritt.k_hat},
                      {"n_max", ritt.n_max},
                      {"argmax_n", ritt.argmax_n},
                      {"max_at_end", ritt.max_at_end}};
    }
    if (wants_vector_bounds) {
      const auto vecs = random_unit_vectors(vec_seed(ctx.opt.seed, oi), lo.op.rows(),
                                            static_cast<int>(vectors));
      for (std::size_t vi = 0; vi < vecs.size(); ++vi) {
        for (BoundId id : bounds) {
          if (id == BoundId::QuasiSectorial) continue;
          if (id == BoundId::SqrtN) {
            sink.account(audit_vector_bound(lo.op, vecs[vi], n_grid, 0.0, id), id,
                         static_cast<long>(vi));
          } else {
            for (double delta : deltas)
              sink.account(audit_vector_bound(lo.op, vecs[vi], n_grid, delta, id), id,
                           static_cast<long>(vi));
          }
        }
      }
    }
    if (wants_quasi)
      for (double delta : deltas)
        sink.account(audit_norm_bound(lo.op, n_grid, delta, ritt), BoundId::QuasiSectorial,
                     -1);
    op_meta.push_back(std::move(meta));
  }
  ctx.emit("audits.csv", csv.str());

  if (ctx.opt.svg && !ops.empty()) {
    const LoadedOp& lo = ops.front();
    const double delta = deltas.front();
    PlotSeries lhs{"defect norm", {}, false, true};
    for (long n : n_grid) lhs.pts.push_back({static_cast<double>(n),
                                             chernoff_defect_norm(lo.op, n)});
    std::vector<PlotSeries> series{lhs};
    const auto vecs = random_unit_vectors(vec_seed(ctx.opt.seed, 0), lo.op.rows(), 1);
    RittEstimate ritt;
    if (wants_quasi) ritt = ritt_constant(lo.op, ritt_n_max);
    for (BoundId id : bounds) {
      PlotSeries rhs{"rhs " + to_string(id), {}, true, false};
      for (long n : n_grid) {
        double v = 0.0;
        switch (id) {
          case BoundId::SqrtN: {
            const VecDefect vd = chernoff_defect_vec(lo.op, vecs[0], n);
            v = bound_sqrt_n(n, vd.drive);
            break;
          }
          case BoundId::Split: {
            const VecDefect vd = chernoff_defect_vec(lo.op, vecs[0], n);
            v = bound_split(n, delta, vd.drive);
            break;
          }
          case BoundId::TwoTerm: {
            const VecDefect vd = chernoff_defect_vec(lo.op, vecs[0], n);
            v = bound_two_term(n, delta, vecs[0].norm(), vd.drive);
            break;
          }
          case BoundId::QuasiSectorial:
            v = bound_ritt(n, delta, ritt.k_hat);
            break;
        }
        rhs.pts.push_back({static_cast<double>(n), v});
      }
      series.push_back(std::move(rhs));
    }
    write_loglog_svg(ctx.path("defect.svg"),
                     "Chernoff defect vs bounds (" + lo.fp + ")", "n", "value", series);
    ctx.artifacts.push_back(ctx.path("defect.svg"));
  }

  return json{{"rows", csv.rows()},
              {"bounds", std::move(sink.per_bound)},
              {"operators", std::move(op_meta)},
              {"n_grid_size", n_grid.size()}};
}

json cmd_trotter(Ctx& ctx, const json& cfg) {
  const std::string me = "trotter";
  require_keys(cfg, {"a", "b", "t", "n_grid", "order", "strict", "out"}, me);
  const LoadedOp a = load_operator(need(cfg, "a", me), ctx.opt, me + ": \"a\"");
  const LoadedOp b = load_operator(need(cfg, "b", me), ctx.opt, me + ": \"b\"");
  const double t = num_or(cfg, "t", 1.0, me);
  const std::string order_tok = str_or(cfg, "order", "ab", me);
  TrotterOrder order;
  if (order_tok == "ab")
    order = TrotterOrder::AB;
  else if (order_tok == "ba")
    order = TrotterOrder::BA;
  else
    throw ConfigError(me + ": \"order\" must be \"ab\" or \"ba\"");
  const auto grid = grid_from_config(cfg, "n_grid", me);
  const RateReport rate = sweep_trotter(a.op, b.op, t, grid, order);
  const std::string fp = a.fp + "+" + b.fp;
  Csv csv({"n", "value", "fingerprint", "config_hash"});
  rate_csv_rows(csv, rate, fp, ctx.config_hash);
  ctx.emit("trotter_rate.csv", csv.str());
  rate_svg(ctx, "trotter.svg", "Trotter product defect", rate);
  return json{{"rate", rate_to_json(rate)},
              {"a", {{"fingerprint", a.fp}, {"label", a.label}}},
              {"b", {{"fingerprint", b.fp}, {"label", b.label}}},
              {"t", t},
              {"order", order_tok}};
}

json cmd_euler(Ctx& ctx, const json& cfg) {
  const std::string me = "euler";
  require_keys(cfg, {"operator", "t", "n_grid", "strict", "out"}, me);
  const LoadedOp a = load_operator(need(cfg, "operator", me), ctx.opt, me);
  const double t = num_or(cfg, "t", 1.0, me);
  const auto grid = grid_from_config(cfg, "n_grid", me);
  const RateReport rate = sweep_euler(a.op, t, grid);
  Csv csv({"n", "value", "fingerprint", "config_hash"});
  rate_csv_rows(csv, rate, a.fp, ctx.config_hash);
  ctx.emit("euler_rate.csv", csv.str());
  rate_svg(ctx, "euler.svg", "Euler approximation defect", rate);
  return json{{"rate", rate_to_json(rate)},
              {"operator", {{"fingerprint", a.fp}, {"label", a.label}}},
              {"t", t}};
}

json cmd_resolvent(Ctx& ctx, const json& cfg) {
  const std::string me = "resolvent";
  require_keys(cfg, {"operator", "zeta", "s_grid", "strict", "out"}, me);
  const LoadedOp a = load_operator(need(cfg, "operator", me), ctx.opt, me);
  Complex zeta(1.0, 0.0);
  if (cfg.contains("zeta")) {
    const json& z = cfg.at("zeta");
    if (!z.is_object()) throw ConfigError(me + ": \"zeta\" must be {\"re\", \"im\"}");
    require_keys(z, {"re", "im"}, me + ": \"zeta\"");
    zeta = Complex(num_or(z, "re", 0.0, me), num_or(z, "im", 0.0, me));
  }
  std::vector<double> s_grid{1e-2, 1e-3, 1e-4};
  if (cfg.contains("s_grid")) s_grid = num_list(cfg.at("s_grid"), me + ": \"s_grid\"");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0) || !(s_grid[i] <= 1.0))
      throw ConfigError(me + ": steps must lie in (0, 1]");
    if (i > 0 && s_grid[i] >= s_grid[i - 1])
      throw ConfigError(me + ": \"s_grid\" must be strictly decreasing");
  }
  RateReport rate;
  json rows = json::array();
  double agreement = 0.0;
  Csv csv({"n", "s", "value", "product_form", "fingerprint", "config_hash"});
  for (double s : s_grid) {
    const ResolventDefect d = resolvent_defect(a.op, s, zeta);
    const double n = std::round(1.0 / s);
    rate.points.push_back({n, d.direct});
    const double rel = std::abs(d.direct - d.product_form) /
                       std::max({d.direct, d.product_form, 1e-300});
    agreement = std::max(agreement, rel);
    csv.row({fd(n), fd(s), fd(d.direct), fd(d.product_form), a.fp, ctx.config_hash});
    rows.push_back({{"s", s},
                    {"n", n},
                    {"direct", d.direct},
                    {"product_form", d.product_form},
                    {"rel_route_diff", rel}});
  }
  std::vector<RatePoint> usable;
  for (const auto& p : rate.points)
    if (p.value > kFitFloor) usable.push_back(p);
  if (usable.size() >= 3) {
    rate.fit = fit_power(usable);
    rate.fit_defined = true;
    rate.n_min_used = usable.front().n;
    rate.n_max_used = usable.back().n;
  }
  if (rate.fit_defined)
    csv.row({"fit", fd(rate.fit.exponent), fd(rate.fit.prefactor), fd(rate.fit.residual)});
  ctx.emit("resolvent_rate.csv", csv.str());
  rate_svg(ctx, "resolvent.svg", "Resolvent defect vs 1/s", rate);
  return json{{"rate", rate_to_json(rate)},
              {"steps", std::move(rows)},
              {"route_agreement_rel", agreement},
              {"operator", {{"fingerprint", a.fp}, {"label", a.label}}},
              {"zeta", {{"re", zeta.real()}, {"im", zeta.imag()}}}};
}

json cmd_numrange(Ctx& ctx, const json& cfg) {
  const std::string me = "numrange";
  require_keys(cfg, {"operator", "n_angles", "region", "strict", "out"}, me);
  const LoadedOp a = load_operator(need(cfg, "operator", me), ctx.opt, me);
  const long n_angles = int_or(cfg, "n_angles", 512, me);
  const std::string region = str_or(cfg, "region", "auto", me);
  SectorialCert cert;
  if (region == "drop")
    cert = classify_contraction(a.op, static_cast<int>(n_angles));
  else if (region == "sector")
    cert = classify_generator(a.op, static_cast<int>(n_angles));
  else if (region == "auto")
    cert = opnorm(a.op) <= 1.0 + 1e-10
               ? classify_contraction(a.op, static_cast<int>(n_angles))
               : classify_generator(a.op, static_cast<int>(n_angles));
  else
    throw ConfigError(me + ": \"region\" must be \"drop\", \"sector\" or \"auto\"");
  const auto nr = numerical_range_boundary(a.op, static_cast<int>(n_angles));
  Csv csv({"theta", "re", "im", "fingerprint", "config_hash"});
  for (std::size_t i = 0; i < nr.points.size(); ++i)
    csv.row({fd(nr.angles[i]), fd(nr.points[i].real()), fd(nr.points[i].imag()), a.fp,
             ctx.config_hash});
  ctx.emit("boundary.csv", csv.str());
  if (ctx.opt.svg) {
    PlotSeries boundary{"numerical range boundary", {}, false, true};
    for (const auto& z : nr.points) boundary.pts.push_back({z.real(), z.imag()});
    if (!nr.points.empty())
      boundary.pts.push_back({nr.points.front().real(), nr.points.front().imag()});
    PlotSeries circle{"unit circle", {}, true, false};
    for (int k = 0; k <= 128; ++k) {
      const double th = 2.0 * 3.14159265358979323846 * k / 128;
      circle.pts.push_back({std::cos(th), std::sin(th)});
    }
    write_xy_svg(ctx.path("numrange.svg"), "Numerical range (" + a.fp + ")", "Re", "Im",
                 {boundary, circle});
    ctx.artifacts.push_back(ctx.path("numrange.svg"));
  }
  return json{{"cert", cert_to_json(cert)},
              {"region", region},
              {"n_angles", n_angles},
              {"operator", {{"fingerprint", a.fp}, {"label", a.label}}}};
}

json cmd_fit(Ctx& ctx, const json& cfg) {
  const std::string me = "fit";
  require_keys(cfg, {"csv", "n_column", "value_column", "skip_header", "strict", "out"},
               me);
  const json& src = need(cfg, "csv", me);
  if (!src.is_string()) throw ConfigError(me + ": \"csv\" must be a path string");
  const long ncol = int_or(cfg, "n_column", 0, me);
  const long vcol = int_or(cfg, "value_column", 1, me);
  const bool skip_header = bool_or(cfg, "skip_header", true, me);
  if (ncol < 0 || vcol < 0) throw ConfigError(me + ": column indices must be >= 0");
  const std::string text = read_file(src.get<std::string>());
  std::vector<RatePoint> pts;
  long skipped = 0;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const long want = std::max(ncol, vcol);
    if (static_cast<long>(cells.size()) <= want) {
      ++skipped;
      continue;
    }
    char* end = nullptr;
    const double n = std::strtod(cells[ncol].c_str(), &end);
    if (end == cells[ncol].c_str() || *end != '\0') {
      ++skipped;
      continue;
    }
    const double v = std::strtod(cells[vcol].c_str(), &end);
    if (end == cells[vcol].c_str() || *end != '\0') {
      ++skipped;
      continue;
    }
    pts.push_back({n, v});
  }
  std::sort(pts.begin(), pts.end(), [](const RatePoint& x, const RatePoint& y) {
    return x.n < y.n;
  });
  RateReport rate;
  rate.points = pts;
  std::vector<RatePoint> usable;
  for (const auto& p : pts)
    if (std::isfinite(p.value) && p.value > kFitFloor && p.n >= 1.0) usable.push_back(p);
  if (usable.size() >= 3) {
    rate.fit = fit_power(usable);
    rate.fit_defined = true;
    rate.n_min_used = usable.front().n;
    rate.n_max_used = usable.back().n;
  }
  rate_svg(ctx, "fit.svg", "Power-law fit", rate);
  return json{{"rate", rate_to_json(rate)},
              {"rows_used", pts.size()},
              {"rows_skipped", skipped},
              {"source", src.get<std::string>()}};
}

json cmd_probe(Ctx& ctx, const json& cfg) {
  const std::string me = "probe";
  require_keys(cfg, {"theta", "n", "delta", "strict", "out"}, me);
  const auto thetas = num_list(need(cfg, "theta", me), me + ": \"theta\"");
  const auto ns = long_list(need(cfg, "n", me), me + ": \"n\"");
  const auto deltas = num_list(need(cfg, "delta", me), me + ": \"delta\"");
  Csv csv({"bound_id", "n", "delta", "lhs", "rhs", "margin", "verdict", "fingerprint",
           "theta", "config_hash"});
  json probes = json::array();
  json per_bound = json::object();
  auto account = [&](BoundId id, const BoundAudit& a, double theta, json& audits) {
    const std::string token = to_string(id);
    if (!per_bound.contains(token))
      per_bound[token] = {{"audits", 0}, {"violations", 0}, {"out_of_regime", 0}};
    auto& agg = per_bound[token];
    agg["audits"] = agg["audits"].get<long>() + 1;
    if (a.verdict == Verdict::Violated) {
      agg["violations"] = agg["violations"].get<long>() + 1;
      if (bound_is_asserted(id)) ++ctx.strict_violations;
    }
    if (a.verdict == Verdict::OutOfRegime)
      agg["out_of_regime"] = agg["out_of_regime"].get<long>() + 1;
    csv.row({token, std::to_string(a.context.n), fd(a.context.delta), fd(a.lhs), fd(a.rhs),
             fd(a.margin), to_string(a.verdict), a.context.fingerprint, fd(theta),
             ctx.config_hash});
    json entry{{"bound_id", token},
               {"delta", a.context.delta},
               {"rhs", a.rhs},
               {"margin", a.margin},
               {"verdict", to_string(a.verdict)}};
    if (a.lhs > 0.0 && a.rhs > 0.0) entry["rhs_over_lhs"] = a.rhs / a.lhs;
    audits.push_back(std::move(entry));
  };
  for (double theta : thetas) {
    FamilySpec spec;
    spec.kind = FamilyKind::ScalarUnitaryProbe;
    spec.dim = 1;
    spec.seed = ctx.opt.seed;
    spec.theta = theta;
    const GeneratedOperator gen = make_operator(spec);
    Vec x = Vec::Ones(1);
    for (long n : ns) {
      const VecDefect vd = chernoff_defect_vec(gen.op, x, n);
      json audits = json::array();
      const double ratio = vd.drive > 0.0 ? vd.lhs / vd.drive
                                          : std::numeric_limits<double>::quiet_NaN();
      {
        BoundAudit a;
        a.lhs = vd.lhs;
        a.rhs = bound_sqrt_n(n, vd.drive);
        a.margin = a.rhs - a.lhs;
        a.verdict = verdict_for(a.lhs, a.rhs);
        a.context = {n, 0.0, BoundId::SqrtN, gen.fingerprint};
        account(BoundId::SqrtN, a, theta, audits);
      }
      for (double delta : deltas) {
        BoundAudit a;
        a.lhs = vd.lhs;
        a.rhs = bound_split(n, delta, vd.drive);
        a.margin = a.rhs - a.lhs;
        a.verdict = central_step_in_regime(n, delta) ? verdict_for(a.lhs, a.rhs)
                                                     : Verdict::OutOfRegime;
        a.context = {n, delta, BoundId::Split, gen.fingerprint};
        // rhs/drive is the quantity the audit compares against lhs/drive
        account(BoundId::Split, a, theta, audits);
        json& last = audits.back();
        if (vd.drive > 0.0) {
          last["rhs_over_drive"] = a.rhs / vd.drive;
          last["lhs_over_drive"] = vd.lhs / vd.drive;
        }
        BoundAudit b;
        b.lhs = vd.lhs;
        b.rhs = bound_two_term(n, delta, 1.0, vd.drive);
        b.margin = b.rhs - b.lhs;
        b.verdict = central_step_in_regime(n, delta) ? verdict_for(b.lhs, b.rhs)
                                                     : Verdict::OutOfRegime;
        b.context = {n, delta, BoundId::TwoTerm, gen.fingerprint};
        account(BoundId::TwoTerm, b, theta, audits);
      }
      probes.push_back({{"theta", theta},
                        {"n", n},
                        {"fingerprint", gen.fingerprint},
                        {"lhs", vd.lhs},
                        {"drive", vd.drive},
                        {"ratio", ratio},
                        {"audits", std::move(audits)}});
    }
  }
  ctx.emit("probe.csv", csv.str());
  return json{{"probes", std::move(probes)},
              {"bounds", std::move(per_bound)},
              {"rows", csv.rows()}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"poisson", "defect", "trotter", "euler",
                                              "resolvent", "numrange", "fit", "probe"};
  return names;
}

CliResult run_command(const std::string& command, const nlohmann::json& config,
                      const CliOptions& opt) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  Ctx ctx{opt, "", "", false, 0, {}};
  ctx.config_hash = hex16(fnv1a64(config.dump()));
  ctx.strict = opt.strict || bool_or(config, "strict", false, command);
  ctx.out_dir = !opt.out_dir.empty() ? opt.out_dir
                                     : str_or(config, "out", "", command);
  json payload;
  if (command == "poisson")
    payload = cmd_poisson(ctx, config);
  else if (command == "defect")
    payload = cmd_defect(ctx, config);
  else if (command == "trotter")
    payload = cmd_trotter(ctx, config);
  else if (command == "euler")
    payload = cmd_euler(ctx, config);
  else if (command == "resolvent")
    payload = cmd_resolvent(ctx, config);
  else if (command == "numrange")
    payload = cmd_numrange(ctx, config);
  else if (command == "fit")
    payload = cmd_fit(ctx, config);
  else if (command == "probe")
    payload = cmd_probe(ctx, config);
  else
    throw ConfigError("unknown command \"" + command + "\"");

  // Artifact names only: reports stay byte-identical across output locations.
  json artifact_names = json::array();
  for (const auto& a : ctx.artifacts)
    artifact_names.push_back(std::filesystem::path(a).filename().string());
  json report{{"tool", kToolName},
              {"version", kToolVersion},
              {"command", command},
              {"config_hash", ctx.config_hash},
              {"seed", opt.seed},
              {"rng", kRngId},
              {"strict", ctx.strict},
              {"strict_violations", ctx.strict_violations},
              {"artifacts", std::move(artifact_names)}};
  report.update(payload);
  const std::string report_path = ctx.path(command + "_report.json");
  write_file_atomic(report_path, report.dump(2) + "\n");

  CliResult res;
  res.artifacts = ctx.artifacts;
  res.artifacts.push_back(report_path);
  res.report = std::move(report);
  res.exit_code = (ctx.strict && ctx.strict_violations > 0) ? 1 : 0;
  return res;
}

nlohmann::json error_json(const std::exception& e) {
  const char* kind = "internal_error";
  if (dynamic_cast<const ConfigError*>(&e)) kind = "config_error";
  else if (dynamic_cast<const SingularityError*>(&e)) kind = "singularity_error";
  else if (dynamic_cast<const ComputationError*>(&e)) kind = "computation_error";
  else if (dynamic_cast<const InputError*>(&e)) kind = "input_error";
  else if (dynamic_cast<const FamilyContractError*>(&e)) kind = "family_contract_error";
  else if (dynamic_cast<const GenerationError*>(&e)) kind = "generation_error";
  else if (dynamic_cast<const FitError*>(&e)) kind = "fit_error";
  else if (dynamic_cast<const IoError*>(&e)) kind = "io_error";
  else if (dynamic_cast<const nlohmann::json::exception*>(&e)) kind = "config_error";
  else if (dynamic_cast<const Error*>(&e)) kind = "error";
  nlohmann::json j{{"error", kind}, {"message", e.what()}};
  const auto* sing = dynamic_cast<const SingularityError*>(&e);
  if (sing) j["condition_estimate"] = sing->condition_estimate;
  return j;
}

}  // namespace sgaudit
