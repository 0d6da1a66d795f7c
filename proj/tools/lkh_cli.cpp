// lkh_cli: batch front end. Exit 0 when expectations hold, 2 on mismatch, 1 on bad input.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lkh/io.hpp"

using namespace lkh;
using io::json;

namespace {

struct Opts {
  std::string potential, metric, algebra, expect, out, variant = "hermitized";
  std::optional<int> order, rmax;
  double tol = 1e-9;
  unsigned seed = 1;
  char family = 'a';
  int n = 0, m = 0;
};

struct Outcome {
  json result;
  bool ok = true;
  json mismatches = json::array();
};

json header(const std::string& cmd, const Opts& o) {
  json h;
  h["tool"] = "lkh_cli";
  h["version"] = library_version();
  h["conventions"] = json{{"digest", io::conventions_digest()}, {"text", io::conventions_text()}};
  h["command"] = cmd;
  const auto& t = default_tolerances();
  h["tolerances"] = json{{"tol", o.tol},
                         {"zero_coeff", t.zero_coeff},
                         {"rank", t.rank},
                         {"check", t.check},
                         {"nondegenerate", t.nondegenerate}};
  h["seed"] = o.seed;
  return h;
}

// ---- metric construction

struct Built {
  MetricJet metric;
  std::optional<Jet> potential;
  int order = 0, rmax = 0;
  json source;
};

Built build_metric(const std::string& path, const Opts& o, int default_rmax_floor = 2) {
  json j = io::read_file(path);
  io::MetricSource src = io::metric_source_from(j);
  Built b;
  b.source = j;
  using K = io::MetricSource::Kind;
  switch (src.kind) {
    case K::descriptor: {
      ConstructedSpec cs = spec_for_descriptor(src.descriptor);
      b.rmax = o.rmax.value_or(cs.levels);
      b.order = o.order.value_or(2 * (b.rmax + 3));
      b.potential = build_potential(cs.spec, b.order);
      b.metric = metric_from_potential(*b.potential);
      break;
    }
    case K::potential: {
      int gens = static_cast<int>(src.spec.A.size());
      for (const auto& p : src.spec.parts) gens = std::max(gens, static_cast<int>(p.A.size()));
      b.rmax = o.rmax.value_or(std::max(2 * gens + 2, default_rmax_floor));
      b.order = o.order.value_or(2 * (b.rmax + 3));
      b.potential = build_potential(src.spec, b.order);
      b.metric = metric_from_potential(*b.potential);
      break;
    }
    case K::small_dim:
      b.rmax = o.rmax.value_or(5);
      b.order = o.order.value_or(std::max(b.rmax + 7, 10));
      b.metric = small_dim_metric(src.small, b.order, src.gamma);
      break;
    case K::oriented_lines:
      b.rmax = o.rmax.value_or(6);
      b.order = o.order.value_or(std::max(b.rmax + 6, 10));
      b.metric = oriented_lines_metric(src.lines, b.order);
      break;
  }
  return b;
}

// ---- expectations

/// Descriptor-level comparison: family, n, m, r, dim k, gamma.
void compare_descriptor(const AlgebraDescriptor& got, const json& want, double tol, Outcome& out) {
  auto miss = [&](const std::string& what, const json& w, const json& g) {
    out.ok = false;
    out.mismatches.push_back(json{{"field", what}, {"expected", w}, {"got", g}});
  };
  std::string f = want.at("family").get<std::string>();
  if (f != family_name(got.family)) miss("family", f, family_name(got.family));
  for (const char* key : {"n", "m", "r", "k_dim"}) {
    if (!want.contains(key)) continue;
    int w = want.at(key).get<int>();
    int g = std::string(key) == "n" ? got.n : std::string(key) == "m" ? got.m : std::string(key) == "r" ? got.r : (got.k_basis.empty() ? 0 : got.k_dim());
    if (w != g) miss(key, w, g);
  }
  if (want.contains("gamma") && std::abs(io::cplx_from(want.at("gamma")) - got.gamma) > tol)
    miss("gamma", want.at("gamma"), io::to_json(got.gamma));
}

/// Every key of `want` must be present in `result` with an equal value (numbers within tol).
void compare_subset(const json& result, const json& want, double tol, Outcome& out, const std::string& prefix = "") {
  for (auto it = want.begin(); it != want.end(); ++it) {
    const std::string key = prefix + it.key();
    if (!result.contains(it.key())) {
      out.ok = false;
      out.mismatches.push_back(json{{"field", key}, {"expected", it.value()}, {"got", nullptr}});
      continue;
    }
    const json& g = result.at(it.key());
    const json& w = it.value();
    bool same;
    if (w.is_object() && g.is_object()) {
      compare_subset(g, w, tol, out, key + ".");
      continue;
    } else if (w.is_number() && g.is_number()) {
      same = std::abs(w.get<double>() - g.get<double>()) <= tol * std::max(1.0, std::abs(w.get<double>()));
    } else {
      same = w == g;
    }
    if (!same) {
      out.ok = false;
      out.mismatches.push_back(json{{"field", key}, {"expected", w}, {"got", g}});
    }
  }
}

void apply_expect(const Opts& o, const std::optional<AlgebraDescriptor>& got, Outcome& out) {
  if (o.expect.empty()) return;
  json want = io::read_file(o.expect);
  if (want.contains("family") && got)
    compare_descriptor(*got, want, o.tol, out);
  else
    compare_subset(out.result, want, o.tol, out);
}

// ---- commands

Outcome cmd_holonomy(const Opts& o) {
  const std::string& path = o.potential.empty() ? o.metric : o.potential;
  if (path.empty()) throw io::InputError("holonomy needs --potential or --metric");
  Built b = build_metric(path, o);
  HolonomyReport h = infinitesimal_holonomy(b.metric, b.rmax);
  AlgebraDescriptor d = match_algebra(h.algebra);
  Outcome out;
  out.result = json{{"order", b.order},
                    {"rmax", b.rmax},
                    {"dims_by_order", h.dims_by_order},
                    {"stabilized", h.stabilized},
                    {"dim", h.algebra.dim()},
                    {"matched_family", d.family == Family::Unknown ? json("unknown") : io::to_json(d)},
                    {"ricci_flat", ricci(b.metric).is_zero(o.tol)},
                    {"algebra", io::to_json(h.algebra)}};
  apply_expect(o, d, out);
  return out;
}

MatrixAlgebra algebra_input(const std::string& path, std::optional<AlgebraDescriptor>& desc) {
  json j = io::read_file(path);
  if (j.contains("family")) {
    desc = io::descriptor_from(j);
    return build_family(*desc);
  }
  return io::algebra_from(j);
}

Outcome cmd_classify(const Opts& o) {
  if (o.algebra.empty()) throw io::InputError("classify needs --algebra");
  std::optional<AlgebraDescriptor> given;
  MatrixAlgebra alg = algebra_input(o.algebra, given);
  AlgebraDescriptor d = match_algebra(alg);
  if (d.family == Family::Unknown && given) d = *given;  // matcher only works in the canonical frame
  Outcome out;
  out.result = json{{"family", family_name(d.family)},
                    {"params", io::to_json(d)},
                    {"dim", alg.dim()},
                    {"realizable", realizability_name(is_holonomy_realizable(d))}};
  out.result["ricci_flat"] = d.family == Family::Unknown ? json(nullptr) : json(ricci_flat_condition(d));
  apply_expect(o, d, out);
  return out;
}

Outcome cmd_berger(const Opts& o) {
  if (o.algebra.empty()) throw io::InputError("berger needs --algebra");
  std::optional<AlgebraDescriptor> given;
  MatrixAlgebra alg = algebra_input(o.algebra, given);
  BergerResult r = berger_check(alg);
  Outcome out;
  out.result = json{{"dim", alg.dim()}, {"dim_R_space", r.dim_R_space}, {"is_berger", r.is_berger}, {"generated_dim", r.generated.dim()}};
  apply_expect(o, std::nullopt, out);
  return out;
}

Outcome cmd_ppwave(const Opts& o) {
  const std::string& path = o.metric.empty() ? o.potential : o.metric;
  if (path.empty()) throw io::InputError("ppwave needs --metric");
  Built b = build_metric(path, o);
  PPWaveReport r = ppwave_check(b.metric, b.rmax, b.potential ? &*b.potential : nullptr, 1e-10);
  Outcome out;
  out.result = json{{"order", b.order},
                    {"rmax", b.rmax},
                    {"p_parallel", r.p_parallel},
                    {"cond1", r.cond1},
                    {"cond2", r.cond2},
                    {"cond3", r.cond3},
                    {"cond4", r.cond4},
                    {"cond5_hint", r.cond5_hint ? json(*r.cond5_hint) : json(nullptr)},
                    {"agree", r.agree()}};
  if (!r.agree()) {
    out.ok = false;
    out.mismatches.push_back(json{{"field", "agree"}, {"expected", true}, {"got", false}});
  }
  apply_expect(o, std::nullopt, out);
  return out;
}

Outcome cmd_symspace(const Opts& o) {
  SymmetricPair p = canonical_pair(o.family, o.n, o.m);
  SymspaceReport r = symspace_report(p, 1e-10);
  Outcome out;
  out.result = json{{"family", std::string(1, o.family)}, {"n", o.n}, {"m", o.m}};
  out.result.update(io::to_json(r));
  out.result["g"] = io::to_json(p.g);
  out.result["R"] = io::to_json(p.R);
  json forced = json::array();
  for (const auto& e : p.forced)
    forced.push_back(json{{"i", e.i}, {"j", e.j}, {"printed", io::to_json(e.printed)}, {"forced", io::to_json(e.forced)}, {"agrees", e.agrees}});
  out.result["forced_entries"] = forced;
  if (!p.relation_note.empty()) out.result["relation_note"] = p.relation_note;
  if (r.jacobi) out.result["transvection_dim"] = build_transvection(p).dim();
  out.result["irreducible_cases"] = irreducible_symmetric_spaces(o.n);
  if (!r.jacobi) {
    out.ok = false;
    out.mismatches.push_back(json{{"field", "jacobi"}, {"expected", true}, {"got", false}});
  }
  apply_expect(o, std::nullopt, out);
  return out;
}

Outcome cmd_validate(const Opts& o) {
  Outcome out;
  const std::string& path = o.potential.empty() ? o.metric : o.potential;
  if (path.empty()) {
    // oriented lines
    LinesVariant v;
    if (o.variant == "literal")
      v = LinesVariant::literal;
    else if (o.variant == "hermitized")
      v = LinesVariant::hermitized;
    else
      throw io::InputError("--variant must be literal or hermitized");
    LinesValidation lv = validate_oriented_lines(v, o.order.value_or(10), o.tol);
    out.result = json{{"variant", o.variant},
                      {"hermitian_residual", lv.hermitian_residual},
                      {"kahler_residual", lv.kahler_residual},
                      {"valid_metric", lv.valid_metric},
                      {"R_pq", io::to_json(lv.R_pq)},
                      {"R_qq", io::to_json(lv.R_qq)},
                      {"reproduces", lv.reproduces}};
    out.ok = lv.valid_metric && lv.reproduces;
    if (!out.ok) out.mismatches.push_back(json{{"field", "valid_metric/reproduces"}, {"expected", true}, {"got", false}});
    apply_expect(o, std::nullopt, out);
    return out;
  }
  json j = io::read_file(path);
  io::MetricSource src = io::metric_source_from(j);
  if (src.kind != io::MetricSource::Kind::potential) throw io::InputError("validate expects a potential spec");
  const int order = o.order.value_or(8);
  Jet f = build_potential(src.spec, order);
  MetricJet m = metric_from_potential(f);
  out.result = json{{"spec", io::to_json(src.spec)},
                    {"order", order},
                    {"real", f.is_real(1e-12)},
                    {"walker_form", m.walker_form},
                    {"hermitian_residual", hermitian_residual(m.h)},
                    {"kahler_residual", kahler_residual(m.h)},
                    {"terms", static_cast<int>(f.terms().size())}};
  apply_expect(o, std::nullopt, out);
  return out;
}

json catalog_entry(const char* family, const std::string& params, const std::string& formula, int lo, int hi) {
  return json{{"family", family}, {"params", params}, {"dim_formula", formula}, {"dim_min", lo}, {"dim_max", hi}};
}

Outcome cmd_catalog(const Opts& o) {
  const int n = o.n;
  if (n < 0 || n > 3) throw io::InputError("catalog: n must be in 0..3");
  Outcome out;
  json fams = json::array();
  if (n == 0) {
    for (Family f : {Family::G0, Family::G1, Family::G2, Family::G3}) {
      AlgebraDescriptor d;
      d.family = f;
      d.gamma = 1.0;
      int dim = build_family(d).dim();
      fams.push_back(json{{"family", family_name(f)}, {"dim", dim}, {"dim_formula_check", family_dimension(d)}});
    }
    AlgebraDescriptor z;
    z.family = Family::G3;
    fams.push_back(json{{"family", "G3"}, {"params", "gamma = 0"}, {"dim", build_family(z).dim()}});
  } else {
    const int un = n * n;
    fams.push_back(catalog_entry("GK", "k in C + u(n)", "dim k + 2n + 1", 2 * n + 1, un + 2 + 2 * n + 1));
    for (int m = 0; m < n; ++m) {
      const std::string ms = "m=" + std::to_string(m);
      fams.push_back(catalog_entry("GKJL", ms + ", k in RJ + u(m), J-part nonzero", "dim k + 2m + (n-m) + 1", 1 + 2 * m + (n - m) + 1,
                                   m * m + 1 + 2 * m + (n - m) + 1));
      fams.push_back(catalog_entry("GKL", ms + ", k in u(m), real form L0 of C^{n-m}", "dim k + 2m + (n-m) + 1", 2 * m + (n - m) + 1,
                                   m * m + 2 * m + (n - m) + 1));
    }
    for (int m = 1; m <= n; ++m)
      for (int r = 1; r <= m; ++r) {
        if (2 * (m - r) + (n - m) == 0) continue;
        fams.push_back(catalog_entry("GK0PSI", "m=" + std::to_string(m) + ", r=" + std::to_string(r) + ", k0 in u(r), psi nonzero",
                                     "dim k0 + 2r + 2(m-r) + (n-m) + 1", 2 * r + 2 * (m - r) + (n - m) + 1,
                                     r * r + 2 * r + 2 * (m - r) + (n - m) + 1));
      }
    // a concrete instance per family with its built dimension
    AlgebraDescriptor gk;
    gk.family = Family::GK;
    gk.n = n;
    gk.k_basis = {k_element(n, 1.0, Mat::Zero(n, n)), k_element(n, I, Mat::Zero(n, n))};
    for (const auto& A : un_basis(n)) gk.k_basis.push_back(k_element(n, 0.0, A));
    fams.push_back(json{{"family", "GK"}, {"instance", "k = C + u(n)"}, {"dim", build_family(gk).dim()}, {"dim_formula", family_dimension(gk)}});
  }
  out.result = json{{"n", n}, {"families", fams}};
  apply_expect(o, std::nullopt, out);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorentz-Kahler holonomy toolkit"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);
  Opts o;

  auto common = [&](CLI::App* s) {
    s->add_option("--order", o.order, "jet order of the potential");
    s->add_option("--rmax", o.rmax, "highest covariant derivative order");
    s->add_option("--tol", o.tol, "comparison tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--expect", o.expect, "expected descriptor or result subset (JSON)");
    s->add_option("--out", o.out, "report path (stdout if absent)");
  };
  auto* hol = app.add_subcommand("holonomy", "infinitesimal holonomy of a metric");
  hol->add_option("--potential", o.potential);
  hol->add_option("--metric", o.metric);
  common(hol);
  auto* cls = app.add_subcommand("classify", "match an algebra to a family");
  cls->add_option("--algebra", o.algebra);
  common(cls);
  auto* ber = app.add_subcommand("berger", "curvature space and Berger test");
  ber->add_option("--algebra", o.algebra);
  common(ber);
  auto* ppw = app.add_subcommand("ppwave", "pp-wave conditions");
  ppw->add_option("--metric", o.metric);
  ppw->add_option("--potential", o.potential);
  common(ppw);
  auto* sym = app.add_subcommand("symspace", "canonical symmetric pair report");
  sym->add_option("--family", o.family)->required()->check(CLI::IsMember({'a', 'b', 'c', 'd', 'e', 'f'}));
  sym->add_option("--n", o.n);
  sym->add_option("--m", o.m);
  common(sym);
  auto* val = app.add_subcommand("validate", "validate a potential spec or the oriented-lines metric");
  val->add_option("--potential", o.potential);
  val->add_option("--metric", o.metric);
  val->add_option("--variant", o.variant)->check(CLI::IsMember({"literal", "hermitized"}));
  common(val);
  auto* cat = app.add_subcommand("catalog", "family list with dimensions");
  cat->add_option("--n", o.n)->required();
  common(cat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Outcome res;
  try {
    if (cmd == "holonomy")
      res = cmd_holonomy(o);
    else if (cmd == "classify")
      res = cmd_classify(o);
    else if (cmd == "berger")
      res = cmd_berger(o);
    else if (cmd == "ppwave")
      res = cmd_ppwave(o);
    else if (cmd == "symspace")
      res = cmd_symspace(o);
    else if (cmd == "validate")
      res = cmd_validate(o);
    else
      res = cmd_catalog(o);
  } catch (const std::exception& e) {
    // every library error at this level comes from the given input
    json err = header(cmd, o);
    err["error"] = e.what();
    std::cerr << io::dump(err);
    return 1;
  }

  json report = header(cmd, o);
  report["result"] = res.result;
  report["verdict"] = json{{"ok", res.ok}, {"mismatches", res.mismatches}};
  const std::string text = io::dump(report);
  try {
    if (o.out.empty())
      std::cout << text;
    else
      io::write_atomic(o.out, text);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return res.ok ? 0 : 2;
}
