#pragma once

// JSON wire format. Complex numbers are [re, im]; matrices are arrays of rows of [re, im].

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lkh/classify.hpp"
#include "lkh/curvspace.hpp"
#include "lkh/geometry.hpp"
#include "lkh/potentials.hpp"
#include "lkh/symspace.hpp"

namespace lkh::io {

using json = nlohmann::ordered_json;

struct InputError : Error {
  using Error::Error;
};

/// Written into every report so results can be tied to the sign and ordering choices below.
inline const char* conventions_text() {
  return "h(x,y)=y^* G x, G Witt gram on (p,e_1..e_n,q); "
         "coordinates (v,z^1..z^n,u); H(a,b)=h_{conj a b}=d_a dbar_b f; "
         "Gamma_c=H^{-1} d_c H; R(c,dbar)=-dbar_d Gamma_c; "
         "R^{1,0} stored as M(i,j)=R(b_i,conj b_j); real R(X,Y)=R(X,conj Y)-R(Y,conj X); "
         "bracket [x,y]=xy-yx; transvection [X,Y]=-R(X,Y); "
         "m basis b_0,i b_0,b_1,i b_1,...; BergerGK theta sign -1";
}

inline std::string conventions_digest() {
  std::uint64_t h = 1469598103934665603ull;
  for (const char* c = conventions_text(); *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- scalars and matrices

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a number or [re, im], got " + j.dump());
}

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

inline Mat mat_from(const json& j) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  if (r == 0) return Mat(0, 0);
  if (!j[0].is_array()) throw InputError("matrix rows must be arrays");
  const auto c = static_cast<Eigen::Index>(j[0].size());
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != c) throw InputError("ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = cplx_from(j[i][k]);
  }
  return m;
}

inline json mats_to_json(const std::vector<Mat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

inline std::vector<Mat> mats_from(const json& j) {
  std::vector<Mat> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw InputError("expected an array of matrices");
  for (const auto& x : j) out.push_back(mat_from(x));
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T dflt) {
  return j.contains(key) ? j.at(key).get<T>() : dflt;
}

// ---- algebras

inline json to_json(const MatrixAlgebra& a) {
  return json{{"n", a.n}, {"dim", a.dim()}, {"basis", mats_to_json(a.basis)}};
}

/// { "n": int, "basis": [matrix], "flags": [...] }; the basis is re-spanned.
inline MatrixAlgebra algebra_from(const json& j) {
  if (!j.contains("n") || !j.contains("basis")) throw InputError("algebra needs \"n\" and \"basis\"");
  int n = j.at("n").get<int>();
  auto basis = mats_from(j.at("basis"));
  for (const auto& b : basis)
    if (b.rows() != n + 2 || b.cols() != n + 2) throw InputError("algebra basis matrix has wrong size");
  return make_span(n, basis);
}

// ---- descriptors

inline json to_json(const RealFormData& rf) {
  json j{{"n_minus_m", rf.n_minus_m}, {"lambdas", rf.lambdas}};
  if (rf.basis_f.size()) j["basis_f"] = to_json(rf.basis_f);
  return j;
}

inline RealFormData real_form_from(const json& j) {
  if (j.contains("basis_f")) return RealFormData::from_basis(mat_from(j.at("basis_f")));
  return RealFormData::from_lambdas(j.at("n_minus_m").get<int>(), get_or<std::vector<double>>(j, "lambdas", {}));
}

inline json to_json(const AlgebraDescriptor& d) {
  json j{{"family", family_name(d.family)}, {"n", d.n}};
  switch (d.family) {
    case Family::G3:
      j["gamma"] = to_json(d.gamma);
      break;
    case Family::GK:
    case Family::GKJL:
    case Family::GKL:
    case Family::GK0PSI:
    case Family::BergerGK:
      j["m"] = d.m;
      j["r"] = d.r;
      j["k_dim"] = d.k_basis.empty() ? 0 : d.k_dim();
      j["k_basis"] = mats_to_json(d.k_basis);
      if (d.real_form.n_minus_m) j["real_form"] = to_json(d.real_form);
      if (!d.psi_images.empty()) j["psi_images"] = mats_to_json(d.psi_images);
      break;
    default:
      break;
  }
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

/// k may be given as full matrices ("k_basis") or as {"a": z, "A": matrix} pairs ("k").
inline AlgebraDescriptor descriptor_from(const json& j) {
  AlgebraDescriptor d;
  if (!j.contains("family")) throw InputError("descriptor needs \"family\"");
  d.family = family_from_name(j.at("family").get<std::string>());
  if (d.family == Family::Unknown) throw InputError("unknown family " + j.at("family").dump());
  d.n = get_or(j, "n", 0);
  d.m = get_or(j, "m", d.n);
  d.r = get_or(j, "r", 0);
  if (j.contains("gamma")) d.gamma = cplx_from(j.at("gamma"));
  d.k_basis = mats_from(j.contains("k_basis") ? j.at("k_basis") : json());
  if (j.contains("k"))
    for (const auto& e : j.at("k")) {
      Mat A = e.contains("A") ? mat_from(e.at("A")) : Mat::Zero(d.n, d.n);
      d.k_basis.push_back(k_element(d.n, e.contains("a") ? cplx_from(e.at("a")) : cplx{}, A));
    }
  if (j.contains("real_form")) d.real_form = real_form_from(j.at("real_form"));
  d.psi_images = mats_from(j.contains("psi_images") ? j.at("psi_images") : json());
  d.note = get_or<std::string>(j, "note", "");
  return d;
}

// ---- potentials

inline json jet_terms_to_json(const Jet& f) {
  json a = json::array();
  const int d = f.num_coords();
  for (const auto& t : f.terms()) {
    std::vector<int> Ii(d), Jj(d);
    for (int c = 0; c < d; ++c) {
      Ii[c] = Jet::exponent(d, t.key, holo(c));
      Jj[c] = Jet::exponent(d, t.key, anti(c));
    }
    a.push_back(json{{"I", Ii}, {"J", Jj}, {"c", to_json(t.c)}});
  }
  return a;
}

/// Terms c z^I zbar^J; kept at the largest order the jet type allows, truncated when built.
inline Jet jet_from_terms(int d, const json& terms) {
  Jet f(d, Jet::kMaxOrder);
  for (const auto& t : terms) {
    auto Ii = t.at("I").get<std::vector<int>>();
    auto Jj = t.at("J").get<std::vector<int>>();
    f += Jet::monomial(d, Jet::kMaxOrder, Ii, Jj, cplx_from(t.at("c")));
  }
  f.set_real_valued(f.is_real());
  return f;
}

inline json to_json(const PotentialSpec& s) {
  json j{{"kind", potential_kind_name(s.kind)}, {"n", s.n}};
  if (s.a != cplx{}) j["a"] = to_json(s.a);
  if (s.b != cplx{}) j["b"] = to_json(s.b);
  if (!s.A.empty()) j["A"] = mats_to_json(s.A);
  if (!s.central.empty()) j["central"] = s.central;
  j["m"] = s.m;
  if (s.n0) j["n0"] = s.n0;
  if (s.r) j["r"] = s.r;
  if (s.N) j["N"] = s.N;
  if (s.B.size()) j["B"] = to_json(s.B);
  if (s.D.size()) j["D"] = to_json(s.D);
  if (s.printed_psi) j["printed_psi"] = true;
  if (!s.parts.empty()) {
    json p = json::array();
    for (const auto& x : s.parts) p.push_back(to_json(x));
    j["parts"] = p;
  }
  if (s.kind == PotentialKind::DIRECT) j["terms"] = jet_terms_to_json(s.direct);
  return j;
}

inline PotentialSpec potential_from(const json& j) {
  if (!j.contains("kind")) throw InputError("potential needs \"kind\"");
  PotentialSpec s;
  try {
    s.kind = potential_kind_from_name(j.at("kind").get<std::string>());
  } catch (const Error&) {
    throw InputError("unknown potential kind " + j.at("kind").dump());
  }
  s.n = get_or(j, "n", 0);
  if (j.contains("a")) s.a = cplx_from(j.at("a"));
  if (j.contains("b")) s.b = cplx_from(j.at("b"));
  s.A = mats_from(j.contains("A") ? j.at("A") : json());
  s.central = get_or<std::vector<bool>>(j, "central", {});
  s.m = get_or(j, "m", 0);
  s.n0 = get_or(j, "n0", 0);
  s.r = get_or(j, "r", 0);
  s.N = get_or(j, "N", 0);
  if (j.contains("B")) s.B = mat_from(j.at("B"));
  if (j.contains("D")) s.D = mat_from(j.at("D"));
  s.printed_psi = get_or(j, "printed_psi", false);
  if (j.contains("parts"))
    for (const auto& p : j.at("parts")) s.parts.push_back(potential_from(p));
  if (s.kind == PotentialKind::DIRECT) s.direct = jet_from_terms(s.n + 2, j.contains("terms") ? j.at("terms") : json::array());
  return s;
}

// ---- metric sources

/// What a --potential/--metric file may hold.
struct MetricSource {
  enum class Kind { potential, descriptor, small_dim, oriented_lines } kind = Kind::potential;
  PotentialSpec spec;
  AlgebraDescriptor descriptor;
  SmallDim small = SmallDim::g1;
  cplx gamma{1.0};
  LinesVariant lines = LinesVariant::hermitized;
};

/// A potential spec, {"descriptor": {...}}, {"small_dim": "g1"|..., "gamma": z} or {"oriented_lines": "literal"|"hermitized"}.
inline MetricSource metric_source_from(const json& j) {
  MetricSource m;
  if (j.contains("descriptor")) {
    m.kind = MetricSource::Kind::descriptor;
    m.descriptor = descriptor_from(j.at("descriptor"));
  } else if (j.contains("small_dim")) {
    m.kind = MetricSource::Kind::small_dim;
    try {
      m.small = small_dim_from_name(j.at("small_dim").get<std::string>());
    } catch (const Error&) {
      throw InputError("unknown small_dim " + j.at("small_dim").dump());
    }
    if (j.contains("gamma")) m.gamma = cplx_from(j.at("gamma"));
  } else if (j.contains("oriented_lines")) {
    m.kind = MetricSource::Kind::oriented_lines;
    auto v = j.at("oriented_lines").get<std::string>();
    if (v == "literal")
      m.lines = LinesVariant::literal;
    else if (v == "hermitized")
      m.lines = LinesVariant::hermitized;
    else
      throw InputError("oriented_lines must be literal or hermitized");
  } else {
    m.spec = potential_from(j);
  }
  return m;
}

// ---- reports

inline json to_json(const CurvatureMap& R) {
  json a = json::array();
  for (int i = 0; i < R.N; ++i)
    for (int k = 0; k < R.N; ++k)
      if (R(i, k).norm() > 0) a.push_back(json{{"i", i}, {"j", k}, {"value", to_json(R(i, k))}});
  return json{{"N", R.N}, {"nonzero", a}};
}

inline json to_json(const SymspaceReport& r) {
  json j{{"jacobi", r.jacobi},
         {"jacobi_residual", r.jacobi_residual},
         {"g_equals_RmM", r.g_equals_RmM},
         {"ricci_degenerate", r.ricci_degenerate},
         {"calabi_yau", r.calabi_yau},
         {"ricci", to_json(r.ricci)},
         {"holonomy", to_json(r.holonomy)},
         {"irreducible_note", r.irreducible_note}};
  j["consistency"] = json{{"lemma", r.consistency.lemma},
                          {"bianchi", r.consistency.bianchi},
                          {"invariance", r.consistency.invariance},
                          {"outside_g", r.consistency.outside_g},
                          {"fit_residual", r.consistency.fit_residual},
                          {"consistent", r.consistency.consistent}};
  return j;
}

/// Stable number formatting: shortest round-trip doubles, keys in insertion order.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// Write to a sibling temp file then rename over the target.
inline void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace lkh::io
