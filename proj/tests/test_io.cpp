#include <gtest/gtest.h>

#include "lkh/io.hpp"

using namespace lkh;
using io::json;

TEST(Io, MatrixRoundTrip) {
  Mat m(2, 3);
  m << cplx(1, 2), 0.5, cplx(0, -3), 1e-17, cplx(-2, 0.25), 7;
  json j = io::to_json(m);
  EXPECT_EQ(j[0][0], json::array({1.0, 2.0}));
  EXPECT_EQ((io::mat_from(j) - m).norm(), 0.0);
  EXPECT_EQ((io::mat_from(json::parse(j.dump())) - m).norm(), 0.0);
  EXPECT_THROW(io::mat_from(json::parse("[[[1,0]],[[1,0],[2,0]]]")), io::InputError);
  EXPECT_EQ(io::cplx_from(json(3.5)), cplx(3.5, 0));
}

TEST(Io, DescriptorRoundTrip) {
  AlgebraDescriptor d;
  d.family = Family::GKL;
  d.n = 3;
  d.m = 1;
  d.real_form = RealFormData::from_lambdas(2, {0.5});
  d.k_basis = {k_element(3, 0.0, I * Mat::Identity(1, 1))};
  json j = io::to_json(d);
  AlgebraDescriptor e = io::descriptor_from(json::parse(j.dump()));
  EXPECT_EQ(e.family, d.family);
  EXPECT_EQ(e.m, 1);
  EXPECT_TRUE(same_span(build_family(e), build_family(d)));
  EXPECT_EQ(family_dimension(e), family_dimension(d));
}

TEST(Io, PotentialRoundTrip) {
  PotentialSpec s;
  s.kind = PotentialKind::F1;
  s.n = 1;
  s.a = I;
  s.A = {I * Mat::Identity(1, 1)};
  PotentialSpec t = io::potential_from(json::parse(io::to_json(s).dump()));
  EXPECT_EQ((build_potential(s, 8) - build_potential(t, 8)).max_abs(), 0.0);

  // DIRECT: u conj v + v conj u + |u|^4 given as terms
  json dj = json::parse(R"({"kind":"DIRECT","n":0,"terms":[
    {"I":[0,1],"J":[1,0],"c":1},{"I":[1,0],"J":[0,1],"c":1},{"I":[0,2],"J":[0,2],"c":[1,0]}]})");
  PotentialSpec ds = io::potential_from(dj);
  Jet f = build_potential(ds, 6);
  EXPECT_TRUE(f.is_real());
  std::array<int, 2> I2{0, 2}, J2{0, 2};
  EXPECT_EQ(f.coeff(I2, J2), cplx(1.0));
  PotentialSpec back = io::potential_from(json::parse(io::to_json(ds).dump()));
  EXPECT_EQ((build_potential(back, 6) - f).max_abs(), 0.0);
  EXPECT_THROW(io::potential_from(json::parse(R"({"kind":"NOPE"})")), io::InputError);
}

TEST(Io, MetricSources) {
  auto s = io::metric_source_from(json::parse(R"({"small_dim":"g3gamma","gamma":[0,1]})"));
  EXPECT_EQ(s.kind, io::MetricSource::Kind::small_dim);
  EXPECT_EQ(s.gamma, I);
  auto l = io::metric_source_from(json::parse(R"({"oriented_lines":"literal"})"));
  EXPECT_EQ(l.lines, LinesVariant::literal);
  EXPECT_THROW(io::metric_source_from(json::parse(R"({"oriented_lines":"other"})")), io::InputError);
}

TEST(Io, DigestAndAtomicWrite) {
  EXPECT_EQ(io::conventions_digest(), io::conventions_digest());
  EXPECT_EQ(io::conventions_digest().size(), 16u);
  auto path = (std::filesystem::temp_directory_path() / "lkh_io_test.json").string();
  io::write_atomic(path, "{}\n");
  io::write_atomic(path, "{\"a\": 1}\n");
  EXPECT_EQ(io::read_file(path)["a"], 1);
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}
