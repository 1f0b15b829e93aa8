#include <doctest.h>

#include "mae/ma.hpp"
#include "oracles.hpp"

using namespace mae;
using namespace mae::test;

namespace {

struct Loaded {
  Document doc;
  AdaptedCoframe cf;
  InvariantReport r;
  explicit Loaded(const std::string& name) : doc(load_document(data(name))), cf(adapted_coframe(*doc.ma)), r(invariants(cf)) {}
  Expr P(const std::string& s) const { return parse_expr(s, doc.ctx); }
};

bool all_zero(const Mat2& m) { return is_zero(m[0][0]) && is_zero(m[0][1]) && is_zero(m[1][0]) && is_zero(m[1][1]); }

}  // namespace

TEST_CASE("K = -1 and K = 1 invariants as printed") {
  Loaded m("k_minus_1.toml");
  CHECK(all_zero(m.r.S2));
  CHECK(m.r.detS1 == m.P("-(p^2+q^2+1)/16"));
  CHECK(m.r.type == "negative");
  Loaded k("k_plus_1.toml");
  CHECK(all_zero(k.r.S2));
  CHECK(k.r.detS1 == k.P("(p^2-q^2+1)/16"));
  CHECK(k.r.type == "positive");
  CHECK(k.r.sign.tier == "assumption");
}

TEST_CASE("wave and f-Gordon") {
  Loaded w("wave.toml");
  CHECK(w.cf.transform == 4);
  CHECK(all_zero(w.r.S1));
  CHECK(all_zero(w.r.S2));
  CHECK(w.r.wave);
  Loaded f("f_gordon.toml");
  CHECK(all_zero(f.r.S2));
  CHECK(is_zero(f.r.detS1));
  CHECK_FALSE(all_zero(f.r.S1));
  CHECK(f.r.type == "degenerate");
  Loaded s("sine_gordon.toml");
  CHECK(all_zero(s.r.S2));
  CHECK(s.r.type == "degenerate");
}

TEST_CASE("Goursat equation is degenerate Euler-Lagrange") {
  Loaded g("goursat.toml");
  CHECK(all_zero(g.r.S2));
  CHECK(g.r.type == "degenerate");
}

TEST_CASE("ABCDE system") {
  Loaded a("abcde.toml");
  Normalized n = normalize_E(*a.doc.ma);
  CHECK(n.disc == a.P("8*q^4*(2*p^2*z^2+2*p^2+z*q)*(z^2+1)^4"));
  CHECK(all_zero(a.r.S2));
  CHECK(a.r.detS1 ==
        a.P("z^2*q^4*(4*p^2*z^5-16*p^2*z^3+q*z^4-20*p^2*z-8*q*z^2-q)^2/(32*(2*p^2*z^2+2*p^2+q*z)^3*(z^2+1)^6)"));
  CHECK(a.r.type == "positive");
}

TEST_CASE("not hyperbolic or not Monge-Ampere") {
  Document d = load_document(data("not_hyperbolic.toml"));
  CHECK_THROWS_AS(normalize_E(*d.ma), NotMongeAmpere);
  Document z = parse_document("[monge_ampere]\nA = 0\n");
  CHECK_THROWS_AS(normalize_E(*z.ma), NotMongeAmpere);
}

TEST_CASE("linear equations: Euler-Lagrange iff a_x = b_y") {
  // z_xy = a z_x + b z_y + c z has equal Laplace invariants exactly when a_x = b_y.
  std::mt19937_64 g(21);
  for (int it = 0; it < 16; ++it) {
    Document d = parse_document("[monge_ampere]\nrhs = \"0\"\n");
    MASystem s = *d.ma;
    Expr x = Expr::atom(s.ctx, s.x), y = Expr::atom(s.ctx, s.y), z = Expr::atom(s.ctx, s.z);
    Expr p = Expr::atom(s.ctx, s.p), q = Expr::atom(s.ctx, s.q);
    Expr a, b;
    if (it % 2 == 0) {
      Expr h = rand_poly(g, {x, y}, 3, 2);
      a = diff(h, s.y);
      b = diff(h, s.x);
    } else {
      a = rand_poly(g, {x, y}, 2, 2);
      b = rand_poly(g, {x, y}, 2, 2);
    }
    Expr c(rint(g, -2, 2));
    s.E = -(a * p + b * q + c * z);
    bool el_oracle = is_zero(diff(a, s.x) - diff(b, s.y));
    InvariantReport r = invariants(s);
    INFO("a = " << a.str() << ", b = " << b.str());
    REQUIRE(r.euler_lagrange == el_oracle);
  }
}

TEST_CASE("gauge equivariance of S1 and S2") {
  std::mt19937_64 g(22);
  int gauges = 0;
  for (auto name : {"k_minus_1.toml", "k_plus_1.toml", "f_gordon.toml", "sine_gordon.toml"}) {
    Loaded m(name);
    auto V = extract_V(m.cf.omega, {0, 1, 2, 3, 4});
    const MASystem& s = m.cf.sys;
    std::vector<Expr> vars{Expr::atom(s.ctx, s.p), Expr::atom(s.ctx, s.q), Expr::atom(s.ctx, s.z)};
    SignVerdict base = classify_sign(m.r.detS1);
    for (int it = 0; it < 30; ++it) {
      GaugeElement e = random_gauge(g, vars);
      BasisPtr nb = gauge_transform(m.cf.omega, e);
      REQUIRE(is_zero(adaptation_residual(nb)));
      auto W = extract_V(nb, {0, 1, 2, 3, 4});
      REQUIRE(equivariant(V, W, e));
      InvariantReport r2 = report_from_V(W);
      REQUIRE(r2.euler_lagrange == m.r.euler_lagrange);
      REQUIRE(is_zero(r2.detS1) == is_zero(m.r.detS1));
      // det scales by a^2 det A^-1 det B = a^2
      REQUIRE(is_zero(r2.detS1 - e.a * e.a * m.r.detS1));
      if (base.type != SignType::Degenerate) REQUIRE(classify_sign(r2.detS1).type == base.type);
      ++gauges;
    }
    GaugeElement J;
    J.swap = true;
    auto X = extract_V(gauge_transform(m.cf.omega, J), {0, 1, 2, 3, 4});
    CHECK(swap_rule(V, X));
  }
  CHECK(gauges >= 100);
}

TEST_CASE("non Euler-Lagrange system has S2 != 0") {
  Document d = parse_document("[monge_ampere]\nrhs = \"p^2\"\n");
  InvariantReport r = invariants(*d.ma);
  CHECK_FALSE(r.euler_lagrange);
  CHECK(r.type == "not-EL");
}

TEST_CASE("sign classification tiers") {
  auto ctx = Context::create();
  for (auto n : {"x", "y"}) ctx->coordinate(n);
  CHECK(classify_sign(P(ctx, "0")).tier == "zero");
  SignVerdict f = classify_sign(P(ctx, "-(x^2+y^2+1)/16"));
  CHECK(f.type == SignType::Negative);
  CHECK(f.tier == "factorization");
  SignVerdict s = classify_sign(P(ctx, "x*y"));
  CHECK(s.tier == "sampled");
  CHECK(s.type == SignType::Indefinite);
  CHECK(s.samples == 32);
  ctx->add_assumption(P(ctx, "1+x-y^2"));
  SignVerdict a = classify_sign(P(ctx, "3*(1+x-y^2)"));
  CHECK(a.type == SignType::Positive);
  CHECK(a.tier == "assumption");
  CHECK(classify_sign(P(ctx, "x*y"), 7, 5).samples == 5);
}
