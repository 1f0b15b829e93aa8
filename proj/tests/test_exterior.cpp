#include <doctest.h>

#include "mae/ma.hpp"
#include "support.hpp"

using namespace mae;
using namespace mae::test;

namespace {

struct Chart {
  ContextPtr ctx = Context::create();
  std::vector<int> ids;
  std::vector<Expr> atoms;
  BasisPtr b;
  Chart() {
    for (auto n : {"x", "y", "z", "p", "q"}) {
      ids.push_back(ctx->coordinate(n));
      atoms.push_back(Expr::atom(ctx, ids.back()));
    }
    b = make_chart(ctx, ids);
  }
  Form dx(int i) const { return Form::basis1(b, i); }
};

int sign(int k) { return k % 2 ? -1 : 1; }

}  // namespace

TEST_CASE("wedge signs") {
  Chart c;
  Form a = wedge(c.dx(0), c.dx(1));
  CHECK(a == -wedge(c.dx(1), c.dx(0)));
  CHECK(wedge(c.dx(2), c.dx(2)).zero());
  CHECK(wedge(wedge(c.dx(2), c.dx(0)), c.dx(1)).coeff({0, 1, 2}) == Expr(1));
  CHECK(wedge(c.dx(1), wedge(c.dx(0), c.dx(2))).coeff({0, 1, 2}) == Expr(-1));
}

TEST_CASE("graded commutativity, Leibniz and d^2 on random chart forms") {
  Chart c;
  std::mt19937_64 g(11);
  int n = 0;
  for (int it = 0; it < 240; ++it) {
    int p = int(rint(g, 0, 3)), q = int(rint(g, 0, 5 - p));
    Form a = p ? rand_form(g, c.b, p, c.atoms) : Form::scalar(c.b, rand_poly(g, c.atoms));
    Form b = q ? rand_form(g, c.b, q, c.atoms) : Form::scalar(c.b, rand_poly(g, c.atoms));
    REQUIRE(wedge(a, b) == wedge(b, a) * Expr(sign(p * q)));
    if (p + q < 5) REQUIRE(is_zero(d(wedge(a, b)) - wedge(d(a), b) - wedge(a, d(b)) * Expr(sign(p))));
    if (p < 4) REQUIRE(is_zero(d(d(a))));
    ++n;
  }
  CHECK(n >= 200);
}

TEST_CASE("d^2 = 0 on an involutive abstract frame") {
  Document doc = load_document(data("table1.toml"));
  const BasisPtr& b = doc.frame->basis;
  std::vector<Expr> aux;
  for (int a : b->aux) aux.push_back(Expr::atom(b->ctx, a));
  std::mt19937_64 g(12);
  for (int it = 0; it < 40; ++it) {
    Form f = Form::scalar(b, rand_rat(g, aux));
    REQUIRE(is_zero(d(d(f))));
    Form a = rand_form(g, b, 1, aux);
    REQUIRE(is_zero(d(d(a))));
  }
}

TEST_CASE("reduce_mod") {
  Chart c;
  Expr p = c.atoms[3], q = c.atoms[4];
  Form theta = c.dx(2) - c.dx(0) * p - c.dx(1) * q;
  std::mt19937_64 g(13);
  for (int it = 0; it < 50; ++it) {
    Form h = rand_form(g, c.b, 1, c.atoms);
    Form r = rand_form(g, c.b, 2, c.atoms);
    Form x2 = wedge(theta, h) + r;
    Form red = reduce_mod(x2, {theta});
    REQUIRE(is_zero(reduce_mod(red, {theta}) - red));  // idempotent
    REQUIRE(is_zero(reduce_mod(x2 - red, {theta})));    // difference lies in the ideal
    REQUIRE(is_zero(reduce_mod(wedge(theta, h), {theta})));
  }
}

TEST_CASE("derived flags of simple Pfaffian systems") {
  Chart c;
  Expr y = c.atoms[1], p = c.atoms[3];
  // contact form on (x, y, z): not integrable at all
  Form th = c.dx(2) - c.dx(0) * y;
  CHECK(derived_flag({th}) == std::vector<int>{1, 0});
  // {dz - y dx, dy} is Frobenius
  CHECK(derived_flag({th, c.dx(1)}) == std::vector<int>{2});
  // Engel-type chain dz - p dx, dp - y dx
  Form a = c.dx(2) - c.dx(0) * p, b = c.dx(3) - c.dx(0) * y;
  auto fl = derived_flag({a, b});
  CHECK(fl == std::vector<int>{2, 1, 0});
  Pfaffian d1 = derived_system({a, b});
  CHECK(d1.rank == 1);
  // span(output) within span(input)
  for (auto& gen : d1.gens) CHECK(is_zero(reduce_mod(gen, {a, b})));
}

TEST_CASE("K = -1 characteristic systems: derived flag 3, 2, 0") {
  Document doc = load_document(data("k_minus_1.toml"));
  AdaptedCoframe cf = adapted_coframe(*doc.ma);
  auto w = [&](int i) { return Form::basis1(cf.omega, i); };
  CHECK(derived_flag({w(0), w(1), w(2)}) == std::vector<int>{3, 2, 0});
  CHECK(derived_flag({w(0), w(3), w(4)}) == std::vector<int>{3, 2, 0});
}

TEST_CASE("primitives satisfy their defining equations") {
  Chart c;
  std::mt19937_64 g(14);
  for (int it = 0; it < 30; ++it) {
    Expr f = rand_poly(g, c.atoms, 3, 2);
    Form df = dfun(c.b, f);
    Expr F = potential(df);
    REQUIRE(is_zero(dfun(c.b, F) - df));
    Form a = rand_form(g, c.b, 1 + it % 3, c.atoms);
    Form da = d(a);
    if (da.zero()) continue;
    Form prim = poincare_primitive(da);
    REQUIRE(is_zero(d(prim) - da));
  }
  Form notclosed = c.dx(0) * c.atoms[1];
  CHECK_THROWS_AS(poincare_primitive(notclosed), NotClosed);
}

TEST_CASE("coframe change keeps structure equations consistent") {
  Chart c;
  Expr p = c.atoms[3], q = c.atoms[4];
  Mat P(5, Row(5, Expr(0)));
  P[0] = {-p, -q, Expr(1), Expr(0), Expr(0)};  // dz - p dx - q dy
  P[1][0] = Expr(1);
  P[2][3] = Expr(1);
  P[3][1] = Expr(1);
  P[4][4] = Expr(1);
  BasisPtr w = make_coframe(c.b, P, {"t", "a", "b", "c", "e"});
  Form dt(w, 2);
  for (auto& [m, k] : w->dw[0]) dt.add_term(m, k);
  CHECK(is_zero(dt - wedge(Form::basis1(w, 1), Form::basis1(w, 2)) - wedge(Form::basis1(w, 3), Form::basis1(w, 4))));
  std::mt19937_64 g(15);
  for (int it = 0; it < 20; ++it) {
    Form a = rand_form(g, c.b, 2, c.atoms);
    Form there = change_basis(a, w, Direction::Forward);
    Form back = change_basis(there, w, Direction::Back);
    REQUIRE(is_zero(back - a));
    REQUIRE(is_zero(change_basis(d(a), w, Direction::Forward) - d(there)));
  }
}
