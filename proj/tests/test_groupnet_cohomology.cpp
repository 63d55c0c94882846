#include <catch_amalgamated.hpp>

#include <numeric>

#include "entronet/catalog.hpp"
#include "entronet/random.hpp"

using namespace entronet;

namespace {

GLayer gl(GKind k, std::size_t pos) {
  GLayer L;
  L.kind = k;
  L.pos = pos;
  return L;
}

GLayer cup(std::size_t gap, int s, Handed h) {
  GLayer L = gl(GKind::Cup, gap);
  L.s = s;
  L.hand = h;
  return L;
}

GLayer split(std::size_t pos, int s, int t) {
  GLayer L = gl(GKind::Split, pos);
  L.s = s;
  L.t = t;
  return L;
}

GLayer merge2(std::size_t pos, int e) {
  GLayer L = gl(GKind::Merge2, pos);
  L.e1 = e;
  return L;
}

GLayer dot(std::size_t gap, Elem u) {
  GLayer L = gl(GKind::Dot, gap);
  L.dot = std::move(u);
  return L;
}

Cochain1 identity_cocycle(const GModule& U) {
  Cochain1 f;
  for (int s = 0; s < U.group().order(); ++s) f.values.push_back({s});
  return f;
}

GModule s3_module() { return affine_module(Group::aff1modp(3), 3); }

}  // namespace

TEST_CASE("group tables are validated", "[groupnet]") {
  CHECK_THROWS_AS(Group(std::vector<std::vector<int>>{}), GroupError);
  CHECK_THROWS_AS(Group({{0, 1}, {1, 1}}), GroupError);
  CHECK_THROWS_AS(Group({{0, 1}, {1}}), GroupError);
  CHECK_THROWS_AS(Group({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), GroupError);
  CHECK_THROWS_AS(Group::cyclic(0), GroupError);
  CHECK_THROWS_AS(Group::aff1modp(4), GroupError);

  Group s3 = Group::aff1modp(3);
  CHECK(s3.order() == 6);
  CHECK_FALSE(s3.is_abelian());
  CHECK(order_profile(s3) == std::map<int, int>{{1, 1}, {2, 3}, {3, 2}});
  Group v4 = Group::product(Group::cyclic(2), Group::cyclic(2));
  CHECK(v4.is_abelian());
  CHECK(order_profile(v4) == std::map<int, int>{{1, 1}, {2, 3}});
  CHECK(v4.name(3) == "(1,1)");
}

TEST_CASE("modules are validated", "[groupnet]") {
  Group s3 = Group::aff1modp(3);
  CHECK_THROWS_AS(sign_module(s3, {3}), GroupError);
  CHECK_THROWS_AS(GModule(Group::cyclic(2), {}), GroupError);
  CHECK_THROWS_AS(GModule(Group::cyclic(2), {3}, {{{1}}}), GroupError);
  CHECK_THROWS_AS(GModule(Group::cyclic(2), {4}, {{{1}}, {{2}}}), GroupError);
  GModule U = sign_module(Group::cyclic(4), {5});
  CHECK(U.act(1, {2}) == Elem{3});
  CHECK(U.act(2, {2}) == Elem{2});
  CHECK_FALSE(U.trivial_action());
}

TEST_CASE("winding is the ordered product of effective labels", "[groupnet]") {
  GModule U = s3_module();
  const Group& G = U.group();
  std::vector<GStrand> z{{1, 1}, {3, -1}, {4, 1}};
  CHECK(g_gap_winding(G, z, 0) == 0);
  CHECK(g_gap_winding(G, z, 1) == 1);
  CHECK(g_gap_winding(G, z, 3) == G.mul(G.mul(1, G.inv(3)), 4));
  GDiagram d{z, {}};
  CHECK(g_winding(U, d, 0, 2) == G.mul(1, G.inv(3)));
  CHECK_THROWS_AS(g_winding(U, d, 0, 4), std::out_of_range);
}

TEST_CASE("network validation", "[groupnet]") {
  GModule U(Group::cyclic(4), {4});
  CHECK_THROWS_AS(g_validate(U, GDiagram{{{1, 1}, {1, -1}}, {gl(GKind::Merge, 0)}}), GValidationError);
  CHECK_THROWS_AS(g_validate(U, GDiagram{{{1, 1}}, {split(0, 2, 2)}}), GValidationError);
  CHECK_THROWS_AS(g_validate(U, GDiagram{{{1, 1}, {2, -1}}, {gl(GKind::Cap, 0)}}), GValidationError);
  CHECK_THROWS_AS(g_validate(U, GDiagram{{}, {cup(0, 9, Handed::PM)}}), GValidationError);
  CHECK_THROWS_AS(g_validate(U, GDiagram{{}, {dot(0, {1, 1})}}), GValidationError);
  CHECK(g_validate(U, GDiagram{{{1, 1}, {3, -1}}, {merge2(0, 1)}}) == std::vector<GStrand>{{2, 1}});
  CHECK(expand(U, GDiagram{{{1, 1}, {3, -1}}, {merge2(0, 1)}}).layers.size() == 2);
}

TEST_CASE("dot evaluation twists by the winding", "[groupnet]") {
  GModule U = s3_module();
  GDiagram nested{{}, {cup(0, 3, Handed::PM), cup(1, 1, Handed::MP), dot(2, {1}), gl(GKind::Cap, 1), gl(GKind::Cap, 0)}};
  CHECK(is_closed(U, nested));
  CHECK(eval_alpha_U(U, nested) == Elem{2});
  GModule Z4(Group::cyclic(4), {4});
  GDiagram dotted{{}, {cup(0, 1, Handed::PM), dot(1, {1}), gl(GKind::Cap, 0)}};
  CHECK(eval_alpha_U(Z4, dotted) == Elem{1});
}

TEST_CASE("one-cocycle on circles", "[groupnet]") {
  GModule U(Group::cyclic(5), {5});
  Cochain1 f = identity_cocycle(U);
  REQUIRE(verify_cocycle1(U, f));
  for (int s = 0; s < 5; ++s) {
    GDiagram out{{}, {cup(0, s, Handed::PM), gl(GKind::Cap, 0)}};
    GDiagram in{{}, {cup(0, s, Handed::MP), gl(GKind::Cap, 0)}};
    CHECK(eval_alpha_f(U, out, f) == Elem{s});
    CHECK(eval_alpha_f(U, in, f) == Elem{(5 - s) % 5});
  }
  Cochain1 bad = f;
  bad.values[1] = {3};
  CHECK_THROWS_AS(eval_alpha_f(U, GDiagram{}, bad), CocycleError);
}

TEST_CASE("one-cocycle on nested circles, snakes and double flips", "[groupnet][property]") {
  GModule U = s3_module();
  const Group& G = U.group();
  HSolver S(U, 1);
  Rng r(47);
  for (int t = 0; t < 20; ++t) {
    Cochain1 f = random_cocycle1(r, U, S);
    REQUIRE(verify_cocycle1(U, f));
    for (int s = 0; s < 6; ++s) {
      GDiagram out{{}, {cup(0, s, Handed::PM), gl(GKind::Cap, 0)}};
      GDiagram in{{}, {cup(0, s, Handed::MP), gl(GKind::Cap, 0)}};
      CHECK(eval_alpha_f(U, out, f) == f(s));
      CHECK(eval_alpha_f(U, in, f) == f(G.inv(s)));
      for (int u = 0; u < 6; ++u) {
        GDiagram conc{{}, {cup(0, s, Handed::PM), cup(1, u, Handed::PM), gl(GKind::Cap, 1), gl(GKind::Cap, 0)}};
        CHECK(eval_alpha_f(U, conc, f) == U.add(f(s), U.act(s, f(u))));
      }
      GDiagram snake_r{{{s, 1}}, {cup(1, s, Handed::MP), gl(GKind::Cap, 0)}};
      GDiagram snake_l{{{s, 1}}, {cup(0, s, Handed::PM), gl(GKind::Cap, 1)}};
      GDiagram flips{{{s, 1}}, {gl(GKind::Flip, 0), gl(GKind::Flip, 0)}};
      CHECK(g_validate(U, snake_r) == snake_r.source);
      CHECK(g_validate(U, snake_l) == snake_l.source);
      CHECK(U.is_zero(eval_alpha_f(U, snake_r, f)));
      CHECK(U.is_zero(eval_alpha_f(U, snake_l, f)));
      CHECK(U.is_zero(eval_alpha_f(U, flips, f)));
    }
  }
}

TEST_CASE("two-cocycle on vertices and arcs", "[groupnet]") {
  auto [U, c] = carry(4);
  GDiagram fork{{{2, 1}, {2, 1}}, {gl(GKind::Merge, 0)}};
  CHECK(eval_alpha_c(U, fork, c) == Elem{1});
  GDiagram arc{{{1, 1}, {1, -1}}, {gl(GKind::Cap, 0)}};
  CHECK(eval_alpha_c(U, arc, c) == c(1, 3));
  GDiagram theta{{}, {cup(0, 2, Handed::PM), split(0, 1, 1), gl(GKind::Merge, 0), gl(GKind::Cap, 0)}};
  CHECK(U.is_zero(eval_alpha_c(U, theta, c)));
  Cochain2 bad = c;
  bad.at(0, 1) = {1};
  CHECK_THROWS_AS(eval_alpha_c(U, theta, bad), CocycleError);
}

TEST_CASE("normalized cocycle identities", "[groupnet][property]") {
  GModule U = s3_module();
  const Group& G = U.group();
  HSolver S(U, 2);
  Rng r(53);
  for (int t = 0; t < 20; ++t) {
    Cochain2 c = random_cocycle2(r, U, S);
    REQUIRE(verify_cocycle2(U, c));
    for (int s = 0; s < 6; ++s) {
      CHECK(c(s, G.inv(s)) == U.act(s, c(G.inv(s), s)));
      for (int u = 0; u < 6; ++u) {
        GDiagram turned{{{u, 1}}, {cup(0, s, Handed::PM), merge2(1, 1)}};
        GDiagram direct{{{u, 1}}, {split(0, s, G.mul(G.inv(s), u))}};
        CHECK(g_validate(U, turned) == g_validate(U, direct));
        CHECK(eval_alpha_c(U, turned, c) == eval_alpha_c(U, direct, c));
      }
    }
  }
}

TEST_CASE("closed networks evaluate to zero", "[groupnet][property]") {
  Rng r(59);
  for (GModule U : {GModule(Group::cyclic(6), {6}), s3_module(), sign_module(Group::cyclic(4), {3})}) {
    HSolver S(U, 2);
    for (int t = 0; t < 150; ++t) {
      Cochain2 c = random_cocycle2(r, U, S);
      GDiagram d = random_closed_gdiagram(r, U);
      REQUIRE(is_closed(U, d));
      CHECK(U.is_zero(eval_alpha_c(U, d, c)));
    }
  }
}

TEST_CASE("central extensions", "[groupnet]") {
  auto [U, c] = carry(10);
  Group E = central_extension(U, c);
  CHECK(E.order() == 100);
  CHECK(E.mul(70, 50) == 21);
  CHECK(E.name(21) == "(1,2)");
  CHECK(order_profile(E).count(100) == 1);

  auto [U4, c4] = carry(4);
  Rng r(61);
  auto base = order_profile(central_extension(U4, c4));
  for (int t = 0; t < 20; ++t) {
    Cochain1 b = zero_cochain1(U4);
    for (int s = 1; s < 4; ++s) b.values[s] = {r.uniform(0, 3)};
    Cochain2 shifted = shift_by_coboundary(U4, c4, b);
    CHECK(verify_cocycle2(U4, shifted));
    CHECK(order_profile(central_extension(U4, shifted)) == base);
  }
  Cochain1 b = zero_cochain1(U4);
  b.values[0] = {1};
  CHECK_THROWS_AS(coboundary2(U4, b), CocycleError);
  CHECK(order_profile(central_extension(U4, zero_cochain2(U4))) == std::map<int, int>{{1, 1}, {2, 3}, {4, 12}});
}

TEST_CASE("second cohomology of cyclic groups", "[cohomology]") {
  for (int n = 1; n <= 7; ++n)
    for (int m = 1; m <= 7; ++m) {
      HSolver S(GModule(Group::cyclic(n), {m}), 2);
      CHECK(S.order() == std::gcd(n, m));
    }
  HSolver S(GModule(Group::cyclic(4), {2, 4}), 2);
  CHECK(S.invariants() == std::vector<long long>{2, 4});
}

TEST_CASE("first cohomology", "[cohomology]") {
  CHECK(HSolver(GModule(Group::cyclic(6), {4}), 1).order() == 2);
  CHECK(HSolver(GModule(Group::cyclic(4), {2, 4}), 1).invariants() == std::vector<long long>{2, 4});
  CHECK(HSolver(s3_module(), 1).order() == 3);
  CHECK(HSolver(sign_module(Group::cyclic(2), {3}), 1).order() == 1);
  CHECK(HSolver(GModule(Group::cyclic(4), {4}), 1).is_coboundary(zero_cochain1(GModule(Group::cyclic(4), {4}))));
}

TEST_CASE("solver agrees with enumeration", "[cohomology]") {
  CHECK(cross_check(GModule(Group::cyclic(4), {2}), 2).ok());
  CHECK(cross_check(GModule(Group::product(Group::cyclic(2), Group::cyclic(2)), {2}), 2).ok());
  CHECK(cross_check(sign_module(Group::cyclic(2), {3}), 2).ok());
  CHECK(cross_check(s3_module(), 1).ok());
  CHECK(cross_check(GModule(Group::cyclic(6), {2, 3}), 1).ok());
  CHECK_THROWS_AS(Enumerator(s3_module(), 2), SolverError);
}

TEST_CASE("solver limits", "[cohomology]") {
  CHECK_THROWS_AS(HSolver(GModule(Group::cyclic(65), {2}), 2), SolverError);
  CHECK_THROWS_AS(HSolver(GModule(Group::cyclic(2), {2}), 3), SolverError);
  CHECK_NOTHROW(HSolver(GModule(Group::cyclic(64), {2}), 1));
}

TEST_CASE("solver representatives are cocycles of the stated order", "[cohomology][property]") {
  for (int n = 2; n <= 6; ++n) {
    GModule U(Group::cyclic(n), {n});
    HSolver S(U, 2);
    REQUIRE(S.reps2().size() == 1);
    const Cochain2& rep = S.reps2()[0];
    CHECK(verify_cocycle2(U, rep));
    CHECK_FALSE(S.is_coboundary(rep));
    CHECK(S.is_coboundary(scale_cochain(U, n, rep)));
    CHECK_FALSE(S.is_coboundary(carry(n).cocycle));
  }
}

TEST_CASE("carry and witt cocycles", "[catalog]") {
  auto [U2, c2] = carry(2);
  CHECK(c2(1, 1) == Elem{1});
  CHECK(c2(0, 1) == Elem{0});
  CHECK(verify_cocycle2(U2, c2));
  CHECK_THROWS_AS(carry(1), CatalogError);

  auto [U3, w3] = witt(3);
  CHECK(w3(1, 1) == Elem{2});
  CHECK(w3(1, 2) == Elem{0});
  CHECK(verify_cocycle2(U3, w3));
  CHECK_FALSE(HSolver(U3, 2).is_coboundary(w3));
  CHECK(witt(2).cocycle(1, 1) == Elem{1});
  CHECK_THROWS_AS(witt(9), CatalogError);
}

TEST_CASE("factorial cocycles on the additive monoid", "[catalog]") {
  MonoidCocycle b = binomial(6);
  CHECK(b(2, 3) == 10);
  CHECK(b(5, 1) == 6);
  CHECK(b(0, 4) == 1);
  CHECK(verify_monoid_cocycle(b));
  MonoidCocycle fib = binomial(6, "fibonacci");
  CHECK(fib(2, 3) == 15);
  CHECK(verify_monoid_cocycle(fib));
  MonoidCocycle gauss = binomial(6, "2");
  CHECK(gauss(2, 3) == 155);
  CHECK(verify_monoid_cocycle(gauss));
  CHECK(verify_monoid_cocycle(binomial(5, "-1/3")));
}

TEST_CASE("pointwise mutual information", "[catalog]") {
  ProbSpace s{{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}};
  CHECK(pmi(s, 0b0011, 0b0101).is_zero());
  CHECK(pmi(s, 0b0011, 0b0001).log_str() == "log(2)");
  CHECK_THROWS_AS(pmi(s, 0b0001, 0b0010), CatalogError);
  PmiReport rep = verify_pmi(ProbSpace{{Rational(1, 2), Rational(1, 3), Rational(1, 6)}});
  CHECK(rep.exact_ok);
  CHECK(rep.triples > 0);
  CHECK(rep.max_residual < 1e-12);
  CHECK_THROWS_AS(verify_pmi(ProbSpace{{Rational(1, 2)}}), CatalogError);
}
