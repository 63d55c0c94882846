#include <catch_amalgamated.hpp>

#include "entronet/rewrite.hpp"
#include "entronet/selftest.hpp"

using namespace entronet;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

ValidationError::Code code_of(const Diagram& d, std::size_t* layer = nullptr) {
  try {
    validate(d);
  } catch (const ValidationError& e) {
    if (layer) *layer = e.layer;
    return e.code;
  }
  FAIL("diagram validated");
  return ValidationError::Code::BoundaryMismatch;
}

Diagram with_mode(Diagram d, Mode m) {
  d.mode = m;
  return d;
}

}  // namespace

TEST_CASE("object weights", "[affine]") {
  CHECK(object_weight(DiagObject{{Xp(3), Yp(Q(1, 2))}}) == AffWeight{3, Q(1, 2)});
  CHECK(object_weight(DiagObject{{Xp(Q(1, 2)), Yp(3), Xp(Q(2, 3)), Yp(5)}}) == AffWeight{Q(5, 2), 15});
  CHECK(object_weight(DiagObject{{Yp(2), Xm(3), Ym(4)}}) == AffWeight{-6, Q(1, 2)});
  CHECK(object_weight(DiagObject{}) == AffWeight{0, 1});
  CHECK(DiagObject{{Xp(Q(1, 2)), Ym(3)}}.str() == "X+(1/2) Y-(3)");
}

TEST_CASE("object weight is a monoid map", "[affine][property]") {
  Rng r(17);
  for (int t = 0; t < 300; ++t) {
    DiagObject a = random_object(r, 5), b = random_object(r, 5);
    CHECK(object_weight(tensor(a, b)) == object_weight(a) * object_weight(b));
  }
}

TEST_CASE("winding between strands", "[affine]") {
  Diagram d{DiagObject{{Yp(2), Xp(1), Ym(3), Xp(1)}}, {}, Mode::J};
  CHECK(winding(d, 0, 0) == 1);
  CHECK(winding(d, 0, 1) == 2);
  CHECK(winding(d, 0, 3) == Q(2, 3));
  CHECK_THROWS_AS(winding(d, 1, 0), std::out_of_range);
  CHECK(effective_weights(d.source) == std::vector<Rational>{2, Q(2, 3)});
}

TEST_CASE("boundary symbol of an object", "[affine]") {
  CHECK(jstar_vector(DiagObject{{Xp(Q(1, 2)), Xp(Q(1, 2))}}) == symbol(Q(1, 2), Q(1, 2)));
  CHECK(jstar_vector(DiagObject{{Xp(1), Yp(2), Xp(3)}}) == symbol(1, 6));
  CHECK(jstar_vector(DiagObject{{Xp(5)}}).is_zero());
  CHECK(jstar_vector(DiagObject{{Xp(1), Xp(2), Xm(3)}}) == symbol(1, 2) + symbol(3, -3));
}

TEST_CASE("validation reports the failing layer", "[affine]") {
  DiagObject z{{Xp(Q(1, 2)), Xp(Q(1, 4)), Yp(2)}};
  std::size_t layer = 99;
  CHECK(code_of(Diagram{z, {make_layer(GenKind::AddMerge, 0, {Q(1, 2), Q(1, 3)})}}, &layer) ==
        ValidationError::Code::WeightMismatch);
  CHECK(layer == 0);
  CHECK(code_of(Diagram{z, {make_layer(GenKind::AddCross, 0), make_layer(GenKind::AddMerge, 1)}}, &layer) ==
        ValidationError::Code::KindMismatch);
  CHECK(layer == 1);
  CHECK(code_of(Diagram{z, {make_layer(GenKind::AddMerge, 5)}}) == ValidationError::Code::PositionOutOfRange);
  CHECK(code_of(Diagram{z, {make_layer(GenKind::MultSplit, 2, {0, 2})}}) ==
        ValidationError::Code::ZeroMultiplicativeWeight);
  CHECK(code_of(Diagram{DiagObject{{Yp(0)}}, {}}) == ValidationError::Code::ZeroMultiplicativeWeight);
  CHECK(code_of(Diagram{z, {make_layer(GenKind::CapX, 0)}}) == ValidationError::Code::KindMismatch);
  CHECK(code_of(Diagram{z, {make_dot(0, 1.0)}}) == ValidationError::Code::KindMismatch);
  try {
    validate(Diagram{z, {make_layer(GenKind::AddCross, 0), make_layer(GenKind::AddSplit, 0, {1, 1})}});
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "layer 1: add_split expects weight 2 at strand 0, found 1/4");
  }
}

TEST_CASE("generator targets", "[affine]") {
  DiagObject z{{Yp(3), Xp(2)}};
  CHECK(validate(Diagram{z, {make_layer(GenKind::XYCross, 0)}}) == DiagObject{{Xp(6), Yp(3)}});
  CHECK(validate(Diagram{DiagObject{{Xp(6), Ym(3)}}, {make_layer(GenKind::YXCross, 0)}}) ==
        DiagObject{{Ym(3), Xp(18)}});
  CHECK(validate(Diagram{z, {make_layer(GenKind::CoorientRev, 0)}}) == DiagObject{{Ym(Q(1, 3)), Xp(2)}});
  CHECK(validate(Diagram{z, {make_layer(GenKind::XOrientRev, 1)}}) == DiagObject{{Yp(3), Xm(-2)}});
  CHECK(validate(Diagram{z, {make_layer(GenKind::MultSplit, 0, {Q(1, 2), 6})}}) ==
        DiagObject{{Yp(Q(1, 2)), Yp(6), Xp(2)}});
  CHECK(validate(Diagram{z, {make_cup(GenKind::CupX, 1, 7, Handed::MP)}}) == DiagObject{{Yp(3), Xm(7), Xp(7), Xp(2)}});
}

TEST_CASE("worked example", "[affine]") {
  Rational a1 = Q(1, 3), a2 = Q(2, 5), a3 = Q(-7, 2), a4 = Q(3, 11), c1 = Q(5, 2), c2 = Q(-3, 7);
  Diagram d = worked_example(a1, a2, a3, a4, c1, c2);
  CHECK(validate(d) == DiagObject{{Xp(a1), Yp(c1), Xp(a2 / c1 + a3), Yp(c2), Xp(a4)}});
  PrimeVector j = std::get<PrimeVector>(j_invariant(d));
  CHECK(j == worked_example_expected(a1, a2, a3, a4, c1, c2));
  CHECK(j.str() == "{2: 841/770, 3: 71/385, 5: -107/6, 7: 35/4, 11: 569/60, 167: 167/20, 557: -2785/308}");
}

TEST_CASE("worked example on random weights", "[affine][property]") {
  Rng r(19);
  for (int t = 0; t < 100; ++t) {
    Rational a1 = r.rational(), a2 = r.rational(), a3 = r.rational(), a4 = r.rational();
    Rational c1 = r.nonzero(), c2 = r.nonzero();
    Diagram d = worked_example(a1, a2, a3, a4, c1, c2);
    CHECK(std::get<PrimeVector>(j_invariant(d)) == worked_example_expected(a1, a2, a3, a4, c1, c2));
  }
}

TEST_CASE("identity and composition", "[affine][property]") {
  Rng r(23);
  for (int t = 0; t < 200; ++t) {
    DiagramShape s;
    s.mode = static_cast<Mode>(t % 3);
    Diagram d = random_diagram(r, s);
    CHECK(is_zero_value(j_invariant(identity_diagram(d.source, s.mode))));
    Diagram back = compose(d, inverse(d));
    CHECK(validate(back) == d.source);
    CHECK(is_zero_value(j_invariant(back)));
    Diagram twice = compose(d, identity_diagram(validate(d), s.mode));
    CHECK(values_equal(j_invariant(twice), j_invariant(d)));
  }
  Diagram a{DiagObject{{Xp(1)}}, {}, Mode::J};
  Diagram b{DiagObject{{Xp(2)}}, {}, Mode::J};
  CHECK_THROWS_AS(compose(a, b), ValidationError);
  CHECK_THROWS_AS(compose(a, with_mode(a, Mode::HExact)), ValidationError);
  CHECK(validate(tensor(a, b)) == DiagObject{{Xp(1), Xp(2)}});
}

TEST_CASE("boundary formula", "[affine][property]") {
  Rng r(29);
  for (int t = 0; t < 500; ++t) {
    DiagramShape s;
    s.mode = static_cast<Mode>(t % 3);
    Diagram d = random_diagram(r, s);
    DiagObject tgt = validate(d);
    CHECK(object_weight(tgt) == object_weight(d.source));
    CHECK(values_equal(difference(j_invariant(d), dot_total(d)), difference(jstar(d.source, s.mode), jstar(tgt, s.mode))));
  }
}

TEST_CASE("float entropy mode tracks the exact one", "[affine][property]") {
  Rng r(31);
  for (int t = 0; t < 300; ++t) {
    DiagramShape s;
    s.max_dots = 0;
    Diagram d = random_diagram(r, s);
    PrimeVector j = std::get<PrimeVector>(j_invariant(d));
    EntropyScalar h = std::get<EntropyScalar>(j_invariant(with_mode(d, Mode::HExact)));
    double f = std::get<double>(j_invariant(with_mode(d, Mode::HFloat)));
    CHECK(h == entropy_render(j));
    CHECK_THAT(f, Catch::Matchers::WithinAbs(render_float(h), 1e-10));
  }
}

TEST_CASE("shannon entropy from a merge fold", "[affine]") {
  EntropyScalar h = shannon_entropy({Q(1, 2), Q(1, 4), Q(1, 4)});
  CHECK(h.log_str() == "3/2*log(2)");
  CHECK(is_finprob(merge_fold_diagram({Q(1, 2), Q(1, 4), Q(1, 4)})));
  CHECK_FALSE(is_finprob(merge_fold_diagram({Q(1, 2), Q(1, 4)})));
  CHECK_THROWS_AS(merge_fold_diagram({}), std::invalid_argument);
}

TEST_CASE("chain rule", "[affine]") {
  std::vector<Rational> z{Q(1, 3), Q(2, 3)};
  std::vector<std::vector<Rational>> ys{{Q(1, 2), Q(1, 2)}, {Q(1, 5), Q(4, 5)}};
  CHECK(chain_rule_check(z, ys));
  CHECK(shannon_direct(chain_composite(z, ys)).log_str() == "-7/5*log(2) + log(3) + 2/3*log(5)");
  auto ds = chain_rule_diagrams(z, ys);
  CHECK(validate(ds.grouped) == validate(ds.flat));
  CHECK_THROWS_AS(chain_rule_check(z, {{Q(1)}}), std::invalid_argument);

  Rng r(37);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + r.index(4);
    auto zz = r.distribution(n);
    std::vector<std::vector<Rational>> yy;
    for (std::size_t i = 0; i < n; ++i) yy.push_back(r.distribution(1 + r.index(3)));
    CHECK(chain_rule_check(zz, yy));
  }
}

TEST_CASE("each rewrite rule preserves boundary and invariant", "[rewrite][property]") {
  Rng r(41);
  for (const auto& rule : rule_catalog()) {
    DYNAMIC_SECTION(rule.name) {
      for (int t = 0; t < 150; ++t) {
        RuleSite site = sample_site(r, rule.name, static_cast<Mode>(t % 3));
        REQUIRE(rule.matcher(site.diagram, site.at));
        Diagram e = apply(site.diagram, rule, site.at);
        CHECK(e.source == site.diagram.source);
        CHECK(validate(e) == validate(site.diagram));
        CHECK(values_equal(j_invariant(e), j_invariant(site.diagram)));
      }
    }
  }
}

TEST_CASE("rules refuse sites they do not match", "[rewrite]") {
  Diagram id{DiagObject{{Xp(1), Xp(2)}}, {}, Mode::J};
  for (const auto& rule : rule_catalog()) CHECK_THROWS_AS(apply(id, rule, 0), RuleNotApplicable);
  Diagram one{id.source, {make_layer(GenKind::AddMerge, 0)}, Mode::J};
  CHECK_THROWS_AS(apply(one, find_rule("merge_split_cancel"), 0), RuleNotApplicable);
  CHECK_THROWS_AS(find_rule("no_such_rule"), std::invalid_argument);
  CHECK(rule_catalog().size() == 12);
}

TEST_CASE("merge then split cancels", "[rewrite]") {
  Diagram d{DiagObject{{Xp(1), Xp(2)}}, {make_layer(GenKind::AddMerge, 0), make_layer(GenKind::AddSplit, 0, {1, 2})}};
  const auto& rule = find_rule("merge_split_cancel");
  CHECK(matching_sites(d, rule) == std::vector<std::size_t>{0});
  CHECK(apply(d, rule, 0).layers.empty());
}

TEST_CASE("normal form", "[rewrite]") {
  DiagObject a{{Xp(1), Xp(2), Yp(3), Xp(Q(-1, 2))}};
  Diagram walk{a, {make_layer(GenKind::AddMerge, 0), make_layer(GenKind::AddSplit, 0, {1, 2}),
                   make_layer(GenKind::AddCross, 0), make_layer(GenKind::AddCross, 0)}};
  Diagram n = normalize(walk);
  CHECK(n.layers.size() == 6);
  CHECK(n.layers.front().kind == GenKind::XYCross);
  CHECK(validate(n) == a);

  Diagram dotted = walk;
  dotted.layers.push_back(make_dot(1, symbol(2, 3)));
  Diagram m = normalize(dotted);
  REQUIRE(m.layers.front().kind == GenKind::Dot);
  CHECK(std::get<PrimeVector>(m.layers.front().payload) == symbol(2, 3));
  CHECK(normalize(m) == m);

  CHECK_THROWS_AS(canonical_diagram(DiagObject{{Xp(1)}}, DiagObject{{Xp(2)}}, Mode::J), ValidationError);
  CHECK(canonical_diagram(DiagObject{}, DiagObject{{Yp(1)}}, Mode::J).layers.size() == 3);
}

TEST_CASE("normalize is idempotent and invariant preserving", "[rewrite][property]") {
  Rng r(43);
  for (int t = 0; t < 300; ++t) {
    DiagramShape s;
    s.mode = static_cast<Mode>(t % 3);
    Diagram d = random_diagram(r, s);
    Diagram n = normalize(d);
    CHECK(normalize(n) == n);
    CHECK(validate(n) == validate(d));
    CHECK(values_equal(j_invariant(n), j_invariant(d)));
    CHECK(equal_morphisms(n, d));
  }
}
