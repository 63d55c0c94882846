#include <catch_amalgamated.hpp>

#include <cmath>

#include "entronet/jspace.hpp"
#include "entronet/random.hpp"

using namespace entronet;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

PrimeVector pv(std::initializer_list<std::pair<long long, Rational>> xs) {
  PrimeVector v;
  for (const auto& [p, x] : xs) v.add_term(BigInt(p), x);
  return v;
}

}  // namespace

TEST_CASE("factorization of rationals", "[scalars]") {
  Factorization f = factor(NonzeroRational(Q(-12, 35)));
  CHECK(f.sign == -1);
  CHECK(f.exponents == std::map<BigInt, long long>{{2, 2}, {3, 1}, {5, -1}, {7, -1}});
  CHECK(f.reconstruct() == Q(-12, 35));

  BigInt m61 = (BigInt(1) << 61) - 1;
  BigInt m31 = (BigInt(1) << 31) - 1;
  CHECK(is_prime(m61));
  CHECK_FALSE(is_prime(m61 * m31));
  Factorization g = factor(NonzeroRational(Rational(m61 * m31 * 4)));
  CHECK(g.exponents.at(m61) == 1);
  CHECK(g.exponents.at(m31) == 1);
  CHECK(g.exponents.at(2) == 2);

  CHECK(factor(NonzeroRational(1)).exponents.empty());
  CHECK(valuation(NonzeroRational(Q(50, 3)), 5) == 2);
  CHECK(valuation(NonzeroRational(Q(50, 3)), 3) == -1);
  CHECK_THROWS_AS(NonzeroRational(0), std::domain_error);
}

TEST_CASE("factorization round trip on random rationals", "[scalars][property]") {
  Rng r(11);
  for (int t = 0; t < 300; ++t) {
    Rational q = r.nonzero(100000, 100000);
    CHECK(factor(NonzeroRational(q)).reconstruct() == q);
  }
}

TEST_CASE("rational literals", "[scalars]") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/6") == Q(-1, 2));
  CHECK(parse_rational("123456789012345678901234567890/2") == Rational(BigInt("61728394506172839450617283945")));
  try {
    parse_rational("1/0");
    FAIL("no throw");
  } catch (const RationalSyntaxError& e) {
    CHECK(e.offset == 2);
    CHECK(std::string(e.what()) == "zero denominator");
  }
  CHECK_THROWS_AS(parse_rational(""), RationalSyntaxError);
  CHECK_THROWS_AS(parse_rational("3/"), RationalSyntaxError);
  CHECK_THROWS_AS(parse_rational("1.5"), RationalSyntaxError);
  CHECK(parse_rational_list(" 1/2, 1/4 ,1/4") == std::vector<Rational>{Q(1, 2), Q(1, 4), Q(1, 4)});
}

TEST_CASE("symbol values", "[jspace]") {
  CHECK(symbol(Q(1, 2), Q(1, 2)) == pv({{2, -1}}));
  CHECK(symbol(Q(1, 2), Q(1, 2)).str() == "{2: -1}");
  CHECK(entropy_render(symbol(Q(1, 2), Q(1, 2))).log_str() == "log(2)");
  CHECK(symbol(Q(3), Q(0)).is_zero());
  CHECK(symbol(Q(5), Q(-5)).is_zero());
  CHECK(symbol(Q(1), Q(2)) == pv({{2, 2}, {3, -3}}));
  CHECK(binary_entropy(Q(1, 3)).logpart == pv({{2, Q(-2, 3)}, {3, 1}}));
}

TEST_CASE("the sign of a tensor factor dies", "[jspace]") {
  CHECK(log_vector(NonzeroRational(-6)) == log_vector(NonzeroRational(6)));
  CHECK(log_vector(NonzeroRational(-1)).is_zero());
  CHECK(tensor_image({{Q(2), NonzeroRational(3)}, {Q(1), NonzeroRational(9)}}) == pv({{3, 4}}));
}

TEST_CASE("tensor image is additive in the second factor", "[jspace][property]") {
  Rng r(5);
  for (int t = 0; t < 100; ++t) {
    Rational lambda = r.rational();
    std::vector<std::pair<Rational, NonzeroRational>> terms;
    Rational prod = 1;
    for (int k = 0; k < 4; ++k) {
      Rational q = r.nonzero();
      prod *= q;
      terms.push_back({lambda, NonzeroRational(q)});
    }
    CHECK(tensor_image(terms) == log_vector(NonzeroRational(prod), lambda));
  }
}

TEST_CASE("symbol identities", "[jspace][property]") {
  Rng r(7);
  for (int t = 0; t < 200; ++t) {
    Rational a = r.rational(), b = r.rational(), c = r.rational(), l = r.nonzero();
    CHECK(symbol(a, b) == symbol(b, a));
    CHECK(symbol(a, b) + symbol(a + b, c) == symbol(b, c) + symbol(a, b + c));
    CHECK(symbol(l * a, l * b) == l * symbol(a, b));
    CHECK(beta_to_j(j_to_beta(a, b)) == symbol(a, b));
  }
}

TEST_CASE("binary entropy symmetries", "[jspace][property]") {
  Rng r(3);
  for (int t = 0; t < 200; ++t) {
    Rational p = r.nonzero();
    if (p == 1) continue;
    CHECK(binary_entropy(1 - p) == binary_entropy(p));
    CHECK(p * binary_entropy(1 / p) == -binary_entropy(p));
    double x = to_double(p);
    CHECK_THAT(render_float(binary_entropy(p)), Catch::Matchers::WithinAbs(bracket_H_float(x, 1 - x), 1e-12));
  }
}

TEST_CASE("shannon entropy of small distributions", "[jspace]") {
  EntropyScalar h = shannon_direct({Q(1, 2), Q(1, 4), Q(1, 4)});
  CHECK(h.logpart == pv({{2, Q(3, 2)}}));
  CHECK(h.log_str() == "3/2*log(2)");
  CHECK_THAT(render_float(h), Catch::Matchers::WithinAbs(1.5 * std::log(2.0), 1e-15));
  CHECK_THAT(shannon_float({Q(1, 2), Q(1, 4), Q(1, 4)}), Catch::Matchers::WithinAbs(1.5 * std::log(2.0), 1e-15));
  CHECK(shannon_direct({Q(1)}).is_zero());
  CHECK(EntropyScalar{Q(1, 2), pv({{3, -1}})}.log_str() == "-log(3) + 1/2");
}

TEST_CASE("tsallis bracket", "[jspace]") {
  CHECK(tsallis_entropy({Q(1, 2), Q(1, 2)}, 2) == Q(1, 2));
  CHECK(bracket_tsallis(Q(1, 2), Q(1, 2), 2) == Q(-1, 2));
  CHECK(tsallis_entropy({Q(1, 3), Q(2, 3)}, 3) == Q(1, 3));
  CHECK(bracket_tsallis(Q(1, 3), Q(2, 3), 3) == Q(-2, 3));
  CHECK(psi_tsallis(Q(-2), 2) == -4);
  CHECK_THROWS_AS(psi_tsallis(Q(1), 1), std::invalid_argument);
  CHECK_THAT(bracket_tsallis_real(0.5, 0.5, 2.0), Catch::Matchers::WithinAbs(-0.5, 1e-15));
  CHECK_THROWS_AS(bracket_tsallis_real(0.5, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("tsallis bracket matches the entropy on the open interval", "[jspace][property]") {
  Rng r(13);
  for (int alpha : {2, 3, 4, 5})
    for (int t = 0; t < 100; ++t) {
      Rational p = r.unit_interval_open(500);
      CHECK(bracket_tsallis(p, 1 - p, alpha) == -(alpha - 1) * tsallis_entropy({p, 1 - p}, alpha));
    }
}
