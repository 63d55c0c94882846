#pragma once

#include "entronet/groupnet.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entronet {

struct CatalogError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CatalogCocycle {
  GModule module;
  Cochain2 cocycle;
};

// Base-N addition carry floor((i+j)/N) on Z/N with values in Z/N.
inline CatalogCocycle carry(int N) {
  if (N < 2) throw CatalogError("carry needs N >= 2");
  GModule U(Group::cyclic(N), {N});
  Cochain2 c = zero_cochain2(U);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) c.at(i, j) = {(i + j) / N};
  return {U, c};
}

// chi(x,y) = sum_{i=1}^{p-1} (1/p) C(p,i) x^i y^{p-i} on F_p.
inline CatalogCocycle witt(int p) {
  if (p < 2 || !is_prime(BigInt(p))) throw CatalogError("witt needs a prime");
  GModule U(Group::cyclic(p), {p});
  Cochain2 c = zero_cochain2(U);
  std::vector<BigInt> binom(p + 1, 1);
  for (int i = 1; i <= p; ++i) binom[i] = binom[i - 1] * (p - i + 1) / i;
  for (int x = 0; x < p; ++x)
    for (int y = 0; y < p; ++y) {
      BigInt s = 0;
      for (int i = 1; i < p; ++i) s += (binom[i] / p) * boost::multiprecision::pow(BigInt(x), i) * boost::multiprecision::pow(BigInt(y), p - i);
      c.at(x, y) = {static_cast<long long>(s % p)};
    }
  return {U, c};
}

// Multiplicative Q^x-valued cocycle on the monoid {0..K} under addition.
struct MonoidCocycle {
  int K = 0;
  std::vector<std::vector<Rational>> values;  // values[k1][k2], k1 + k2 <= K
  const Rational& operator()(int a, int b) const { return values[a][b]; }
};

inline bool verify_monoid_cocycle(const MonoidCocycle& c) {
  for (int a = 0; a <= c.K; ++a)
    for (int b = 0; a + b <= c.K; ++b)
      for (int d = 0; a + b + d <= c.K; ++d)
        if (c(a, b) * c(a + b, d) != c(b, d) * c(a, b + d)) return false;
  return true;
}

// c(k1,k2) = [k1+k2]! / ([k1]! [k2]!) for the factorial built from seq(1), seq(2), ...
inline MonoidCocycle factorial_cocycle(int K, const std::function<Rational(int)>& seq) {
  if (K < 0) throw CatalogError("range bound must be nonnegative");
  std::vector<Rational> fact(K + 1, 1);
  for (int n = 1; n <= K; ++n) {
    Rational s = seq(n);
    if (s == 0) throw CatalogError("sequence vanishes at " + std::to_string(n));
    fact[n] = fact[n - 1] * s;
  }
  MonoidCocycle c{K, std::vector<std::vector<Rational>>(K + 1)};
  for (int a = 0; a <= K; ++a)
    for (int b = 0; a + b <= K; ++b) c.values[a].push_back(fact[a + b] / (fact[a] * fact[b]));
  return c;
}

// "natural" (binomial), "fibonacci" (Fontene-Ward with Fibonacci numbers), or a rational q (Gaussian).
inline MonoidCocycle binomial(int K, const std::string& sequence = "natural") {
  if (sequence == "natural") return factorial_cocycle(K, [](int n) { return Rational(n); });
  if (sequence == "fibonacci")
    return factorial_cocycle(K, [](int n) {
      BigInt a = 0, b = 1;
      for (int i = 0; i < n; ++i) { BigInt t = a + b; a = b; b = t; }
      return Rational(a);
    });
  Rational q = parse_rational(sequence);
  return factorial_cocycle(K, [q](int n) {
    Rational s = 0, t = 1;
    for (int i = 0; i < n; ++i) { s += t; t *= q; }
    return s;
  });
}

// Finite probability space with events as bitmasks over outcomes.
struct ProbSpace {
  std::vector<Rational> mass;
  Rational prob(std::uint32_t event) const {
    Rational s = 0;
    for (std::size_t i = 0; i < mass.size(); ++i)
      if (event & (1u << i)) s += mass[i];
    return s;
  }
  std::uint32_t full() const { return mass.size() >= 32 ? ~0u : ((1u << mass.size()) - 1); }
};

inline void check_space(const ProbSpace& s) {
  if (s.mass.empty() || s.mass.size() > 10) throw CatalogError("probability space needs 1..10 outcomes");
  Rational t = 0;
  for (const auto& m : s.mass) {
    if (m <= 0) throw CatalogError("outcome masses must be positive");
    t += m;
  }
  if (t != 1) throw CatalogError("outcome masses must sum to 1");
}

// log P(AB)/(P(A)P(B)) as an exact entropy scalar.
inline EntropyScalar pmi(const ProbSpace& s, std::uint32_t A, std::uint32_t B) {
  Rational pab = s.prob(A & B), pa = s.prob(A), pb = s.prob(B);
  if (pab == 0) throw CatalogError("pmi undefined for events of zero joint mass");
  EntropyScalar r;
  r.logpart = log_vector(NonzeroRational(pab / (pa * pb)));
  return r;
}

inline double pmi_float(const ProbSpace& s, std::uint32_t A, std::uint32_t B) {
  double pab = to_double(s.prob(A & B)), pa = to_double(s.prob(A)), pb = to_double(s.prob(B));
  if (pab <= 0) throw CatalogError("pmi undefined for events of zero joint mass");
  return std::log(pab / (pa * pb));
}

struct PmiReport {
  long long triples = 0;
  bool exact_ok = true;
  double max_residual = 0;
};

// Cocycle identity on the intersection monoid, over triples with positive joint mass.
inline PmiReport verify_pmi(const ProbSpace& s) {
  check_space(s);
  PmiReport r;
  std::uint32_t n = s.full();
  for (std::uint32_t A = 1; A <= n; ++A)
    for (std::uint32_t B = 1; B <= n; ++B) {
      if (s.prob(A & B) == 0) continue;
      for (std::uint32_t C = 1; C <= n; ++C) {
        if (s.prob(A & B & C) == 0) continue;
        ++r.triples;
        EntropyScalar lhs = pmi(s, A, B) + pmi(s, A & B, C);
        EntropyScalar rhs = pmi(s, B, C) + pmi(s, A, B & C);
        if (!(lhs == rhs)) r.exact_ok = false;
        double res = pmi_float(s, A, B) + pmi_float(s, A & B, C) - pmi_float(s, B, C) - pmi_float(s, A, B & C);
        r.max_residual = std::max(r.max_residual, std::fabs(res));
      }
    }
  return r;
}

}  // namespace entronet
