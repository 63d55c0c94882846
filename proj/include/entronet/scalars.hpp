#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entronet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const BigInt& n) { return n.str(); }

inline std::string to_string(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

// Element of Q^x.
class NonzeroRational {
 public:
  NonzeroRational() : v_(1) {}
  explicit NonzeroRational(const Rational& v) : v_(v) {
    if (v_ == 0) throw std::domain_error("multiplicative weight must be nonzero");
  }
  explicit NonzeroRational(long long v) : NonzeroRational(Rational(v)) {}

  const Rational& value() const { return v_; }
  operator const Rational&() const { return v_; }

  NonzeroRational inverse() const { return NonzeroRational(Rational(1) / v_); }
  NonzeroRational pow(long long e) const {
    Rational base = e < 0 ? Rational(1) / v_ : v_;
    Rational r = 1;
    for (long long i = 0; i < (e < 0 ? -e : e); ++i) r *= base;
    return NonzeroRational(r);
  }

  friend NonzeroRational operator*(const NonzeroRational& a, const NonzeroRational& b) {
    return NonzeroRational(a.v_ * b.v_);
  }
  friend NonzeroRational operator/(const NonzeroRational& a, const NonzeroRational& b) {
    return NonzeroRational(a.v_ / b.v_);
  }
  friend bool operator==(const NonzeroRational& a, const NonzeroRational& b) { return a.v_ == b.v_; }

 private:
  Rational v_;
};

struct Factorization {
  int sign = 1;
  std::map<BigInt, long long> exponents;

  Rational reconstruct() const {
    BigInt n = 1, d = 1;
    for (const auto& [p, e] : exponents) {
      BigInt pe = boost::multiprecision::pow(p, static_cast<unsigned>(e < 0 ? -e : e));
      if (e > 0) n *= pe; else d *= pe;
    }
    return Rational(sign * n, d);
  }
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

inline const std::vector<std::uint32_t>& prime_table() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t limit = 1000000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit n with these bases.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) { u64 t = a % b; a = b; b = t; }
  return a;
}

// Brent's variant of Pollard rho; n is odd, composite.
inline u64 rho_u64(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min<u64>(128, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += 128;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline bool is_prime_big(const BigInt& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<u64>::max()) return is_prime_u64(n.convert_to<u64>());
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
  return boost::multiprecision::miller_rabin_test(n, 40, gen);
}

inline BigInt rho_big(const BigInt& n) {
  for (unsigned c = 1;; ++c) {
    BigInt x = 2, y = 2, g = 1;
    auto f = [&](const BigInt& v) { return BigInt((v * v + c) % n); };
    while (g == 1) {
      x = f(x);
      y = f(f(y));
      g = boost::multiprecision::gcd(BigInt(x > y ? x - y : y - x), n);
    }
    if (g != n) return g;
  }
}

inline void split_large(const BigInt& n, std::map<BigInt, long long>& out) {
  if (n == 1) return;
  if (is_prime_big(n)) { out[n] += 1; return; }
  BigInt d;
  if (n <= std::numeric_limits<u64>::max()) d = rho_u64(n.convert_to<u64>());
  else d = rho_big(n);
  split_large(d, out);
  split_large(n / d, out);
}

inline std::map<BigInt, long long> factor_positive_uncached(BigInt n) {
  std::map<BigInt, long long> out;
  const auto& primes = prime_table();
  if (n <= std::numeric_limits<u64>::max()) {
    u64 m = n.convert_to<u64>();
    std::size_t idx = 0;
    for (; idx < primes.size(); ++idx) {
      u64 p = primes[idx];
      if (p * p > m) break;
      if (m % p == 0) {
        long long e = 0;
        while (m % p == 0) { m /= p; ++e; }
        out[BigInt(p)] = e;
      }
      if (idx == 200 && m > 1 && is_prime_u64(m)) break;
    }
    if (m > 1) {
      if (idx >= primes.size() && !is_prime_u64(m)) split_large(BigInt(m), out);
      else out[BigInt(m)] += 1;
    }
    return out;
  }
  for (std::size_t idx = 0; idx < primes.size(); ++idx) {
    u64 p = primes[idx];
    if (BigInt(p) * p > n) break;
    if (n % p == 0) {
      long long e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out[BigInt(p)] = e;
      if (n <= std::numeric_limits<u64>::max()) {
        for (auto& [q, f] : factor_positive_uncached(n)) out[q] += f;
        return out;
      }
    }
    if (idx == 200 && is_prime_big(n)) break;
  }
  split_large(n, out);
  return out;
}

inline const std::map<BigInt, long long>& factor_positive(const BigInt& n) {
  thread_local std::map<BigInt, std::map<BigInt, long long>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (cache.size() > (1u << 16)) cache.clear();
  return cache.emplace(n, factor_positive_uncached(n)).first->second;
}

}  // namespace detail

inline bool is_prime(const BigInt& n) { return detail::is_prime_big(n); }

// Prime factorization of a positive integer.
inline std::map<BigInt, long long> factor_integer(const BigInt& n) {
  if (n < 1) throw std::domain_error("factor_integer expects a positive integer");
  return detail::factor_positive(n);
}

inline Factorization factor(const NonzeroRational& q) {
  Factorization f;
  const Rational& v = q.value();
  f.sign = v < 0 ? -1 : 1;
  BigInt n = boost::multiprecision::abs(numer(v));
  for (const auto& [p, e] : detail::factor_positive(n)) f.exponents[p] += e;
  for (const auto& [p, e] : detail::factor_positive(denom(v))) f.exponents[p] -= e;
  return f;
}

inline long long valuation(const NonzeroRational& q, const BigInt& p) {
  if (!is_prime(p)) throw std::invalid_argument("valuation: " + p.str() + " is not prime");
  long long e = 0;
  BigInt n = boost::multiprecision::abs(numer(q.value()));
  while (n % p == 0) { n /= p; ++e; }
  BigInt d = denom(q.value());
  while (d % p == 0) { d /= p; --e; }
  return e;
}

struct RationalSyntaxError : std::invalid_argument {
  std::size_t offset;
  RationalSyntaxError(const std::string& msg, std::size_t off) : std::invalid_argument(msg), offset(off) {}
};

// Accepts `n`, `-n`, `n/d`, `-n/d` with decimal digits.
inline Rational parse_rational(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && s[i] == '-') { neg = true; ++i; }
  std::size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) throw RationalSyntaxError("expected digits", i);
  BigInt n(std::string(s.substr(start, i - start)));
  BigInt d = 1;
  if (i < s.size() && s[i] == '/') {
    std::size_t dstart = ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == dstart) throw RationalSyntaxError("expected denominator digits", i);
    d = BigInt(std::string(s.substr(dstart, i - dstart)));
    if (d == 0) throw RationalSyntaxError("zero denominator", dstart);
  }
  if (i != s.size()) throw RationalSyntaxError("unexpected character in rational", i);
  return Rational(neg ? BigInt(-n) : n, d);
}

inline std::vector<Rational> parse_rational_list(std::string_view s, char sep = ',') {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    std::string item;
    for (char ch : s.substr(start, end - start))
      if (!std::isspace(static_cast<unsigned char>(ch))) item += ch;
    out.push_back(parse_rational(item));
    start = end + 1;
  }
  return out;
}

}  // namespace entronet
