#pragma once

#include "entronet/scalars.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace entronet {

// Finitely supported map prime -> Q. Carries J(Q) through its faithful image in Q (x) Q^x.
class PrimeVector {
 public:
  using Map = std::map<BigInt, Rational>;

  PrimeVector() = default;
  explicit PrimeVector(const Map& m) {
    for (const auto& [p, x] : m) add_term(p, x);
  }

  const Map& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Rational coeff(const BigInt& p) const {
    auto it = c_.find(p);
    return it == c_.end() ? Rational(0) : it->second;
  }

  void add_term(const BigInt& p, const Rational& x) {
    if (x == 0) return;
    auto [it, fresh] = c_.emplace(p, x);
    if (!fresh) {
      it->second += x;
      if (it->second == 0) c_.erase(it);
    }
  }

  PrimeVector& operator+=(const PrimeVector& o) {
    for (const auto& [p, x] : o.c_) add_term(p, x);
    return *this;
  }
  PrimeVector& operator-=(const PrimeVector& o) {
    for (const auto& [p, x] : o.c_) add_term(p, -x);
    return *this;
  }
  PrimeVector& operator*=(const Rational& s) {
    if (s == 0) { c_.clear(); return *this; }
    for (auto& [p, x] : c_) x *= s;
    return *this;
  }
  friend PrimeVector operator+(PrimeVector a, const PrimeVector& b) { return a += b; }
  friend PrimeVector operator-(PrimeVector a, const PrimeVector& b) { return a -= b; }
  friend PrimeVector operator-(PrimeVector a) { return a *= Rational(-1); }
  friend PrimeVector operator*(const Rational& s, PrimeVector v) { return v *= s; }
  friend bool operator==(const PrimeVector& a, const PrimeVector& b) { return a.c_ == b.c_; }

  // {2: -1, 3: 2/5}
  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [p, x] : c_) {
      if (!first) out += ", ";
      first = false;
      out += p.str() + ": " + to_string(x);
    }
    return out + "}";
  }

 private:
  Map c_;
};

// lambda (x) q  ->  lambda * (v_p(q))_p ; the sign of q dies since Q (x) Z/2 = 0.
inline PrimeVector log_vector(const NonzeroRational& q, const Rational& lambda = 1) {
  PrimeVector v;
  if (lambda == 0) return v;
  for (const auto& [p, e] : factor(q).exponents) v.add_term(p, lambda * e);
  return v;
}

inline PrimeVector tensor_image(const std::vector<std::pair<Rational, NonzeroRational>>& terms) {
  PrimeVector v;
  for (const auto& [lambda, q] : terms) v += log_vector(q, lambda);
  return v;
}

// <a,b> as the image of a(x)a + b(x)b - (a+b)(x)(a+b).
inline PrimeVector symbol(const Rational& a, const Rational& b) {
  PrimeVector v;
  Rational s = a + b;
  if (a != 0) v += log_vector(NonzeroRational(a), a);
  if (b != 0) v += log_vector(NonzeroRational(b), b);
  if (s != 0) v -= log_vector(NonzeroRational(s), s);
  return v;
}

inline PrimeVector scale(const NonzeroRational& c, PrimeVector v) { return v *= c.value(); }

// Formal combination of generators [a] of beta(Q).
struct BetaSymbol {
  std::vector<std::pair<Rational, Rational>> terms;  // (coefficient, a), a != 0
  friend bool operator==(const BetaSymbol&, const BetaSymbol&) = default;
};

inline PrimeVector beta_to_j(const BetaSymbol& s) {
  PrimeVector v;
  for (const auto& [lambda, a] : s.terms) {
    if (a == 0) throw std::domain_error("beta generator [0] is undefined");
    if (a == 1 || lambda == 0) continue;
    v += lambda * symbol(a, 1 - a);
  }
  return v;
}

inline BetaSymbol j_to_beta(const Rational& a, const Rational& b) {
  Rational s = a + b;
  if (s == 0 || a == 0) return {};
  return BetaSymbol{{{s, a / s}}};
}

// constant + sum_p logpart_p * ln p
struct EntropyScalar {
  Rational constant = 0;
  PrimeVector logpart;

  EntropyScalar& operator+=(const EntropyScalar& o) {
    constant += o.constant;
    logpart += o.logpart;
    return *this;
  }
  EntropyScalar& operator-=(const EntropyScalar& o) {
    constant -= o.constant;
    logpart -= o.logpart;
    return *this;
  }
  EntropyScalar& operator*=(const Rational& s) {
    constant *= s;
    logpart *= s;
    return *this;
  }
  friend EntropyScalar operator+(EntropyScalar a, const EntropyScalar& b) { return a += b; }
  friend EntropyScalar operator-(EntropyScalar a, const EntropyScalar& b) { return a -= b; }
  friend EntropyScalar operator-(EntropyScalar a) { return a *= Rational(-1); }
  friend EntropyScalar operator*(const Rational& s, EntropyScalar a) { return a *= s; }
  friend bool operator==(const EntropyScalar&, const EntropyScalar&) = default;

  bool is_zero() const { return constant == 0 && logpart.is_zero(); }

  // r0 + {p: x, ...}
  std::string str() const { return to_string(constant) + " + " + logpart.str(); }

  // Human form: 3/2*log(2) - log(3) + 1/4
  std::string log_str() const {
    std::string out;
    auto emit = [&](Rational x, const std::string& tail) {
      bool neg = x < 0;
      if (neg) x = -x;
      std::string mag = tail.empty() ? to_string(x) : (x == 1 ? tail : to_string(x) + "*" + tail);
      if (out.empty()) out = neg ? "-" + mag : mag;
      else out += (neg ? " - " : " + ") + mag;
    };
    for (const auto& [p, x] : logpart.coefficients()) emit(x, "log(" + p.str() + ")");
    if (constant != 0) emit(constant, "");
    return out.empty() ? "0" : out;
  }
};

inline EntropyScalar entropy_render(const PrimeVector& v) { return EntropyScalar{0, -v}; }

inline double render_float(const EntropyScalar& s) {
  double r = to_double(s.constant);
  for (const auto& [p, x] : s.logpart.coefficients()) r += to_double(x) * std::log(p.convert_to<double>());
  return r;
}

inline double psi_float(double a) { return a == 0.0 ? 0.0 : -a * std::log(std::fabs(a)); }

inline double bracket_H_float(double a, double b) {
  if (a + b == 0.0 && a == -b) return 0.0;
  return psi_float(a) + psi_float(b) - psi_float(a + b);
}

// H(p) = <p, 1-p>_H, exact.
inline EntropyScalar binary_entropy(const Rational& p) { return entropy_render(symbol(p, 1 - p)); }

// -sum p_i log|p_i| evaluated directly from the factorizations.
inline EntropyScalar shannon_direct(const std::vector<Rational>& p) {
  EntropyScalar h;
  for (const auto& x : p)
    if (x != 0) h.logpart -= log_vector(NonzeroRational(x), x);
  return h;
}

inline double shannon_float(const std::vector<Rational>& p) {
  double h = 0;
  for (const auto& x : p) h += psi_float(to_double(x));
  return h;
}

namespace detail {
inline Rational rpow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}
}  // namespace detail

inline Rational psi_tsallis(const Rational& x, int alpha) {
  if (alpha < 2) throw std::invalid_argument("exact Tsallis bracket needs integer alpha >= 2");
  Rational m = detail::rpow(x < 0 ? Rational(-x) : x, alpha);
  return x < 0 ? Rational(-m) : m;
}

inline Rational bracket_tsallis(const Rational& a, const Rational& b, int alpha) {
  return psi_tsallis(a, alpha) + psi_tsallis(b, alpha) - psi_tsallis(a + b, alpha);
}

inline double bracket_tsallis_real(double a, double b, double alpha) {
  if (alpha == 1.0) throw std::invalid_argument("Tsallis bracket undefined at alpha = 1");
  auto psi = [alpha](double x) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(x), alpha), x); };
  return psi(a) + psi(b) - psi(a + b);
}

// H_alpha(p) = (1 - sum p_i^alpha) / (alpha - 1)
inline Rational tsallis_entropy(const std::vector<Rational>& p, int alpha) {
  if (alpha < 2) throw std::invalid_argument("exact Tsallis entropy needs integer alpha >= 2");
  Rational s = 0;
  for (const auto& x : p) s += detail::rpow(x, alpha);
  return (1 - s) / (alpha - 1);
}

}  // namespace entronet
