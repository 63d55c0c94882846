#pragma once

#include "entronet/jspace.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace entronet {

enum class PointKind { Xplus, Xminus, Yplus, Yminus };

inline bool is_x(PointKind k) { return k == PointKind::Xplus || k == PointKind::Xminus; }
inline bool is_y(PointKind k) { return !is_x(k); }
inline int kind_sign(PointKind k) { return (k == PointKind::Xplus || k == PointKind::Yplus) ? 1 : -1; }

inline std::string kind_str(PointKind k) {
  switch (k) {
    case PointKind::Xplus: return "X+";
    case PointKind::Xminus: return "X-";
    case PointKind::Yplus: return "Y+";
    case PointKind::Yminus: return "Y-";
  }
  return "?";
}

struct BoundaryPoint {
  PointKind kind = PointKind::Xplus;
  Rational weight = 0;
  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

inline BoundaryPoint Xp(const Rational& a) { return {PointKind::Xplus, a}; }
inline BoundaryPoint Xm(const Rational& a) { return {PointKind::Xminus, a}; }
inline BoundaryPoint Yp(const Rational& c) { return {PointKind::Yplus, c}; }
inline BoundaryPoint Ym(const Rational& c) { return {PointKind::Yminus, c}; }

struct DiagObject {
  std::vector<BoundaryPoint> points;

  std::size_t size() const { return points.size(); }
  const BoundaryPoint& operator[](std::size_t i) const { return points[i]; }
  friend bool operator==(const DiagObject&, const DiagObject&) = default;

  std::string str() const {
    if (points.empty()) return "unit";
    std::string out;
    for (const auto& p : points) {
      if (!out.empty()) out += " ";
      out += kind_str(p.kind) + "(" + to_string(p.weight) + ")";
    }
    return out;
  }
};

inline DiagObject tensor(const DiagObject& a, const DiagObject& b) {
  DiagObject z = a;
  z.points.insert(z.points.end(), b.points.begin(), b.points.end());
  return z;
}

// Element (a, c) of Aff_1(Q).
struct AffWeight {
  Rational a = 0;
  Rational c = 1;
  friend AffWeight operator*(const AffWeight& x, const AffWeight& y) { return {x.a + x.c * y.a, x.c * y.c}; }
  friend bool operator==(const AffWeight&, const AffWeight&) = default;
  std::string str() const { return "(" + to_string(a) + ", " + to_string(c) + ")"; }
};

enum class Mode { J, HExact, HFloat };

inline std::string mode_str(Mode m) {
  switch (m) {
    case Mode::J: return "J";
    case Mode::HExact: return "H";
    case Mode::HFloat: return "Hfloat";
  }
  return "?";
}

// Value of j: J(Q) image, exact entropy scalar, or a double.
using JValue = std::variant<PrimeVector, EntropyScalar, double>;

inline JValue zero_value(Mode m) {
  switch (m) {
    case Mode::J: return PrimeVector{};
    case Mode::HExact: return EntropyScalar{};
    case Mode::HFloat: return 0.0;
  }
  return PrimeVector{};
}

inline Mode value_mode(const JValue& v) {
  if (std::holds_alternative<PrimeVector>(v)) return Mode::J;
  if (std::holds_alternative<EntropyScalar>(v)) return Mode::HExact;
  return Mode::HFloat;
}

inline void add_scaled(JValue& acc, const JValue& x, const Rational& s) {
  if (acc.index() != x.index()) throw std::logic_error("mixing j-values of different modes");
  if (auto* v = std::get_if<PrimeVector>(&acc)) *v += s * std::get<PrimeVector>(x);
  else if (auto* e = std::get_if<EntropyScalar>(&acc)) *e += s * std::get<EntropyScalar>(x);
  else std::get<double>(acc) += to_double(s) * std::get<double>(x);
}

inline JValue negate(JValue v) {
  JValue z = zero_value(value_mode(v));
  add_scaled(z, v, -1);
  return z;
}

inline JValue difference(const JValue& a, const JValue& b) {
  JValue r = a;
  add_scaled(r, b, -1);
  return r;
}

inline constexpr double kFloatTolerance = 1e-10;

inline bool values_equal(const JValue& a, const JValue& b, double tol = kFloatTolerance) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<double>(&a)) return std::fabs(*x - std::get<double>(b)) < tol;
  return a == b;
}

inline bool is_zero_value(const JValue& v) { return values_equal(v, zero_value(value_mode(v))); }

inline std::string value_str(const JValue& v) {
  if (auto* p = std::get_if<PrimeVector>(&v)) return p->str();
  if (auto* e = std::get_if<EntropyScalar>(&v)) return e->str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
  return buf;
}

inline double value_float(const JValue& v) {
  if (auto* p = std::get_if<PrimeVector>(&v)) return render_float(entropy_render(*p));
  if (auto* e = std::get_if<EntropyScalar>(&v)) return render_float(*e);
  return std::get<double>(v);
}

// <a,b> in the requested mode.
inline JValue symbol_value(Mode m, const Rational& a, const Rational& b) {
  switch (m) {
    case Mode::J: return symbol(a, b);
    case Mode::HExact: return entropy_render(symbol(a, b));
    case Mode::HFloat: return bracket_H_float(to_double(a), to_double(b));
  }
  return PrimeVector{};
}

enum class GenKind {
  AddMerge,
  AddSplit,
  AddMergeDual,
  AddSplitDual,
  AddCross,
  XYCross,
  YXCross,
  XOrientRev,
  MultMerge,
  MultSplit,
  MultMergeDual,
  MultSplitDual,
  CoorientRev,
  CupX,
  CapX,
  CupY,
  CapY,
  Dot
};

inline constexpr GenKind kAllGenKinds[] = {
    GenKind::AddMerge,  GenKind::AddSplit,  GenKind::AddMergeDual,  GenKind::AddSplitDual, GenKind::AddCross,
    GenKind::XYCross,   GenKind::YXCross,   GenKind::XOrientRev,    GenKind::MultMerge,    GenKind::MultSplit,
    GenKind::MultMergeDual, GenKind::MultSplitDual, GenKind::CoorientRev, GenKind::CupX, GenKind::CapX,
    GenKind::CupY,      GenKind::CapY,      GenKind::Dot};

inline std::string gen_name(GenKind k) {
  switch (k) {
    case GenKind::AddMerge: return "add_merge";
    case GenKind::AddSplit: return "add_split";
    case GenKind::AddMergeDual: return "add_merge_dual";
    case GenKind::AddSplitDual: return "add_split_dual";
    case GenKind::AddCross: return "add_cross";
    case GenKind::XYCross: return "xy_cross";
    case GenKind::YXCross: return "yx_cross";
    case GenKind::XOrientRev: return "orient_rev";
    case GenKind::MultMerge: return "mult_merge";
    case GenKind::MultSplit: return "mult_split";
    case GenKind::MultMergeDual: return "mult_merge_dual";
    case GenKind::MultSplitDual: return "mult_split_dual";
    case GenKind::CoorientRev: return "coorient_rev";
    case GenKind::CupX: return "cup_x";
    case GenKind::CapX: return "cap_x";
    case GenKind::CupY: return "cup_y";
    case GenKind::CapY: return "cap_y";
    case GenKind::Dot: return "dot";
  }
  return "?";
}

inline std::optional<GenKind> gen_from_name(const std::string& s) {
  for (GenKind k : kAllGenKinds)
    if (gen_name(k) == s) return k;
  return std::nullopt;
}

// Order of the pair created by a cup: (+,-) or (-,+).
enum class Handed { PM, MP };

struct Layer {
  GenKind kind = GenKind::AddMerge;
  std::size_t pos = 0;
  std::vector<Rational> args;  // kind-dependent weights; empty means inferred where allowed
  Handed hand = Handed::PM;
  JValue payload = PrimeVector{};

  friend bool operator==(const Layer& a, const Layer& b) {
    if (a.kind != b.kind || a.pos != b.pos || a.args != b.args) return false;
    if ((a.kind == GenKind::CupX || a.kind == GenKind::CupY) && a.hand != b.hand) return false;
    if (a.kind == GenKind::Dot && a.payload != b.payload) return false;
    return true;
  }
};

inline Layer make_layer(GenKind k, std::size_t pos, std::vector<Rational> args = {}) {
  Layer l;
  l.kind = k;
  l.pos = pos;
  l.args = std::move(args);
  return l;
}

inline Layer make_cup(GenKind k, std::size_t gap, const Rational& w, Handed h) {
  Layer l = make_layer(k, gap, {w});
  l.hand = h;
  return l;
}

inline Layer make_dot(std::size_t gap, JValue payload) {
  Layer l = make_layer(GenKind::Dot, gap);
  l.payload = std::move(payload);
  return l;
}

struct Diagram {
  DiagObject source;
  std::vector<Layer> layers;
  Mode mode = Mode::J;
  friend bool operator==(const Diagram&, const Diagram&) = default;
};

struct ValidationError : std::runtime_error {
  enum class Code { WeightMismatch, KindMismatch, ZeroMultiplicativeWeight, PositionOutOfRange, BoundaryMismatch };
  Code code;
  std::size_t layer;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ValidationError(Code c, std::size_t l, const std::string& msg)
      : std::runtime_error((l == npos ? std::string() : "layer " + std::to_string(l) + ": ") + msg), code(c), layer(l) {}
};

inline std::string code_str(ValidationError::Code c) {
  switch (c) {
    case ValidationError::Code::WeightMismatch: return "WeightMismatch";
    case ValidationError::Code::KindMismatch: return "KindMismatch";
    case ValidationError::Code::ZeroMultiplicativeWeight: return "ZeroMultiplicativeWeight";
    case ValidationError::Code::PositionOutOfRange: return "PositionOutOfRange";
    case ValidationError::Code::BoundaryMismatch: return "BoundaryMismatch";
  }
  return "?";
}

// Multiplicative contribution of a Y point to winding numbers.
inline Rational y_factor(const BoundaryPoint& p) { return p.kind == PointKind::Yplus ? p.weight : 1 / p.weight; }

inline Rational gap_winding(const DiagObject& z, std::size_t gap) {
  Rational w = 1;
  for (std::size_t i = 0; i < gap && i < z.size(); ++i)
    if (is_y(z[i].kind)) w *= y_factor(z[i]);
  return w;
}

inline AffWeight object_weight(const DiagObject& z) {
  AffWeight w;
  for (const auto& p : z.points) {
    if (is_x(p.kind)) w.a += kind_sign(p.kind) * w.c * p.weight;
    else w.c *= y_factor(p);
  }
  return w;
}

inline std::vector<Rational> effective_weights(const DiagObject& z) {
  std::vector<Rational> out;
  Rational w = 1;
  for (const auto& p : z.points) {
    if (is_x(p.kind)) out.push_back(kind_sign(p.kind) * w * p.weight);
    else w *= y_factor(p);
  }
  return out;
}

inline JValue jstar(const DiagObject& z, Mode m = Mode::J) {
  JValue acc = zero_value(m);
  auto b = effective_weights(z);
  Rational s = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (k > 0) add_scaled(acc, symbol_value(m, s, b[k]), 1);
    s += b[k];
  }
  return acc;
}

inline PrimeVector jstar_vector(const DiagObject& z) { return std::get<PrimeVector>(jstar(z, Mode::J)); }

namespace detail {

inline ValidationError verr(ValidationError::Code c, std::size_t l, const std::string& m) { return {c, l, m}; }

inline void need_args(const Layer& L, std::size_t n, std::size_t idx, bool optional) {
  if (L.args.size() == n) return;
  if (optional && L.args.empty()) return;
  throw verr(ValidationError::Code::KindMismatch, idx,
             gen_name(L.kind) + " expects " + std::to_string(n) + " weight argument(s)");
}

inline void need_pos(const DiagObject& z, std::size_t pos, std::size_t width, std::size_t idx, const Layer& L) {
  if (pos + width > z.size())
    throw verr(ValidationError::Code::PositionOutOfRange, idx,
               gen_name(L.kind) + " at " + std::to_string(pos) + " exceeds object of size " + std::to_string(z.size()));
}

inline void need_kind(const BoundaryPoint& p, PointKind k, std::size_t idx, const Layer& L, std::size_t where) {
  if (p.kind != k)
    throw verr(ValidationError::Code::KindMismatch, idx,
               gen_name(L.kind) + " expects " + kind_str(k) + " at strand " + std::to_string(where) + ", found " +
                   kind_str(p.kind));
}

inline void need_weight(const Rational& have, const Rational& want, std::size_t idx, const Layer& L, std::size_t where) {
  if (have != want)
    throw verr(ValidationError::Code::WeightMismatch, idx,
               gen_name(L.kind) + " expects weight " + to_string(want) + " at strand " + std::to_string(where) +
                   ", found " + to_string(have));
}

inline void need_unit(const Rational& c, std::size_t idx, const Layer& L) {
  if (c == 0) throw verr(ValidationError::Code::ZeroMultiplicativeWeight, idx, gen_name(L.kind) + " with weight 0");
}

inline void replace(DiagObject& z, std::size_t pos, std::size_t n, const std::vector<BoundaryPoint>& with) {
  z.points.erase(z.points.begin() + pos, z.points.begin() + pos + n);
  z.points.insert(z.points.begin() + pos, with.begin(), with.end());
}

}  // namespace detail

inline void check_object(const DiagObject& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    if (is_y(z[i].kind) && z[i].weight == 0)
      throw ValidationError(ValidationError::Code::ZeroMultiplicativeWeight, ValidationError::npos,
                            "boundary point " + std::to_string(i) + " is a multiplicative point of weight 0");
}

// Number of strands consumed and produced by a layer.
inline std::pair<std::size_t, std::size_t> layer_arity(GenKind k) {
  switch (k) {
    case GenKind::AddMerge:
    case GenKind::AddMergeDual:
    case GenKind::MultMerge:
    case GenKind::MultMergeDual: return {2, 1};
    case GenKind::AddSplit:
    case GenKind::AddSplitDual:
    case GenKind::MultSplit:
    case GenKind::MultSplitDual: return {1, 2};
    case GenKind::AddCross:
    case GenKind::XYCross:
    case GenKind::YXCross: return {2, 2};
    case GenKind::XOrientRev:
    case GenKind::CoorientRev: return {1, 1};
    case GenKind::CupX:
    case GenKind::CupY: return {0, 2};
    case GenKind::CapX:
    case GenKind::CapY: return {2, 0};
    case GenKind::Dot: return {0, 0};
  }
  return {0, 0};
}

// Applies one layer, returning the object above it. idx is used for error reporting.
inline DiagObject apply_layer(const DiagObject& z, const Layer& L, Mode mode, std::size_t idx = 0) {
  using detail::need_args;
  using detail::need_kind;
  using detail::need_pos;
  using detail::need_weight;
  using detail::need_unit;
  using detail::replace;
  using C = ValidationError::Code;
  DiagObject out = z;
  const std::size_t i = L.pos;
  switch (L.kind) {
    case GenKind::AddMerge: {
      need_args(L, 2, idx, true);
      need_pos(z, i, 2, idx, L);
      need_kind(z[i], PointKind::Xplus, idx, L, i);
      need_kind(z[i + 1], PointKind::Xplus, idx, L, i + 1);
      if (!L.args.empty()) {
        need_weight(z[i].weight, L.args[0], idx, L, i);
        need_weight(z[i + 1].weight, L.args[1], idx, L, i + 1);
      }
      replace(out, i, 2, {Xp(z[i].weight + z[i + 1].weight)});
      break;
    }
    case GenKind::AddSplit: {
      need_args(L, 2, idx, false);
      need_pos(z, i, 1, idx, L);
      need_kind(z[i], PointKind::Xplus, idx, L, i);
      need_weight(z[i].weight, L.args[0] + L.args[1], idx, L, i);
      replace(out, i, 1, {Xp(L.args[0]), Xp(L.args[1])});
      break;
    }
    case GenKind::AddMergeDual: {
      need_args(L, 2, idx, true);
      need_pos(z, i, 2, idx, L);
      need_kind(z[i], PointKind::Xminus, idx, L, i);
      need_kind(z[i + 1], PointKind::Xminus, idx, L, i + 1);
      if (!L.args.empty()) {
        need_weight(z[i].weight, L.args[1], idx, L, i);
        need_weight(z[i + 1].weight, L.args[0], idx, L, i + 1);
      }
      replace(out, i, 2, {Xm(z[i].weight + z[i + 1].weight)});
      break;
    }
    case GenKind::AddSplitDual: {
      need_args(L, 2, idx, false);
      need_pos(z, i, 1, idx, L);
      need_kind(z[i], PointKind::Xminus, idx, L, i);
      need_weight(z[i].weight, L.args[0] + L.args[1], idx, L, i);
      replace(out, i, 1, {Xm(L.args[1]), Xm(L.args[0])});
      break;
    }
    case GenKind::AddCross: {
      need_args(L, 0, idx, false);
      need_pos(z, i, 2, idx, L);
      if (!is_x(z[i].kind) || !is_x(z[i + 1].kind))
        throw ValidationError(C::KindMismatch, idx, "add_cross expects two additive strands");
      replace(out, i, 2, {z[i + 1], z[i]});
      break;
    }
    case GenKind::XYCross: {
      need_args(L, 0, idx, false);
      need_pos(z, i, 2, idx, L);
      if (!is_y(z[i].kind) || !is_x(z[i + 1].kind))
        throw ValidationError(C::KindMismatch, idx, "xy_cross expects a multiplicative then an additive strand");
      BoundaryPoint x = z[i + 1];
      x.weight = y_factor(z[i]) * x.weight;
      replace(out, i, 2, {x, z[i]});
      break;
    }
    case GenKind::YXCross: {
      need_args(L, 0, idx, false);
      need_pos(z, i, 2, idx, L);
      if (!is_x(z[i].kind) || !is_y(z[i + 1].kind))
        throw ValidationError(C::KindMismatch, idx, "yx_cross expects an additive then a multiplicative strand");
      BoundaryPoint x = z[i];
      x.weight = x.weight / y_factor(z[i + 1]);
      replace(out, i, 2, {z[i + 1], x});
      break;
    }
    case GenKind::XOrientRev: {
      need_args(L, 0, idx, false);
      need_pos(z, i, 1, idx, L);
      if (!is_x(z[i].kind)) throw ValidationError(C::KindMismatch, idx, "orient_rev expects an additive strand");
      PointKind k = z[i].kind == PointKind::Xplus ? PointKind::Xminus : PointKind::Xplus;
      replace(out, i, 1, {{k, -z[i].weight}});
      break;
    }
    case GenKind::MultMerge:
    case GenKind::MultMergeDual: {
      bool dual = L.kind == GenKind::MultMergeDual;
      PointKind k = dual ? PointKind::Yminus : PointKind::Yplus;
      need_args(L, 2, idx, true);
      need_pos(z, i, 2, idx, L);
      need_kind(z[i], k, idx, L, i);
      need_kind(z[i + 1], k, idx, L, i + 1);
      if (!L.args.empty()) {
        need_weight(z[i].weight, L.args[dual ? 1 : 0], idx, L, i);
        need_weight(z[i + 1].weight, L.args[dual ? 0 : 1], idx, L, i + 1);
      }
      replace(out, i, 2, {{k, z[i].weight * z[i + 1].weight}});
      break;
    }
    case GenKind::MultSplit:
    case GenKind::MultSplitDual: {
      bool dual = L.kind == GenKind::MultSplitDual;
      PointKind k = dual ? PointKind::Yminus : PointKind::Yplus;
      need_args(L, 2, idx, false);
      need_unit(L.args[0], idx, L);
      need_unit(L.args[1], idx, L);
      need_pos(z, i, 1, idx, L);
      need_kind(z[i], k, idx, L, i);
      need_weight(z[i].weight, L.args[0] * L.args[1], idx, L, i);
      if (dual) replace(out, i, 1, {{k, L.args[1]}, {k, L.args[0]}});
      else replace(out, i, 1, {{k, L.args[0]}, {k, L.args[1]}});
      break;
    }
    case GenKind::CoorientRev: {
      need_args(L, 0, idx, false);
      need_pos(z, i, 1, idx, L);
      if (!is_y(z[i].kind)) throw ValidationError(C::KindMismatch, idx, "coorient_rev expects a multiplicative strand");
      PointKind k = z[i].kind == PointKind::Yplus ? PointKind::Yminus : PointKind::Yplus;
      replace(out, i, 1, {{k, 1 / z[i].weight}});
      break;
    }
    case GenKind::CupX:
    case GenKind::CupY: {
      bool x = L.kind == GenKind::CupX;
      need_args(L, 1, idx, false);
      if (!x) need_unit(L.args[0], idx, L);
      if (i > z.size())
        throw ValidationError(C::PositionOutOfRange, idx, gen_name(L.kind) + " gap " + std::to_string(i) + " out of range");
      PointKind plus = x ? PointKind::Xplus : PointKind::Yplus;
      PointKind minus = x ? PointKind::Xminus : PointKind::Yminus;
      if (L.hand == Handed::PM) replace(out, i, 0, {{plus, L.args[0]}, {minus, L.args[0]}});
      else replace(out, i, 0, {{minus, L.args[0]}, {plus, L.args[0]}});
      break;
    }
    case GenKind::CapX:
    case GenKind::CapY: {
      bool x = L.kind == GenKind::CapX;
      need_args(L, 1, idx, true);
      need_pos(z, i, 2, idx, L);
      bool ok = x ? (is_x(z[i].kind) && is_x(z[i + 1].kind)) : (is_y(z[i].kind) && is_y(z[i + 1].kind));
      if (!ok || z[i].kind == z[i + 1].kind)
        throw ValidationError(C::KindMismatch, idx, gen_name(L.kind) + " expects an oppositely oriented pair");
      need_weight(z[i + 1].weight, z[i].weight, idx, L, i + 1);
      if (!L.args.empty()) need_weight(z[i].weight, L.args[0], idx, L, i);
      replace(out, i, 2, {});
      break;
    }
    case GenKind::Dot: {
      if (i > z.size())
        throw ValidationError(C::PositionOutOfRange, idx, "dot gap " + std::to_string(i) + " out of range");
      if (value_mode(L.payload) != mode)
        throw ValidationError(C::KindMismatch, idx, "dot payload does not match diagram mode " + mode_str(mode));
      break;
    }
  }
  return out;
}

// Objects before each layer, followed by the target.
inline std::vector<DiagObject> trace(const Diagram& d) {
  check_object(d.source);
  std::vector<DiagObject> out;
  out.reserve(d.layers.size() + 1);
  out.push_back(d.source);
  for (std::size_t k = 0; k < d.layers.size(); ++k) out.push_back(apply_layer(out.back(), d.layers[k], d.mode, k));
  return out;
}

inline DiagObject validate(const Diagram& d) { return trace(d).back(); }

inline Rational winding(const Diagram& d, std::size_t layer, std::size_t gap) {
  if (layer > d.layers.size()) throw std::out_of_range("winding: layer index out of range");
  auto objs = trace(d);
  if (gap > objs[layer].size()) throw std::out_of_range("winding: gap index out of range");
  return gap_winding(objs[layer], gap);
}

// Contribution of a layer acting on z.
inline JValue layer_contribution(const DiagObject& z, const Layer& L, Mode m) {
  JValue r = zero_value(m);
  Rational w = gap_winding(z, L.pos);
  switch (L.kind) {
    case GenKind::AddMerge: add_scaled(r, symbol_value(m, z[L.pos].weight, z[L.pos + 1].weight), w); break;
    case GenKind::AddSplit: add_scaled(r, symbol_value(m, L.args[0], L.args[1]), -w); break;
    case GenKind::AddMergeDual: add_scaled(r, symbol_value(m, z[L.pos + 1].weight, z[L.pos].weight), -w); break;
    case GenKind::AddSplitDual: add_scaled(r, symbol_value(m, L.args[0], L.args[1]), w); break;
    case GenKind::Dot: add_scaled(r, L.payload, w); break;
    default: break;
  }
  return r;
}

inline JValue j_invariant(const Diagram& d) {
  auto objs = trace(d);
  JValue acc = zero_value(d.mode);
  for (std::size_t k = 0; k < d.layers.size(); ++k) add_scaled(acc, layer_contribution(objs[k], d.layers[k], d.mode), 1);
  return acc;
}

// Sum of winding-twisted dot labels.
inline JValue dot_total(const Diagram& d) {
  auto objs = trace(d);
  JValue acc = zero_value(d.mode);
  for (std::size_t k = 0; k < d.layers.size(); ++k)
    if (d.layers[k].kind == GenKind::Dot) add_scaled(acc, d.layers[k].payload, gap_winding(objs[k], d.layers[k].pos));
  return acc;
}

inline bool has_dots(const Diagram& d) {
  for (const auto& L : d.layers)
    if (L.kind == GenKind::Dot) return true;
  return false;
}

inline Diagram identity_diagram(const DiagObject& z, Mode m = Mode::J) { return Diagram{z, {}, m}; }

inline Diagram compose(const Diagram& d1, const Diagram& d2) {
  if (d1.mode != d2.mode)
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos, "compose: modes differ");
  if (validate(d1) != d2.source)
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos,
                          "compose: target of the first diagram differs from the source of the second");
  Diagram r = d1;
  r.layers.insert(r.layers.end(), d2.layers.begin(), d2.layers.end());
  return r;
}

inline Diagram tensor(const Diagram& d1, const Diagram& d2) {
  if (d1.mode != d2.mode)
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos, "tensor: modes differ");
  std::size_t offset = validate(d1).size();
  validate(d2);
  Diagram r{tensor(d1.source, d2.source), d1.layers, d1.mode};
  for (Layer L : d2.layers) {
    L.pos += offset;
    r.layers.push_back(L);
  }
  return r;
}

// The layer undoing L, where `above` is the object produced by L.
inline Layer inverse_layer(const Layer& L, const DiagObject& below, const DiagObject& above) {
  Layer r = L;
  const std::size_t i = L.pos;
  switch (L.kind) {
    case GenKind::AddMerge: return make_layer(GenKind::AddSplit, i, {below[i].weight, below[i + 1].weight});
    case GenKind::AddSplit: return make_layer(GenKind::AddMerge, i, L.args);
    case GenKind::AddMergeDual:
      return make_layer(GenKind::AddSplitDual, i, {below[i + 1].weight, below[i].weight});
    case GenKind::AddSplitDual: return make_layer(GenKind::AddMergeDual, i, L.args);
    case GenKind::AddCross: return make_layer(GenKind::AddCross, i);
    case GenKind::XYCross: return make_layer(GenKind::YXCross, i);
    case GenKind::YXCross: return make_layer(GenKind::XYCross, i);
    case GenKind::XOrientRev: return make_layer(GenKind::XOrientRev, i);
    case GenKind::CoorientRev: return make_layer(GenKind::CoorientRev, i);
    case GenKind::MultMerge: return make_layer(GenKind::MultSplit, i, {below[i].weight, below[i + 1].weight});
    case GenKind::MultSplit: return make_layer(GenKind::MultMerge, i, L.args);
    case GenKind::MultMergeDual:
      return make_layer(GenKind::MultSplitDual, i, {below[i + 1].weight, below[i].weight});
    case GenKind::MultSplitDual: return make_layer(GenKind::MultMergeDual, i, L.args);
    case GenKind::CupX: return make_layer(GenKind::CapX, i, {L.args[0]});
    case GenKind::CupY: return make_layer(GenKind::CapY, i, {L.args[0]});
    case GenKind::CapX:
    case GenKind::CapY: {
      Handed h = kind_sign(below[i].kind) > 0 ? Handed::PM : Handed::MP;
      return make_cup(L.kind == GenKind::CapX ? GenKind::CupX : GenKind::CupY, i, below[i].weight, h);
    }
    case GenKind::Dot: r.payload = negate(L.payload); return r;
  }
  (void)above;
  return r;
}

inline Diagram inverse(const Diagram& d) {
  auto objs = trace(d);
  Diagram r{objs.back(), {}, d.mode};
  for (std::size_t k = d.layers.size(); k-- > 0;) r.layers.push_back(inverse_layer(d.layers[k], objs[k], objs[k + 1]));
  return r;
}

inline bool morphism_exists(const DiagObject& z0, const DiagObject& z1) { return object_weight(z0) == object_weight(z1); }

inline bool equal_morphisms(const Diagram& d1, const Diagram& d2) {
  if (d1.source != d2.source || validate(d1) != validate(d2))
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos,
                          "equal_morphisms: boundaries differ");
  if (d1.mode != d2.mode)
    throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos, "equal_morphisms: modes differ");
  return values_equal(j_invariant(d1), j_invariant(d2));
}

// Twisted 2-cocycle on Aff_1(Q): <(a1,c1),(a2,c2)> = <a1, c1 a2>.
inline PrimeVector aff_cocycle(const AffWeight& w1, const AffWeight& w2) { return symbol(w1.a, w1.c * w2.a); }

// Left-fold merge of X+(p_1) ... X+(p_n) into one line.
inline Diagram merge_fold_diagram(const std::vector<Rational>& p, Mode m = Mode::HExact) {
  if (p.empty()) throw std::invalid_argument("distribution must be nonempty");
  Diagram d;
  d.mode = m;
  for (const auto& x : p) d.source.points.push_back(Xp(x));
  for (std::size_t k = 1; k < p.size(); ++k) d.layers.push_back(make_layer(GenKind::AddMerge, 0));
  return d;
}

inline EntropyScalar shannon_entropy(const std::vector<Rational>& p) {
  return std::get<EntropyScalar>(j_invariant(merge_fold_diagram(p, Mode::HExact)));
}

struct ChainRuleDiagrams {
  Diagram grouped;  // merge each Y_i under its multiplicative line, then merge Z
  Diagram flat;     // move every line across first, then merge X
};

// Sliced versions of the two sides of the chain-rule picture. Each Y_i sits between Y+(p_i) and Y-(p_i).
inline ChainRuleDiagrams chain_rule_diagrams(const std::vector<Rational>& z, const std::vector<std::vector<Rational>>& ys) {
  if (z.size() != ys.size()) throw std::invalid_argument("chain rule: |Ys| must equal |Z|");
  DiagObject src;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 0) throw std::invalid_argument("chain rule diagrams need nonzero Z entries");
    if (ys[i].empty()) throw std::invalid_argument("chain rule: empty Y distribution");
    src.points.push_back(Yp(z[i]));
    for (const auto& q : ys[i]) src.points.push_back(Xp(q));
    src.points.push_back(Ym(z[i]));
  }
  ChainRuleDiagrams out;
  out.grouped = Diagram{src, {}, Mode::HExact};
  out.flat = Diagram{src, {}, Mode::HExact};
  std::size_t total = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::size_t base = i;
    std::size_t k = ys[i].size();
    for (std::size_t t = 1; t < k; ++t) out.grouped.layers.push_back(make_layer(GenKind::AddMerge, base + 1));
    out.grouped.layers.push_back(make_layer(GenKind::XYCross, base));
    out.grouped.layers.push_back(make_layer(GenKind::CapY, base + 1));

    std::size_t fbase = total;
    for (std::size_t t = 0; t < k; ++t) out.flat.layers.push_back(make_layer(GenKind::XYCross, fbase + t));
    out.flat.layers.push_back(make_layer(GenKind::CapY, fbase + k));
    total += k;
  }
  for (std::size_t t = 1; t < z.size(); ++t) out.grouped.layers.push_back(make_layer(GenKind::AddMerge, 0));
  for (std::size_t t = 1; t < total; ++t) out.flat.layers.push_back(make_layer(GenKind::AddMerge, 0));
  return out;
}

inline std::vector<Rational> chain_composite(const std::vector<Rational>& z, const std::vector<std::vector<Rational>>& ys) {
  std::vector<Rational> x;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (const auto& q : ys[i]) x.push_back(z[i] * q);
  return x;
}

inline bool chain_rule_check(const std::vector<Rational>& z, const std::vector<std::vector<Rational>>& ys) {
  if (z.size() != ys.size()) throw std::invalid_argument("chain rule: |Ys| must equal |Z|");
  EntropyScalar lhs = shannon_direct(chain_composite(z, ys));
  EntropyScalar rhs = shannon_direct(z);
  for (std::size_t i = 0; i < z.size(); ++i) rhs += z[i] * shannon_direct(ys[i]);
  if (!(lhs == rhs)) return false;
  if (shannon_entropy(z) != shannon_direct(z)) return false;
  bool nonzero = true;
  for (const auto& x : z) nonzero = nonzero && x != 0;
  if (!nonzero) return true;
  auto ds = chain_rule_diagrams(z, ys);
  if (validate(ds.grouped) != validate(ds.flat)) return false;
  auto jg = std::get<EntropyScalar>(j_invariant(ds.grouped));
  auto jf = std::get<EntropyScalar>(j_invariant(ds.flat));
  return jg == jf && jf == lhs && jg == rhs;
}

inline bool is_finprob(const Diagram& d) {
  for (const auto& p : d.source.points)
    if (p.kind != PointKind::Xplus || p.weight < 0 || p.weight > 1) return false;
  for (const auto& L : d.layers)
    if (L.kind != GenKind::AddMerge && L.kind != GenKind::AddCross) return false;
  std::vector<DiagObject> objs;
  try {
    objs = trace(d);
  } catch (const ValidationError&) {
    return false;
  }
  for (const auto& z : objs) {
    Rational s = 0;
    for (const auto& p : z.points) {
      if (p.kind != PointKind::Xplus) return false;
      s += p.weight;
    }
    if (s != 1) return false;
  }
  return true;
}

}  // namespace entronet
