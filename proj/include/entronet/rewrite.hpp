#pragma once

#include "entronet/affine.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entronet {

struct RuleNotApplicable : std::runtime_error {
  RuleNotApplicable(const std::string& rule, std::size_t at)
      : std::runtime_error("rule " + rule + " does not apply at layer " + std::to_string(at)) {}
};

// A local move: replaces `consumed` layers starting at the matched index.
struct Replacement {
  std::size_t consumed = 0;
  std::vector<Layer> layers;
};

// objs[k] is the object below layer k.
using RuleFn = std::function<std::optional<Replacement>(const std::vector<DiagObject>& objs,
                                                        const std::vector<Layer>& layers, std::size_t at)>;

struct RewriteRule {
  std::string name;
  std::function<bool(const Diagram&, std::size_t)> matcher;
  std::function<Diagram(const Diagram&, std::size_t)> transform;
};

namespace detail {

inline bool is_kind(const std::vector<Layer>& ls, std::size_t k, GenKind g) { return k < ls.size() && ls[k].kind == g; }

inline Layer merge_with(GenKind g, std::size_t pos, const DiagObject& below) {
  return make_layer(g, pos, {below[pos].weight, below[pos + 1].weight});
}

inline std::optional<Replacement> associativity(const std::vector<DiagObject>& o, const std::vector<Layer>& l,
                                                std::size_t k) {
  if (!is_kind(l, k, GenKind::AddMerge) || !is_kind(l, k + 1, GenKind::AddMerge)) return std::nullopt;
  std::size_t i = l[k].pos;
  const DiagObject& z = o[k];
  if (l[k + 1].pos == i) {
    // ((a,b),c) -> (a,(b,c))
    Rational a = z[i].weight, b = z[i + 1].weight, c = z[i + 2].weight;
    return Replacement{2, {make_layer(GenKind::AddMerge, i + 1, {b, c}), make_layer(GenKind::AddMerge, i, {a, b + c})}};
  }
  if (i > 0 && l[k + 1].pos == i - 1) {
    // (a,(b,c)) -> ((a,b),c)
    std::size_t h = i - 1;
    Rational a = z[h].weight, b = z[h + 1].weight, c = z[h + 2].weight;
    return Replacement{2, {make_layer(GenKind::AddMerge, h, {a, b}), make_layer(GenKind::AddMerge, h, {a + b, c})}};
  }
  return std::nullopt;
}

inline std::optional<Replacement> merge_split_cancel(const std::vector<DiagObject>& o, const std::vector<Layer>& l,
                                                     std::size_t k) {
  if (k + 1 >= l.size() || l[k].pos != l[k + 1].pos) return std::nullopt;
  std::size_t i = l[k].pos;
  const DiagObject& z = o[k];
  const DiagObject& top = o[k + 2];
  GenKind a = l[k].kind, b = l[k + 1].kind;
  auto pair_is = [&](GenKind x, GenKind y) { return (a == x && b == y) || (a == y && b == x); };
  bool ok = pair_is(GenKind::AddMerge, GenKind::AddSplit) || pair_is(GenKind::AddMergeDual, GenKind::AddSplitDual) ||
            pair_is(GenKind::MultMerge, GenKind::MultSplit) || pair_is(GenKind::MultMergeDual, GenKind::MultSplitDual);
  if (!ok) return std::nullopt;
  if (z != top) return std::nullopt;
  (void)i;
  return Replacement{2, {}};
}

inline std::optional<Replacement> curl_removal(const std::vector<DiagObject>& o, const std::vector<Layer>& l,
                                               std::size_t k) {
  if (!is_kind(l, k, GenKind::CupX) || !is_kind(l, k + 1, GenKind::AddCross) || !is_kind(l, k + 2, GenKind::CapX))
    return std::nullopt;
  std::size_t g = l[k].pos;
  if (g >= 1 && l[k + 1].pos == g - 1 && l[k + 2].pos == g - 1) return Replacement{3, {}};
  if (l[k + 1].pos == g + 1 && l[k + 2].pos == g + 1) return Replacement{3, {}};
  (void)o;
  return std::nullopt;
}

inline std::optional<Replacement> crossing_as_merge_split(const std::vector<DiagObject>& o, const std::vector<Layer>& l,
                                                          std::size_t k) {
  if (k >= l.size()) return std::nullopt;
  std::size_t i = l[k].pos;
  const DiagObject& z = o[k];
  if (l[k].kind == GenKind::AddCross && z[i].kind == PointKind::Xplus && z[i + 1].kind == PointKind::Xplus) {
    Rational a = z[i].weight, b = z[i + 1].weight;
    return Replacement{1, {make_layer(GenKind::AddMerge, i, {a, b}), make_layer(GenKind::AddSplit, i, {b, a})}};
  }
  if (l[k].kind == GenKind::AddMerge && is_kind(l, k + 1, GenKind::AddSplit) && l[k + 1].pos == i &&
      l[k + 1].args[0] == z[i + 1].weight && l[k + 1].args[1] == z[i].weight)
    return Replacement{2, {make_layer(GenKind::AddCross, i)}};
  return std::nullopt;
}

inline std::optional<Replacement> reidemeister2(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                                std::size_t k) {
  if (k + 1 >= l.size() || l[k].pos != l[k + 1].pos) return std::nullopt;
  GenKind a = l[k].kind, b = l[k + 1].kind;
  if ((a == GenKind::AddCross && b == GenKind::AddCross) || (a == GenKind::XYCross && b == GenKind::YXCross) ||
      (a == GenKind::YXCross && b == GenKind::XYCross))
    return Replacement{2, {}};
  return std::nullopt;
}

inline std::optional<Replacement> skein(const std::vector<DiagObject>& o, const std::vector<Layer>& l, std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  const DiagObject& z = o[k];
  std::size_t i = l[k].pos;
  if (l[k].kind == GenKind::AddMerge && l[k + 1].kind == GenKind::AddSplit && l[k + 1].pos == i) {
    Rational a = z[i].weight, b = z[i + 1].weight, c = l[k + 1].args[0];
    return Replacement{2, {make_layer(GenKind::AddSplit, i, {c, a - c}), make_layer(GenKind::AddMerge, i + 1, {a - c, b})}};
  }
  if (l[k].kind == GenKind::AddSplit && l[k + 1].kind == GenKind::AddMerge && l[k + 1].pos == i + 1) {
    Rational c = l[k].args[0], e = l[k].args[1], b = z[i + 1].weight;
    return Replacement{2, {make_layer(GenKind::AddMerge, i, {c + e, b}), make_layer(GenKind::AddSplit, i, {c, e + b})}};
  }
  return std::nullopt;
}

inline std::optional<Replacement> zero_line_removal(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                                    std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  std::size_t i = l[k].pos;
  if (l[k].kind == GenKind::AddSplit && l[k].args[1] == 0 && l[k + 1].kind == GenKind::AddMerge && l[k + 1].pos == i + 1)
    return Replacement{2, {}};
  if (l[k].kind == GenKind::AddSplit && l[k].args[0] == 0 && i > 0 && l[k + 1].kind == GenKind::AddMerge &&
      l[k + 1].pos == i - 1)
    return Replacement{2, {}};
  if (l[k].kind == GenKind::XOrientRev && l[k + 1].kind == GenKind::XOrientRev && l[k + 1].pos == i)
    return Replacement{2, {}};
  return std::nullopt;
}

inline std::optional<Replacement> unit_mult_line_removal(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                                         std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  std::size_t i = l[k].pos;
  if (l[k].kind == GenKind::MultSplit && l[k].args[1] == 1 && l[k + 1].kind == GenKind::MultMerge && l[k + 1].pos == i + 1)
    return Replacement{2, {}};
  if (l[k].kind == GenKind::MultSplit && l[k].args[0] == 1 && i > 0 && l[k + 1].kind == GenKind::MultMerge &&
      l[k + 1].pos == i - 1)
    return Replacement{2, {}};
  if (l[k].kind == GenKind::CoorientRev && l[k + 1].kind == GenKind::CoorientRev && l[k + 1].pos == i)
    return Replacement{2, {}};
  return std::nullopt;
}

// Swaps two adjacent layers acting on disjoint strand ranges.
inline std::optional<Replacement> commute_pair(const std::vector<Layer>& l, std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  Layer L1 = l[k], L2 = l[k + 1];
  auto [n1, m1] = layer_arity(L1.kind);
  auto [n2, m2] = layer_arity(L2.kind);
  if (L2.pos + n2 <= L1.pos && !(n2 == 0 && L2.pos == L1.pos && m1 > 0)) {
    Layer a = L2, b = L1;
    b.pos = L1.pos - n2 + m2;
    return Replacement{2, {a, b}};
  }
  if (L2.pos >= L1.pos + m1 && !(n2 == 0 && L2.pos == L1.pos + m1 && m1 > 0)) {
    Layer a = L2, b = L1;
    a.pos = L2.pos - m1 + n1;
    return Replacement{2, {a, b}};
  }
  return std::nullopt;
}

inline bool is_additive_vertex(GenKind g) {
  return g == GenKind::AddMerge || g == GenKind::AddSplit || g == GenKind::AddMergeDual || g == GenKind::AddSplitDual;
}

inline std::optional<Replacement> vertex_past_coorient_rev(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                                           std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  bool ok = (l[k].kind == GenKind::CoorientRev && is_additive_vertex(l[k + 1].kind)) ||
            (is_additive_vertex(l[k].kind) && l[k + 1].kind == GenKind::CoorientRev);
  if (!ok) return std::nullopt;
  return commute_pair(l, k);
}

inline std::optional<Replacement> interchange(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                              std::size_t k) {
  return commute_pair(l, k);
}

inline std::optional<Replacement> crossing_exchange(const std::vector<DiagObject>&, const std::vector<Layer>& l,
                                                    std::size_t k) {
  if (k + 2 >= l.size()) return std::nullopt;
  std::size_t i = l[k].pos;
  if (l[k].kind == GenKind::XYCross && l[k + 1].kind == GenKind::XYCross && l[k + 2].kind == GenKind::AddCross &&
      l[k + 1].pos == i + 1 && l[k + 2].pos == i)
    return Replacement{3, {make_layer(GenKind::AddCross, i + 1), make_layer(GenKind::XYCross, i),
                           make_layer(GenKind::XYCross, i + 1)}};
  if (l[k].kind == GenKind::AddCross && l[k + 1].kind == GenKind::XYCross && l[k + 2].kind == GenKind::XYCross && i >= 1 &&
      l[k + 1].pos == i - 1 && l[k + 2].pos == i)
    return Replacement{3, {make_layer(GenKind::XYCross, i - 1), make_layer(GenKind::XYCross, i),
                           make_layer(GenKind::AddCross, i - 1)}};
  return std::nullopt;
}

inline std::optional<Replacement> mult_through_merge(const std::vector<DiagObject>& o, const std::vector<Layer>& l,
                                                     std::size_t k) {
  if (k + 1 >= l.size()) return std::nullopt;
  std::size_t i = l[k].pos;
  if (l[k].kind == GenKind::AddMerge && l[k + 1].kind == GenKind::XYCross && i >= 1 && l[k + 1].pos == i - 1) {
    std::size_t h = i - 1;
    const DiagObject& z = o[k];
    Rational s = y_factor(z[h]);
    return Replacement{2, {make_layer(GenKind::XYCross, h), make_layer(GenKind::XYCross, h + 1),
                           make_layer(GenKind::AddMerge, h, {s * z[i].weight, s * z[i + 1].weight})}};
  }
  if (k + 2 < l.size() && l[k].kind == GenKind::XYCross && l[k + 1].kind == GenKind::XYCross &&
      l[k + 2].kind == GenKind::AddMerge && l[k + 1].pos == i + 1 && l[k + 2].pos == i) {
    const DiagObject& z = o[k];
    if (!is_x(z[i + 1].kind) || z[i + 1].kind != PointKind::Xplus || z[i + 2].kind != PointKind::Xplus)
      return std::nullopt;
    return Replacement{3, {make_layer(GenKind::AddMerge, i + 1, {z[i + 1].weight, z[i + 2].weight}),
                           make_layer(GenKind::XYCross, i)}};
  }
  return std::nullopt;
}

inline RewriteRule make_rule(const std::string& name, RuleFn fn) {
  auto site = [fn](const Diagram& d, std::size_t at) -> std::optional<Replacement> {
    if (at >= d.layers.size()) return std::nullopt;
    auto objs = trace(d);
    return fn(objs, d.layers, at);
  };
  RewriteRule r;
  r.name = name;
  r.matcher = [site](const Diagram& d, std::size_t at) { return site(d, at).has_value(); };
  r.transform = [site, name](const Diagram& d, std::size_t at) {
    auto rep = site(d, at);
    if (!rep) throw RuleNotApplicable(name, at);
    Diagram out = d;
    out.layers.erase(out.layers.begin() + at, out.layers.begin() + at + rep->consumed);
    out.layers.insert(out.layers.begin() + at, rep->layers.begin(), rep->layers.end());
    return out;
  };
  return r;
}

}  // namespace detail

inline const std::vector<RewriteRule>& rule_catalog() {
  static const std::vector<RewriteRule> rules = {
      detail::make_rule("associativity", detail::associativity),
      detail::make_rule("merge_split_cancel", detail::merge_split_cancel),
      detail::make_rule("curl_removal", detail::curl_removal),
      detail::make_rule("crossing_as_merge_split", detail::crossing_as_merge_split),
      detail::make_rule("reidemeister2", detail::reidemeister2),
      detail::make_rule("skein", detail::skein),
      detail::make_rule("zero_line_removal", detail::zero_line_removal),
      detail::make_rule("unit_mult_line_removal", detail::unit_mult_line_removal),
      detail::make_rule("vertex_past_coorient_rev", detail::vertex_past_coorient_rev),
      detail::make_rule("crossing_exchange", detail::crossing_exchange),
      detail::make_rule("mult_through_merge", detail::mult_through_merge),
      detail::make_rule("interchange", detail::interchange),
  };
  return rules;
}

inline const RewriteRule& find_rule(const std::string& name) {
  for (const auto& r : rule_catalog())
    if (r.name == name) return r;
  throw std::invalid_argument("unknown rewrite rule: " + name);
}

inline std::vector<std::size_t> matching_sites(const Diagram& d, const RewriteRule& r) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < d.layers.size(); ++k)
    if (r.matcher(d, k)) out.push_back(k);
  return out;
}

inline Diagram apply(const Diagram& d, const RewriteRule& rule, std::size_t at) {
  if (!rule.matcher(d, at)) throw RuleNotApplicable(rule.name, at);
  Diagram out = rule.transform(d, at);
#ifndef NDEBUG
  if (out.source != d.source || validate(out) != validate(d) || !values_equal(j_invariant(out), j_invariant(d)))
    throw std::logic_error("rule " + rule.name + " changed the boundary or the invariant");
#endif
  return out;
}

// Layers taking z to the canonical object [X+(a)]? [Y+(c)]? with (a,c) = w(z).
inline std::vector<Layer> reduction_layers(const DiagObject& z) {
  std::vector<Layer> out;
  DiagObject cur = z;
  auto push = [&](Layer L) {
    cur = apply_layer(cur, L, Mode::J);
    out.push_back(std::move(L));
  };
  std::size_t nx = 0;
  for (std::size_t k = 0; k < cur.size(); ++k) {
    if (!is_x(cur[k].kind)) continue;
    for (std::size_t p = k; p-- > nx;) push(make_layer(GenKind::XYCross, p));
    ++nx;
  }
  for (std::size_t k = 0; k < nx; ++k)
    if (cur[k].kind == PointKind::Xminus) push(make_layer(GenKind::XOrientRev, k));
  for (std::size_t k = 1; k < nx; ++k) push(make_layer(GenKind::AddMerge, 0, {cur[0].weight, cur[1].weight}));
  std::size_t y0 = nx > 0 ? 1 : 0;
  std::size_t ny = cur.size() - y0;
  for (std::size_t k = y0; k < cur.size(); ++k)
    if (cur[k].kind == PointKind::Yminus) push(make_layer(GenKind::CoorientRev, k));
  for (std::size_t k = 1; k < ny; ++k) push(make_layer(GenKind::MultMerge, y0, {cur[y0].weight, cur[y0 + 1].weight}));
  if (nx > 0 && cur[0].weight == 0) {
    push(make_layer(GenKind::AddSplit, 0, {0, 0}));
    push(make_layer(GenKind::XOrientRev, 1));
    push(make_layer(GenKind::CapX, 0, {0}));
    y0 = 0;
  }
  if (ny > 0 && cur[y0].weight == 1) {
    push(make_layer(GenKind::MultSplit, y0, {1, 1}));
    push(make_layer(GenKind::CoorientRev, y0 + 1));
    push(make_layer(GenKind::CapY, y0, {1}));
  }
  return out;
}

inline DiagObject middle_object(const AffWeight& w) {
  DiagObject m;
  if (w.a != 0) m.points.push_back(Xp(w.a));
  if (w.c != 1) m.points.push_back(Yp(w.c));
  return m;
}

// Dotless canonical diagram z0 -> M -> z1.
inline Diagram canonical_diagram(const DiagObject& z0, const DiagObject& z1, Mode mode) {
  if (!morphism_exists(z0, z1))
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos,
                          "no morphism between objects of different weight");
  Diagram down{z0, reduction_layers(z0), mode};
  Diagram up = inverse(Diagram{z1, reduction_layers(z1), mode});
  Diagram r = down;
  r.layers.insert(r.layers.end(), up.layers.begin(), up.layers.end());
  return r;
}

inline Diagram normalize(const Diagram& d) {
  DiagObject target = validate(d);
  Diagram canon = canonical_diagram(d.source, target, d.mode);
  if (d.layers == canon.layers) return d;
  if (!d.layers.empty() && d.layers.front().kind == GenKind::Dot && d.layers.front().pos == 0 &&
      !is_zero_value(d.layers.front().payload) &&
      std::equal(d.layers.begin() + 1, d.layers.end(), canon.layers.begin(), canon.layers.end()))
    return d;
  JValue residual = difference(j_invariant(d), j_invariant(canon));
  if (!is_zero_value(residual)) canon.layers.insert(canon.layers.begin(), make_dot(0, residual));
  return canon;
}

}  // namespace entronet
