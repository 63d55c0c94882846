#pragma once

#include "entronet/cohomology.hpp"
#include "entronet/dsl.hpp"
#include "entronet/rewrite.hpp"

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace entronet {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("ENTRONET_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
    }
  }
  return kDefaultSeed;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = seed_from_env()) : gen_(seed) {}

  long long uniform(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(gen_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<long long>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

  Rational rational(long long num = 12, long long den = 12) {
    return Rational(uniform(-num, num), uniform(1, den));
  }
  Rational nonzero(long long num = 12, long long den = 12) {
    Rational r;
    do r = rational(num, den);
    while (r == 0);
    return r;
  }
  Rational positive(long long num = 12, long long den = 12) {
    return Rational(uniform(1, num), uniform(1, den));
  }
  Rational unit_interval_open(long long den = 50) {
    long long d = uniform(2, den);
    return Rational(uniform(1, d - 1), d);
  }
  // Probability vector of length k with positive rational entries.
  std::vector<Rational> distribution(std::size_t k, long long scale = 20) {
    std::vector<long long> w(k);
    long long total = 0;
    for (auto& x : w) total += (x = uniform(1, scale));
    std::vector<Rational> p;
    for (long long x : w) p.push_back(Rational(x, total));
    return p;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Affine diagrams.

struct DiagramShape {
  std::size_t max_strands = 12;
  std::size_t max_layers = 25;
  std::size_t max_dots = 3;
  std::size_t max_source = 6;
  Mode mode = Mode::J;
};

inline BoundaryPoint random_point(Rng& r) {
  switch (r.index(4)) {
    case 0: return Xp(r.rational());
    case 1: return Xm(r.rational());
    case 2: return Yp(r.nonzero(6, 6));
    default: return Ym(r.nonzero(6, 6));
  }
}

inline DiagObject random_object(Rng& r, std::size_t max_points) {
  DiagObject z;
  std::size_t n = r.index(max_points + 1);
  for (std::size_t i = 0; i < n; ++i) z.points.push_back(random_point(r));
  return z;
}

inline JValue random_payload(Rng& r, Mode m) {
  switch (m) {
    case Mode::J: {
      PrimeVector v;
      for (long long p : {2, 3, 5, 7})
        if (r.coin(0.4)) v.add_term(p, r.rational(5, 4));
      if (r.coin(0.5)) v += r.rational(4, 3) * symbol(r.rational(), r.rational());
      return v;
    }
    case Mode::HExact: {
      EntropyScalar e;
      e.constant = r.rational(4, 4);
      e.logpart.add_term(2, r.rational(4, 4));
      if (r.coin()) e.logpart.add_term(3, r.rational(4, 4));
      return e;
    }
    case Mode::HFloat: return static_cast<double>(r.uniform(-1000, 1000)) / 257.0;
  }
  return PrimeVector{};
}

// Candidate layers applicable to z.
inline std::vector<Layer> applicable_layers(Rng& r, const DiagObject& z, const DiagramShape& s, bool allow_dot) {
  std::vector<Layer> out;
  const std::size_t n = z.size();
  bool grow = n + 2 <= s.max_strands;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = z[i];
    if (i + 1 < n) {
      const auto& q = z[i + 1];
      if (p.kind == PointKind::Xplus && q.kind == PointKind::Xplus) out.push_back(make_layer(GenKind::AddMerge, i));
      if (p.kind == PointKind::Xminus && q.kind == PointKind::Xminus) out.push_back(make_layer(GenKind::AddMergeDual, i));
      if (p.kind == PointKind::Yplus && q.kind == PointKind::Yplus) out.push_back(make_layer(GenKind::MultMerge, i));
      if (p.kind == PointKind::Yminus && q.kind == PointKind::Yminus) out.push_back(make_layer(GenKind::MultMergeDual, i));
      if (is_x(p.kind) && is_x(q.kind)) out.push_back(make_layer(GenKind::AddCross, i));
      if (is_y(p.kind) && is_x(q.kind)) out.push_back(make_layer(GenKind::XYCross, i));
      if (is_x(p.kind) && is_y(q.kind)) out.push_back(make_layer(GenKind::YXCross, i));
      if (p.kind != q.kind && is_x(p.kind) == is_x(q.kind) && p.weight == q.weight)
        out.push_back(make_layer(is_x(p.kind) ? GenKind::CapX : GenKind::CapY, i));
    }
    if (grow || n + 1 <= s.max_strands) {
      if (p.kind == PointKind::Xplus || p.kind == PointKind::Xminus) {
        Rational a = r.rational();
        out.push_back(make_layer(p.kind == PointKind::Xplus ? GenKind::AddSplit : GenKind::AddSplitDual, i,
                                 {a, p.weight - a}));
      } else {
        Rational c = r.nonzero(5, 5);
        out.push_back(make_layer(p.kind == PointKind::Yplus ? GenKind::MultSplit : GenKind::MultSplitDual, i,
                                 {c, p.weight / c}));
      }
    }
    if (is_x(p.kind)) out.push_back(make_layer(GenKind::XOrientRev, i));
    else out.push_back(make_layer(GenKind::CoorientRev, i));
  }
  if (grow) {
    std::size_t g = r.index(n + 1);
    Handed h = r.coin() ? Handed::PM : Handed::MP;
    out.push_back(make_cup(GenKind::CupX, g, r.rational(), h));
    out.push_back(make_cup(GenKind::CupY, g, r.nonzero(5, 5), h));
  }
  if (allow_dot) out.push_back(make_dot(r.index(n + 1), random_payload(r, s.mode)));
  return out;
}

inline Diagram random_diagram(Rng& r, const DiagramShape& s = {}) {
  Diagram d;
  d.mode = s.mode;
  d.source = random_object(r, s.max_source);
  DiagObject cur = d.source;
  std::size_t nlayers = r.index(s.max_layers + 1);
  std::size_t dots = 0;
  for (std::size_t k = 0; k < nlayers; ++k) {
    bool allow_dot = dots < s.max_dots && r.coin(0.15);
    auto cands = applicable_layers(r, cur, s, allow_dot);
    if (cands.empty()) break;
    Layer L = cands[r.index(cands.size())];
    if (L.kind == GenKind::Dot) ++dots;
    cur = apply_layer(cur, L, d.mode, k);
    d.layers.push_back(std::move(L));
  }
  return d;
}

// Random diagram starting at a given object.
inline Diagram random_diagram_from(Rng& r, const DiagObject& z, std::size_t layers, const DiagramShape& s = {}) {
  Diagram d{z, {}, s.mode};
  DiagObject cur = z;
  for (std::size_t k = 0; k < layers; ++k) {
    auto cands = applicable_layers(r, cur, s, false);
    if (cands.empty()) break;
    Layer L = cands[r.index(cands.size())];
    cur = apply_layer(cur, L, d.mode, k);
    d.layers.push_back(std::move(L));
  }
  return d;
}

// A diagram with a site for the named rule at the returned layer index.
struct RuleSite {
  Diagram diagram;
  std::size_t at = 0;
};

namespace detail {

inline std::vector<BoundaryPoint> filler(Rng& r, std::size_t max) {
  std::vector<BoundaryPoint> v;
  std::size_t n = r.index(max + 1);
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_point(r));
  return v;
}

// left ++ core ++ right, then the pattern at offset |left|, then a random suffix.
inline RuleSite assemble_site(Rng& r, const std::vector<BoundaryPoint>& core,
                              const std::function<std::vector<Layer>(std::size_t off, const DiagObject& z)>& pattern,
                              Mode mode) {
  auto left = filler(r, 3), right = filler(r, 3);
  DiagObject z;
  z.points = left;
  z.points.insert(z.points.end(), core.begin(), core.end());
  z.points.insert(z.points.end(), right.begin(), right.end());
  DiagramShape shape;
  shape.mode = mode;
  Diagram d{z, {}, mode};
  // prefix layers act only on the right filler so the core stays in place
  std::size_t off = left.size();
  std::size_t right_start = off + core.size();
  DiagObject cur = z;
  std::size_t npre = r.index(3);
  for (std::size_t k = 0; k < npre; ++k) {
    DiagObject tail;
    tail.points.assign(cur.points.begin() + right_start, cur.points.end());
    auto cands = applicable_layers(r, tail, shape, mode != Mode::J || r.coin(0.5));
    if (cands.empty()) break;
    Layer L = cands[r.index(cands.size())];
    L.pos += right_start;
    cur = apply_layer(cur, L, mode);
    d.layers.push_back(L);
  }
  RuleSite site;
  site.at = d.layers.size();
  for (const auto& L : pattern(off, cur)) {
    cur = apply_layer(cur, L, mode);
    d.layers.push_back(L);
  }
  std::size_t nsuf = r.index(4);
  for (std::size_t k = 0; k < nsuf; ++k) {
    auto cands = applicable_layers(r, cur, shape, r.coin(0.2));
    if (cands.empty()) break;
    Layer L = cands[r.index(cands.size())];
    cur = apply_layer(cur, L, mode);
    d.layers.push_back(L);
  }
  site.diagram = d;
  return site;
}

}  // namespace detail

inline RuleSite sample_site(Rng& r, const std::string& rule, Mode mode = Mode::J) {
  using detail::assemble_site;
  auto a = [&] { return r.rational(); };
  auto c = [&] { return r.nonzero(5, 5); };
  auto y = [&]() -> BoundaryPoint { return r.coin() ? Yp(c()) : Ym(c()); };
  auto L = [](GenKind k, std::size_t p, std::vector<Rational> args = {}) { return make_layer(k, p, std::move(args)); };
  if (rule == "associativity") {
    if (r.coin())
      return assemble_site(r, {Xp(a()), Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject&) {
        return std::vector<Layer>{L(GenKind::AddMerge, o), L(GenKind::AddMerge, o)};
      }, mode);
    return assemble_site(r, {Xp(a()), Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject&) {
      return std::vector<Layer>{L(GenKind::AddMerge, o + 1), L(GenKind::AddMerge, o)};
    }, mode);
  }
  if (rule == "merge_split_cancel") {
    switch (r.index(4)) {
      case 0:
        return assemble_site(r, {Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject& z) {
          return std::vector<Layer>{L(GenKind::AddMerge, o), L(GenKind::AddSplit, o, {z[o].weight, z[o + 1].weight})};
        }, mode);
      case 1: {
        Rational u = a(), w = a();
        return assemble_site(r, {Xp(u + w)}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::AddSplit, o, {u, w}), L(GenKind::AddMerge, o)};
        }, mode);
      }
      case 2:
        return assemble_site(r, {Xm(a()), Xm(a())}, [&](std::size_t o, const DiagObject& z) {
          return std::vector<Layer>{L(GenKind::AddMergeDual, o),
                                    L(GenKind::AddSplitDual, o, {z[o + 1].weight, z[o].weight})};
        }, mode);
      default:
        return assemble_site(r, {Yp(c()), Yp(c())}, [&](std::size_t o, const DiagObject& z) {
          return std::vector<Layer>{L(GenKind::MultMerge, o), L(GenKind::MultSplit, o, {z[o].weight, z[o + 1].weight})};
        }, mode);
    }
  }
  if (rule == "curl_removal") {
    Rational w = a();
    bool plus = r.coin();
    BoundaryPoint p = plus ? Xp(w) : Xm(w);
    if (r.coin())
      return assemble_site(r, {p}, [&](std::size_t o, const DiagObject&) {
        // strand at o; cup to its right, cross with the left leg, cap
        Handed h = plus ? Handed::MP : Handed::PM;
        return std::vector<Layer>{make_cup(GenKind::CupX, o + 1, w, h), L(GenKind::AddCross, o), L(GenKind::CapX, o)};
      }, mode);
    return assemble_site(r, {p}, [&](std::size_t o, const DiagObject&) {
      Handed h = plus ? Handed::PM : Handed::MP;
      return std::vector<Layer>{make_cup(GenKind::CupX, o, w, h), L(GenKind::AddCross, o + 1), L(GenKind::CapX, o + 1)};
    }, mode);
  }
  if (rule == "crossing_as_merge_split") {
    if (r.coin())
      return assemble_site(r, {Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject&) {
        return std::vector<Layer>{L(GenKind::AddCross, o)};
      }, mode);
    return assemble_site(r, {Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject& z) {
      return std::vector<Layer>{L(GenKind::AddMerge, o), L(GenKind::AddSplit, o, {z[o + 1].weight, z[o].weight})};
    }, mode);
  }
  if (rule == "reidemeister2") {
    switch (r.index(3)) {
      case 0:
        return assemble_site(r, {r.coin() ? Xp(a()) : Xm(a()), r.coin() ? Xp(a()) : Xm(a())},
                             [&](std::size_t o, const DiagObject&) {
                               return std::vector<Layer>{L(GenKind::AddCross, o), L(GenKind::AddCross, o)};
                             }, mode);
      case 1:
        return assemble_site(r, {y(), Xp(a())}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::XYCross, o), L(GenKind::YXCross, o)};
        }, mode);
      default:
        return assemble_site(r, {Xm(a()), y()}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::YXCross, o), L(GenKind::XYCross, o)};
        }, mode);
    }
  }
  if (rule == "skein") {
    if (r.coin())
      return assemble_site(r, {Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject& z) {
        Rational s = z[o].weight + z[o + 1].weight, t = a();
        return std::vector<Layer>{L(GenKind::AddMerge, o), L(GenKind::AddSplit, o, {t, s - t})};
      }, mode);
    Rational u = a(), w = a();
    return assemble_site(r, {Xp(u + w), Xp(a())}, [&](std::size_t o, const DiagObject&) {
      return std::vector<Layer>{L(GenKind::AddSplit, o, {u, w}), L(GenKind::AddMerge, o + 1)};
    }, mode);
  }
  if (rule == "zero_line_removal") {
    switch (r.index(3)) {
      case 0: {
        Rational u = a();
        return assemble_site(r, {Xp(u), Xp(a())}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::AddSplit, o, {u, 0}), L(GenKind::AddMerge, o + 1)};
        }, mode);
      }
      case 1: {
        Rational u = a();
        return assemble_site(r, {Xp(a()), Xp(u)}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::AddSplit, o + 1, {0, u}), L(GenKind::AddMerge, o)};
        }, mode);
      }
      default:
        return assemble_site(r, {r.coin() ? Xp(a()) : Xm(a())}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::XOrientRev, o), L(GenKind::XOrientRev, o)};
        }, mode);
    }
  }
  if (rule == "unit_mult_line_removal") {
    switch (r.index(3)) {
      case 0: {
        Rational u = c();
        return assemble_site(r, {Yp(u), Yp(c())}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::MultSplit, o, {u, 1}), L(GenKind::MultMerge, o + 1)};
        }, mode);
      }
      case 1: {
        Rational u = c();
        return assemble_site(r, {Yp(c()), Yp(u)}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::MultSplit, o + 1, {1, u}), L(GenKind::MultMerge, o)};
        }, mode);
      }
      default:
        return assemble_site(r, {y()}, [&](std::size_t o, const DiagObject&) {
          return std::vector<Layer>{L(GenKind::CoorientRev, o), L(GenKind::CoorientRev, o)};
        }, mode);
    }
  }
  if (rule == "vertex_past_coorient_rev") {
    Rational u = a(), w = a();
    bool yfirst = r.coin();
    std::vector<BoundaryPoint> core = yfirst ? std::vector<BoundaryPoint>{y(), Xp(u), Xp(w)}
                                             : std::vector<BoundaryPoint>{Xp(u), Xp(w), y()};
    return assemble_site(r, core, [&](std::size_t o, const DiagObject&) {
      std::size_t yp = yfirst ? o : o + 2, xp = yfirst ? o + 1 : o;
      if (r.coin()) return std::vector<Layer>{L(GenKind::CoorientRev, yp), L(GenKind::AddMerge, xp)};
      std::size_t yp2 = yfirst ? o : o + 1;
      return std::vector<Layer>{L(GenKind::AddMerge, xp), L(GenKind::CoorientRev, yp2)};
    }, mode);
  }
  if (rule == "crossing_exchange") {
    BoundaryPoint x1 = r.coin() ? Xp(a()) : Xm(a()), x2 = r.coin() ? Xp(a()) : Xm(a());
    if (r.coin())
      return assemble_site(r, {y(), x1, x2}, [&](std::size_t o, const DiagObject&) {
        return std::vector<Layer>{L(GenKind::XYCross, o), L(GenKind::XYCross, o + 1), L(GenKind::AddCross, o)};
      }, mode);
    return assemble_site(r, {y(), x1, x2}, [&](std::size_t o, const DiagObject&) {
      return std::vector<Layer>{L(GenKind::AddCross, o + 1), L(GenKind::XYCross, o), L(GenKind::XYCross, o + 1)};
    }, mode);
  }
  if (rule == "mult_through_merge") {
    if (r.coin())
      return assemble_site(r, {y(), Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject&) {
        return std::vector<Layer>{L(GenKind::AddMerge, o + 1), L(GenKind::XYCross, o)};
      }, mode);
    return assemble_site(r, {y(), Xp(a()), Xp(a())}, [&](std::size_t o, const DiagObject&) {
      return std::vector<Layer>{L(GenKind::XYCross, o), L(GenKind::XYCross, o + 1), L(GenKind::AddMerge, o)};
    }, mode);
  }
  if (rule == "interchange") {
    // any two layers on disjoint strands
    for (;;) {
      Diagram d = random_diagram(r, DiagramShape{10, 12, 2, 6, mode});
      std::vector<std::size_t> sites;
      const auto& R = find_rule("interchange");
      for (std::size_t k = 0; k + 1 < d.layers.size(); ++k)
        if (R.matcher(d, k)) sites.push_back(k);
      if (!sites.empty()) return RuleSite{d, sites[r.index(sites.size())]};
    }
  }
  throw std::invalid_argument("no site sampler for rule " + rule);
}

// ---------------------------------------------------------------------------
// G-networks.

inline GLayer g_layer(GKind k, std::size_t pos) {
  GLayer l;
  l.kind = k;
  l.pos = pos;
  return l;
}

// Random walk from the empty object, closed off at the end.
inline GDiagram random_closed_gdiagram(Rng& r, const GModule& U, std::size_t steps = 14, std::size_t max_strands = 8,
                                       bool dots = false) {
  const Group& G = U.group();
  const int n = G.order();
  GDiagram d;
  std::vector<GStrand> cur;
  auto push = [&](GLayer L) {
    cur = g_apply(U, cur, L, d.layers.size());
    d.layers.push_back(std::move(L));
  };
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<GLayer> cands;
    std::size_t m = cur.size();
    if (m + 2 <= max_strands) {
      GLayer c = g_layer(GKind::Cup, r.index(m + 1));
      c.s = static_cast<int>(r.index(n));
      c.hand = r.coin() ? Handed::PM : Handed::MP;
      cands.push_back(c);
    }
    for (std::size_t i = 0; i < m; ++i) {
      cands.push_back(g_layer(GKind::Flip, i));
      if (m + 1 <= max_strands) {
        GLayer s = g_layer(GKind::Split, i);
        s.s = static_cast<int>(r.index(n));
        // solve for the second label
        int g = cur[i].g;
        s.t = cur[i].coor > 0 ? G.mul(G.inv(s.s), g) : G.mul(g, G.inv(s.s));
        cands.push_back(s);
        GLayer s2 = g_layer(GKind::Split2, i);
        s2.e1 = r.coin() ? 1 : -1;
        s2.e2 = r.coin() ? 1 : -1;
        int a = static_cast<int>(r.index(n));
        int e = cur[i].coor;
        // type-I labels (a, b) with the requested final co-orientations
        int b = e > 0 ? G.mul(G.inv(a), g) : G.mul(g, G.inv(a));
        s2.s = s2.e1 == e ? a : G.inv(a);
        s2.t = s2.e2 == e ? b : G.inv(b);
        cands.push_back(s2);
      }
      if (i + 1 < m) {
        if (cur[i].coor == cur[i + 1].coor) cands.push_back(g_layer(GKind::Merge, i));
        GLayer m2 = g_layer(GKind::Merge2, i);
        m2.e1 = r.coin() ? 1 : -1;
        cands.push_back(m2);
        if (cur[i].g == cur[i + 1].g && cur[i].coor != cur[i + 1].coor) cands.push_back(g_layer(GKind::Cap, i));
      }
    }
    if (dots) {
      GLayer dl = g_layer(GKind::Dot, r.index(m + 1));
      dl.dot = U.element(r.uniform(0, U.size() - 1));
      cands.push_back(dl);
    }
    if (cands.empty()) break;
    push(cands[r.index(cands.size())]);
  }
  // close off
  while (!cur.empty()) {
    if (cur.size() == 1) {
      GLayer s = g_layer(GKind::Split, 0);
      s.s = 0;
      s.t = 0;
      push(s);
      continue;
    }
    if (cur.size() > 2) {
      if (cur[0].coor != cur[1].coor) push(g_layer(GKind::Flip, 1));
      push(g_layer(GKind::Merge, 0));
      continue;
    }
    if (cur[0].coor == cur[1].coor) push(g_layer(GKind::Flip, 1));
    push(g_layer(GKind::Cap, 0));
  }
  return d;
}

// Random normalized 2-cocycle: combination of solver representatives shifted by a random coboundary.
inline Cochain2 random_cocycle2(Rng& r, const GModule& U, const HSolver& S) {
  Cochain2 c = zero_cochain2(U);
  for (std::size_t i = 0; i < S.reps2().size(); ++i)
    c = add_cochains(U, c, scale_cochain(U, r.uniform(0, S.invariants()[i] - 1), S.reps2()[i]));
  Cochain1 b = zero_cochain1(U);
  for (int g = 1; g < U.group().order(); ++g) b.values[g] = U.element(r.uniform(0, U.size() - 1));
  return shift_by_coboundary(U, c, b);
}

inline Cochain1 random_cocycle1(Rng& r, const GModule& U, const HSolver& S) {
  Cochain1 f = zero_cochain1(U);
  for (std::size_t i = 0; i < S.reps1().size(); ++i)
    for (long long k = r.uniform(0, S.invariants()[i] - 1); k > 0; --k) f = add_cochains(U, f, S.reps1()[i]);
  return add_cochains(U, f, coboundary1(U, U.element(r.uniform(0, U.size() - 1))));
}

// Random declarations covering every construct of the text format.
inline SourceFile random_source(Rng& r) {
  SourceFile f;
  int serial = 0;
  auto fresh = [&](const char* stem) { return std::string(stem) + std::to_string(serial++); };
  std::size_t nd = 1 + r.index(3);
  for (std::size_t k = 0; k < nd; ++k) {
    DiagramShape shape;
    shape.max_layers = 8;
    shape.max_strands = 6;
    shape.mode = static_cast<Mode>(r.index(3));
    Diagram d = random_diagram(r, shape);
    ObjectDecl src{fresh("Z"), d.source}, tgt{fresh("Z"), validate(d)};
    f.decls.push_back(src);
    f.decls.push_back(tgt);
    f.decls.push_back(DiagramDecl{fresh("D"), src.name, tgt.name, d, tgt.object});
  }
  if (r.coin(0.3)) f.decls.push_back(ObjectDecl{fresh("E"), {}});
  std::size_t ng = r.index(3);
  for (std::size_t k = 0; k < ng; ++k) {
    GroupDecl g;
    g.name = fresh("G");
    switch (r.index(3)) {
      case 0:
        g.form = GroupDecl::Form::Cyclic;
        g.param = static_cast<int>(r.uniform(1, 6));
        g.group = Group::cyclic(g.param);
        break;
      case 1:
        g.form = GroupDecl::Form::Aff1ModP;
        g.param = r.coin() ? 2 : 3;
        g.group = Group::aff1modp(g.param);
        break;
      default:
        g.form = GroupDecl::Form::Table;
        g.group = Group(Group::cyclic(static_cast<int>(r.uniform(1, 4))).table());
        break;
    }
    g.group.set_label(g.name);
    f.decls.push_back(g);
    bool cyclic = g.form != GroupDecl::Form::Aff1ModP;
    GModule U = cyclic && g.group.order() % 2 == 0 && r.coin() ? sign_module(g.group, {r.uniform(2, 5)})
                                                      : GModule(g.group, {r.uniform(1, 5), r.uniform(1, 3)});
    ModuleDecl m{fresh("U"), g.name, U};
    f.decls.push_back(m);
    Cocycle2Decl c{fresh("c"), g.name, m.name, zero_cochain2(U)};
    for (int a = 0; a < c.values.n; ++a)
      for (int b = 0; b < c.values.n; ++b)
        if (r.coin(0.3)) c.values.at(a, b) = U.element(r.uniform(0, static_cast<long long>(U.size()) - 1));
    f.decls.push_back(c);
    Cocycle1Decl c1{fresh("f"), g.name, m.name, zero_cochain1(U)};
    for (auto& v : c1.values.values)
      if (r.coin(0.5)) v = U.element(r.uniform(0, static_cast<long long>(U.size()) - 1));
    f.decls.push_back(c1);
    f.decls.push_back(GDiagramDecl{fresh("N"), m.name, random_closed_gdiagram(r, U, 8, 6, true)});
  }
  return f;
}

}  // namespace entronet
