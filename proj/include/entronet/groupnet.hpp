#pragma once

#include "entronet/affine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace entronet {

struct GroupError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Finite group given by its multiplication table; element 0 is the identity.
class Group {
 public:
  Group() : Group(std::vector<std::vector<int>>{{0}}) {}

  explicit Group(std::vector<std::vector<int>> table, std::vector<std::string> names = {}) : table_(std::move(table)) {
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw GroupError("group table is empty");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw GroupError("group table is not square");
      for (int v : row)
        if (v < 0 || v >= n) throw GroupError("group table entry out of range");
    }
    for (int g = 0; g < n; ++g)
      if (table_[0][g] != g || table_[g][0] != g) throw GroupError("element 0 is not the identity");
    inv_.assign(n, -1);
    for (int g = 0; g < n; ++g) {
      for (int h = 0; h < n; ++h)
        if (table_[g][h] == 0) {
          if (table_[h][g] != 0) throw GroupError("left and right inverses differ");
          inv_[g] = h;
          break;
        }
      if (inv_[g] < 0) throw GroupError("element " + std::to_string(g) + " has no inverse");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw GroupError("group table is not associative");
    if (names.empty())
      for (int g = 0; g < n; ++g) names.push_back(std::to_string(g));
    if (static_cast<int>(names.size()) != n) throw GroupError("element name count differs from order");
    names_ = std::move(names);
  }

  static Group cyclic(int n) {
    if (n < 1) throw GroupError("cyclic group order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    Group g(std::move(t));
    g.label_ = "cyclic(" + std::to_string(n) + ")";
    return g;
  }

  // Element i*|H| + j is (g_i, h_j).
  static Group product(const Group& G, const Group& H) {
    int n = G.order(), m = H.order();
    std::vector<std::vector<int>> t(n * m, std::vector<int>(n * m));
    std::vector<std::string> names;
    for (int a = 0; a < n * m; ++a) {
      names.push_back("(" + G.name(a / m) + "," + H.name(a % m) + ")");
      for (int b = 0; b < n * m; ++b) t[a][b] = G.mul(a / m, b / m) * m + H.mul(a % m, b % m);
    }
    Group r(std::move(t), std::move(names));
    r.label_ = "product(" + G.label() + ", " + H.label() + ")";
    return r;
  }

  // x -> c x + a over F_p; element (c-1)p + a is (a, c).
  static Group aff1modp(int p) {
    if (p < 2 || !is_prime(BigInt(p))) throw GroupError("aff1modp needs a prime");
    int n = p * (p - 1);
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> names;
    for (int x = 0; x < n; ++x) {
      int a1 = x % p, c1 = x / p + 1;
      names.push_back("(" + std::to_string(a1) + "," + std::to_string(c1) + ")");
      for (int y = 0; y < n; ++y) {
        int a2 = y % p, c2 = y / p + 1;
        int a = (a1 + c1 * a2) % p, c = (c1 * c2) % p;
        t[x][y] = (c - 1) * p + a;
      }
    }
    Group r(std::move(t), std::move(names));
    r.label_ = "aff1modp(" + std::to_string(p) + ")";
    return r;
  }

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::string& name(int g) const { return names_[g]; }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }

  int element_order(int g) const {
    int k = 1;
    for (int x = g; x != 0; x = mul(x, g)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (int a = 0; a < order(); ++a)
      for (int b = 0; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  friend bool operator==(const Group& a, const Group& b) { return a.table_ == b.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
  std::string label_ = "table";
};

// element order -> number of elements of that order
inline std::map<int, int> order_profile(const Group& g) {
  std::map<int, int> out;
  for (int x = 0; x < g.order(); ++x) ++out[g.element_order(x)];
  return out;
}

using Elem = std::vector<long long>;
using Matrix = std::vector<std::vector<long long>>;

inline long long mod_norm(long long x, long long m) {
  x %= m;
  return x < 0 ? x + m : x;
}

// Finite abelian group Z/m_1 x ... x Z/m_k with a left G-action by integer matrices.
class GModule {
 public:
  GModule() = default;

  GModule(Group g, std::vector<long long> moduli, std::vector<Matrix> action = {})
      : group_(std::move(g)), mod_(std::move(moduli)), act_(std::move(action)) {
    if (mod_.empty()) throw GroupError("module needs at least one cyclic factor");
    for (long long m : mod_)
      if (m < 1 || m > (1LL << 31)) throw GroupError("module factor out of range");
    std::size_t k = mod_.size();
    if (act_.empty()) {
      Matrix id(k, std::vector<long long>(k, 0));
      for (std::size_t i = 0; i < k; ++i) id[i][i] = 1;
      act_.assign(group_.order(), id);
    }
    if (static_cast<int>(act_.size()) != group_.order()) throw GroupError("action must list one matrix per element");
    for (auto& A : act_) {
      if (A.size() != k) throw GroupError("action matrix has wrong size");
      for (std::size_t i = 0; i < k; ++i) {
        if (A[i].size() != k) throw GroupError("action matrix has wrong size");
        for (std::size_t j = 0; j < k; ++j) {
          A[i][j] = mod_norm(A[i][j], mod_[i]);
          if ((static_cast<__int128>(A[i][j]) * mod_[j]) % mod_[i] != 0)
            throw GroupError("action matrix is not well defined on the module");
        }
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      Elem e = basis(j);
      if (act(0, e) != e) throw GroupError("identity does not act trivially");
      for (int g = 0; g < group_.order(); ++g)
        for (int h = 0; h < group_.order(); ++h)
          if (act(g, act(h, e)) != act(group_.mul(g, h), e)) throw GroupError("action is not a homomorphism");
    }
    long long s = 1;
    for (long long m : mod_) {
      if (s > (1LL << 40) / m) throw GroupError("module too large");
      s *= m;
    }
    size_ = s;
  }

  const Group& group() const { return group_; }
  const std::vector<long long>& moduli() const { return mod_; }
  const std::vector<Matrix>& action() const { return act_; }
  std::size_t rank() const { return mod_.size(); }
  long long size() const { return size_; }

  bool trivial_action() const {
    for (int g = 0; g < group_.order(); ++g)
      for (std::size_t j = 0; j < rank(); ++j)
        if (act(g, basis(j)) != basis(j)) return false;
    return true;
  }

  Elem zero() const { return Elem(rank(), 0); }
  Elem basis(std::size_t j) const {
    Elem e = zero();
    e[j] = 1 % mod_[j];
    return e;
  }
  Elem reduce(Elem u) const {
    if (u.size() != rank()) throw GroupError("module element has wrong length");
    for (std::size_t i = 0; i < rank(); ++i) u[i] = mod_norm(u[i], mod_[i]);
    return u;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_norm(a[i] + b[i], mod_[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_norm(-a[i], mod_[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem times(long long k, const Elem& a) const {
    Elem r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_norm(static_cast<long long>(static_cast<__int128>(k % mod_[i]) * a[i] % mod_[i]), mod_[i]);
    return r;
  }
  Elem act(int g, const Elem& u) const {
    Elem r(rank(), 0);
    const Matrix& A = act_[g];
    for (std::size_t i = 0; i < rank(); ++i) {
      __int128 s = 0;
      for (std::size_t j = 0; j < rank(); ++j) s += static_cast<__int128>(A[i][j]) * u[j];
      r[i] = mod_norm(static_cast<long long>(s % mod_[i]), mod_[i]);
    }
    return r;
  }
  bool is_zero(const Elem& u) const {
    for (long long x : u)
      if (x != 0) return false;
    return true;
  }

  // Mixed-radix index of an element, first coordinate most significant.
  long long index(const Elem& u) const {
    long long r = 0;
    for (std::size_t i = 0; i < rank(); ++i) r = r * mod_[i] + u[i];
    return r;
  }
  Elem element(long long idx) const {
    Elem u(rank());
    for (std::size_t i = rank(); i-- > 0;) {
      u[i] = idx % mod_[i];
      idx /= mod_[i];
    }
    return u;
  }

  std::string str(const Elem& u) const {
    if (rank() == 1) return std::to_string(u[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < rank(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
    return s + ")";
  }

 private:
  Group group_;
  std::vector<long long> mod_;
  std::vector<Matrix> act_;
  long long size_ = 1;
};

// Multiplication by c on Z/p for Aff_1(F_p).
inline GModule affine_module(const Group& aff, int p) {
  std::vector<Matrix> act;
  for (int g = 0; g < aff.order(); ++g) act.push_back({{g / p + 1}});
  return GModule(aff, {p}, act);
}

// The generator of Z/n (n even) acting by -1 on every factor.
inline GModule sign_module(const Group& g, std::vector<long long> moduli) {
  std::vector<Matrix> act;
  for (int x = 0; x < g.order(); ++x) {
    Matrix A(moduli.size(), std::vector<long long>(moduli.size(), 0));
    for (std::size_t i = 0; i < moduli.size(); ++i) A[i][i] = (x % 2 == 0) ? 1 : moduli[i] - 1;
    act.push_back(A);
  }
  return GModule(g, std::move(moduli), std::move(act));
}

struct Cochain1 {
  std::vector<Elem> values;  // indexed by group element
  const Elem& operator()(int g) const { return values[g]; }
  friend bool operator==(const Cochain1&, const Cochain1&) = default;
};

struct Cochain2 {
  int n = 0;
  std::vector<Elem> values;  // (g, h) at g*n + h
  const Elem& operator()(int g, int h) const { return values[g * n + h]; }
  Elem& at(int g, int h) { return values[g * n + h]; }
  friend bool operator==(const Cochain2&, const Cochain2&) = default;
};

inline Cochain1 zero_cochain1(const GModule& U) { return Cochain1{std::vector<Elem>(U.group().order(), U.zero())}; }

inline Cochain2 zero_cochain2(const GModule& U) {
  int n = U.group().order();
  return Cochain2{n, std::vector<Elem>(n * n, U.zero())};
}

inline bool verify_cocycle1(const GModule& U, const Cochain1& f) {
  const Group& G = U.group();
  for (int s = 0; s < G.order(); ++s)
    for (int t = 0; t < G.order(); ++t)
      if (f(G.mul(s, t)) != U.add(f(s), U.act(s, f(t)))) return false;
  return true;
}

inline bool verify_cocycle2(const GModule& U, const Cochain2& c) {
  const Group& G = U.group();
  int n = G.order();
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int g = 0; g < n; ++g) {
        Elem lhs = U.add(U.act(s, c(t, g)), c(s, G.mul(t, g)));
        Elem rhs = U.add(c(G.mul(s, t), g), c(s, t));
        if (lhs != rhs) return false;
      }
  return true;
}

inline bool is_normalized(const GModule& U, const Cochain2& c) {
  for (int g = 0; g < U.group().order(); ++g)
    if (!U.is_zero(c(g, 0)) || !U.is_zero(c(0, g))) return false;
  return true;
}

struct CocycleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Cochain1 coboundary1(const GModule& U, const Elem& u) {
  Cochain1 f;
  for (int s = 0; s < U.group().order(); ++s) f.values.push_back(U.sub(U.act(s, u), u));
  return f;
}

// (db)(s,t) = s b(t) - b(st) + b(s)
inline Cochain2 coboundary2(const GModule& U, const Cochain1& b) {
  const Group& G = U.group();
  if (!U.is_zero(b(0))) throw CocycleError("coboundary2 needs b(1) = 0");
  Cochain2 c = zero_cochain2(U);
  for (int s = 0; s < G.order(); ++s)
    for (int t = 0; t < G.order(); ++t) c.at(s, t) = U.add(U.sub(U.act(s, b(t)), b(G.mul(s, t))), b(s));
  return c;
}

inline Cochain2 add_cochains(const GModule& U, const Cochain2& a, const Cochain2& b) {
  Cochain2 r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = U.add(a.values[i], b.values[i]);
  return r;
}

inline Cochain2 scale_cochain(const GModule& U, long long k, const Cochain2& a) {
  Cochain2 r = a;
  for (auto& v : r.values) v = U.times(k, v);
  return r;
}

inline Cochain1 add_cochains(const GModule& U, const Cochain1& a, const Cochain1& b) {
  Cochain1 r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = U.add(a.values[i], b.values[i]);
  return r;
}

inline Cochain2 shift_by_coboundary(const GModule& U, const Cochain2& c, const Cochain1& b) {
  return add_cochains(U, c, coboundary2(U, b));
}

inline void require_cocycle2(const GModule& U, const Cochain2& c) {
  if (static_cast<int>(c.values.size()) != U.group().order() * U.group().order())
    throw CocycleError("cocycle table has the wrong size");
  if (!is_normalized(U, c)) throw CocycleError("2-cocycle is not normalized");
  if (!verify_cocycle2(U, c)) throw CocycleError("2-cocycle identity fails");
}

// Pairs (u, s) at index s*|U| + index(u); product (u1 + s1 u2 + c(s1,s2), s1 s2).
inline Group central_extension(const GModule& U, const Cochain2& c) {
  require_cocycle2(U, c);
  const Group& G = U.group();
  long long nu = U.size();
  long long total = nu * G.order();
  if (total > 4096) throw GroupError("extension too large to tabulate");
  int N = static_cast<int>(total);
  std::vector<Elem> elems(nu);
  for (long long i = 0; i < nu; ++i) elems[i] = U.element(i);
  std::vector<std::vector<int>> t(N, std::vector<int>(N));
  std::vector<std::string> names;
  for (int x = 0; x < N; ++x) {
    int s1 = static_cast<int>(x / nu);
    const Elem& u1 = elems[x % nu];
    names.push_back("(" + U.str(u1) + "," + G.name(s1) + ")");
    for (int y = 0; y < N; ++y) {
      int s2 = static_cast<int>(y / nu);
      const Elem& u2 = elems[y % nu];
      Elem u = U.add(U.add(u1, U.act(s1, u2)), c(s1, s2));
      t[x][y] = static_cast<int>(G.mul(s1, s2) * nu + U.index(u));
    }
  }
  Group E(std::move(t), std::move(names));
  E.set_label("extension");
  return E;
}

// ---------------------------------------------------------------------------
// Sliced G-networks.

struct GStrand {
  int g = 0;
  int coor = 1;  // +1: co-oriented to the left, -1: to the right
  friend bool operator==(const GStrand&, const GStrand&) = default;
};

enum class GKind { Merge, Split, Merge2, Split2, Flip, Cup, Cap, Dot };

inline std::string gkind_name(GKind k) {
  switch (k) {
    case GKind::Merge: return "merge";
    case GKind::Split: return "split";
    case GKind::Merge2: return "merge2";
    case GKind::Split2: return "split2";
    case GKind::Flip: return "flip";
    case GKind::Cup: return "cup";
    case GKind::Cap: return "cap";
    case GKind::Dot: return "dot";
  }
  return "?";
}

struct GLayer {
  GKind kind = GKind::Merge;
  std::size_t pos = 0;
  int s = 0, t = 0;         // split labels, cup label
  int e1 = 1, e2 = 1;       // split2 output co-orientations; merge2 uses e1 for the output
  Handed hand = Handed::PM;
  Elem dot;

  friend bool operator==(const GLayer& a, const GLayer& b) {
    if (a.kind != b.kind || a.pos != b.pos) return false;
    switch (a.kind) {
      case GKind::Split: return a.s == b.s && a.t == b.t;
      case GKind::Split2: return a.s == b.s && a.t == b.t && a.e1 == b.e1 && a.e2 == b.e2;
      case GKind::Merge2: return a.e1 == b.e1;
      case GKind::Cup: return a.s == b.s && a.hand == b.hand;
      case GKind::Dot: return a.dot == b.dot;
      default: return true;
    }
  }
};

struct GDiagram {
  std::vector<GStrand> source;
  std::vector<GLayer> layers;
  friend bool operator==(const GDiagram&, const GDiagram&) = default;
};

struct GValidationError : std::runtime_error {
  std::size_t layer;
  GValidationError(std::size_t l, const std::string& m) : std::runtime_error("layer " + std::to_string(l) + ": " + m), layer(l) {}
};

inline int effective(const Group& G, const GStrand& s) { return s.coor > 0 ? s.g : G.inv(s.g); }

inline int g_gap_winding(const Group& G, const std::vector<GStrand>& z, std::size_t gap) {
  int w = 0;
  for (std::size_t i = 0; i < gap && i < z.size(); ++i) w = G.mul(w, effective(G, z[i]));
  return w;
}

// Rewrites type-II vertices as type-I vertices with flips.
inline std::vector<GLayer> expand_layer(const Group& G, const std::vector<GStrand>& z, const GLayer& L, std::size_t idx) {
  auto flip = [](std::size_t p) {
    GLayer f;
    f.kind = GKind::Flip;
    f.pos = p;
    return f;
  };
  if (L.kind == GKind::Merge2) {
    if (L.pos + 2 > z.size()) throw GValidationError(idx, "merge2 out of range");
    std::vector<GLayer> out;
    for (std::size_t k = 0; k < 2; ++k)
      if (z[L.pos + k].coor != L.e1) out.push_back(flip(L.pos + k));
    GLayer m;
    m.kind = GKind::Merge;
    m.pos = L.pos;
    out.push_back(m);
    return out;
  }
  if (L.kind == GKind::Split2) {
    if (L.pos >= z.size()) throw GValidationError(idx, "split2 out of range");
    int e = z[L.pos].coor;
    GLayer sp;
    sp.kind = GKind::Split;
    sp.pos = L.pos;
    sp.s = (L.e1 == e) ? L.s : G.inv(L.s);
    sp.t = (L.e2 == e) ? L.t : G.inv(L.t);
    std::vector<GLayer> out{sp};
    if (L.e1 != e) out.push_back(flip(L.pos));
    if (L.e2 != e) out.push_back(flip(L.pos + 1));
    return out;
  }
  return {L};
}

inline std::vector<GStrand> g_apply(const GModule& U, const std::vector<GStrand>& z, const GLayer& L, std::size_t idx) {
  const Group& G = U.group();
  std::vector<GStrand> out = z;
  const std::size_t i = L.pos;
  auto need = [&](std::size_t w) {
    if (i + w > z.size()) throw GValidationError(idx, gkind_name(L.kind) + " at " + std::to_string(i) + " out of range");
  };
  auto elem_ok = [&](int g) {
    if (g < 0 || g >= G.order()) throw GValidationError(idx, "group element " + std::to_string(g) + " out of range");
  };
  switch (L.kind) {
    case GKind::Merge: {
      need(2);
      if (z[i].coor != z[i + 1].coor) throw GValidationError(idx, "merge of strands with different co-orientation");
      int e = z[i].coor;
      int g = e > 0 ? G.mul(z[i].g, z[i + 1].g) : G.mul(z[i + 1].g, z[i].g);
      out.erase(out.begin() + i, out.begin() + i + 2);
      out.insert(out.begin() + i, GStrand{g, e});
      break;
    }
    case GKind::Split: {
      need(1);
      elem_ok(L.s);
      elem_ok(L.t);
      int e = z[i].coor;
      int g = e > 0 ? G.mul(L.s, L.t) : G.mul(L.t, L.s);
      if (g != z[i].g) throw GValidationError(idx, "split labels do not multiply to the strand label");
      out.erase(out.begin() + i);
      out.insert(out.begin() + i, {GStrand{L.s, e}, GStrand{L.t, e}});
      break;
    }
    case GKind::Flip: {
      need(1);
      out[i] = GStrand{G.inv(z[i].g), -z[i].coor};
      break;
    }
    case GKind::Cup: {
      elem_ok(L.s);
      if (i > z.size()) throw GValidationError(idx, "cup gap out of range");
      int first = L.hand == Handed::PM ? 1 : -1;
      out.insert(out.begin() + i, {GStrand{L.s, first}, GStrand{L.s, -first}});
      break;
    }
    case GKind::Cap: {
      need(2);
      if (z[i].g != z[i + 1].g || z[i].coor == z[i + 1].coor)
        throw GValidationError(idx, "cap needs equal labels with opposite co-orientation");
      out.erase(out.begin() + i, out.begin() + i + 2);
      break;
    }
    case GKind::Dot: {
      if (i > z.size()) throw GValidationError(idx, "dot gap out of range");
      if (L.dot.size() != U.rank()) throw GValidationError(idx, "dot label has wrong length");
      break;
    }
    case GKind::Merge2:
    case GKind::Split2: {
      for (const auto& sub : expand_layer(G, z, L, idx)) out = g_apply(U, out, sub, idx);
      break;
    }
  }
  return out;
}

inline std::vector<std::vector<GStrand>> g_trace(const GModule& U, const GDiagram& d) {
  for (const auto& s : d.source)
    if (s.g < 0 || s.g >= U.group().order() || (s.coor != 1 && s.coor != -1))
      throw GValidationError(0, "invalid source strand");
  std::vector<std::vector<GStrand>> out{d.source};
  for (std::size_t k = 0; k < d.layers.size(); ++k) out.push_back(g_apply(U, out.back(), d.layers[k], k));
  return out;
}

inline std::vector<GStrand> g_validate(const GModule& U, const GDiagram& d) { return g_trace(U, d).back(); }

inline int g_winding(const GModule& U, const GDiagram& d, std::size_t layer, std::size_t gap) {
  auto objs = g_trace(U, d);
  if (layer >= objs.size() || gap > objs[layer].size()) throw std::out_of_range("g_winding: index out of range");
  return g_gap_winding(U.group(), objs[layer], gap);
}

// Replaces type-II layers by their type-I expansions.
inline GDiagram expand(const GModule& U, const GDiagram& d) {
  GDiagram r{d.source, {}};
  auto objs = g_trace(U, d);
  for (std::size_t k = 0; k < d.layers.size(); ++k)
    for (const auto& sub : expand_layer(U.group(), objs[k], d.layers[k], k)) r.layers.push_back(sub);
  return r;
}

inline bool is_closed(const GModule& U, const GDiagram& d) { return d.source.empty() && g_validate(U, d).empty(); }

struct GContribution {
  Elem dot, c, f;
};

namespace detail {

inline GContribution g_contributions(const GModule& U, const GDiagram& d, const Cochain2* c, const Cochain1* f) {
  const Group& G = U.group();
  GDiagram e = expand(U, d);
  auto objs = g_trace(U, e);
  GContribution acc{U.zero(), U.zero(), U.zero()};
  for (std::size_t k = 0; k < e.layers.size(); ++k) {
    const GLayer& L = e.layers[k];
    const auto& z = objs[k];
    int w = g_gap_winding(G, z, L.pos);
    auto addc = [&](int sign, const Elem& v) {
      Elem t = U.act(w, v);
      acc.c = sign > 0 ? U.add(acc.c, t) : U.sub(acc.c, t);
    };
    auto addf = [&](int sign, int wg, const Elem& v) {
      Elem t = U.act(wg, v);
      acc.f = sign > 0 ? U.add(acc.f, t) : U.sub(acc.f, t);
    };
    switch (L.kind) {
      case GKind::Merge:
        if (c) addc(+1, (*c)(effective(G, z[L.pos]), effective(G, z[L.pos + 1])));
        break;
      case GKind::Split: {
        const auto& up = objs[k + 1];
        if (c) addc(-1, (*c)(effective(G, up[L.pos]), effective(G, up[L.pos + 1])));
        break;
      }
      case GKind::Flip:
        if (f) {
          if (z[L.pos].coor > 0) addf(+1, w, (*f)(z[L.pos].g));
          else addf(-1, w, (*f)(G.inv(z[L.pos].g)));
        }
        break;
      case GKind::Cup: {
        int s = L.s, si = G.inv(s);
        if (L.hand == Handed::PM) {
          if (c) addc(-1, (*c)(s, si));
        } else {
          if (c) addc(-1, (*c)(si, s));
          if (f) addf(-1, G.mul(w, si), (*f)(s));
        }
        break;
      }
      case GKind::Cap: {
        int s = z[L.pos].g, si = G.inv(s);
        if (z[L.pos].coor > 0) {
          if (c) addc(+1, (*c)(s, si));
          if (f) addf(+1, w, (*f)(s));
        } else {
          if (c) addc(+1, (*c)(si, s));
        }
        break;
      }
      case GKind::Dot: acc.dot = U.add(acc.dot, U.act(w, U.reduce(L.dot))); break;
      default: break;
    }
  }
  return acc;
}

}  // namespace detail

inline Elem eval_alpha_U(const GModule& U, const GDiagram& d) {
  return detail::g_contributions(U, d, nullptr, nullptr).dot;
}

inline Elem eval_alpha_f(const GModule& U, const GDiagram& d, const Cochain1& f) {
  if (!verify_cocycle1(U, f)) throw CocycleError("1-cocycle identity fails");
  auto r = detail::g_contributions(U, d, nullptr, &f);
  return U.add(r.dot, r.f);
}

inline Elem eval_alpha_c(const GModule& U, const GDiagram& d, const Cochain2& c) {
  require_cocycle2(U, c);
  auto r = detail::g_contributions(U, d, &c, nullptr);
  return U.add(r.dot, r.c);
}

inline Elem eval_alpha_cf(const GModule& U, const GDiagram& d, const Cochain2& c, const Cochain1& f) {
  require_cocycle2(U, c);
  if (!verify_cocycle1(U, f)) throw CocycleError("1-cocycle identity fails");
  auto r = detail::g_contributions(U, d, &c, &f);
  return U.add(U.add(r.dot, r.c), r.f);
}

}  // namespace entronet
