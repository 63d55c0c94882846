#pragma once

#include "entronet/affine.hpp"
#include "entronet/groupnet.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace entronet {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& m)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + m), line(l), col(c) {}
};

// Well-formed text whose declarations do not make sense (bad group table, element out of range, ...).
struct SemanticError : std::runtime_error {
  int line, col;
  SemanticError(int l, int c, const std::string& m)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + m), line(l), col(c) {}
};

struct ObjectDecl {
  std::string name;
  DiagObject object;
  friend bool operator==(const ObjectDecl&, const ObjectDecl&) = default;
};

struct DiagramDecl {
  std::string name, source, target;  // object names
  Diagram diagram;                   // diagram.source is the resolved source object
  DiagObject declared_target;
  friend bool operator==(const DiagramDecl& a, const DiagramDecl& b) {
    return a.name == b.name && a.source == b.source && a.target == b.target && a.diagram == b.diagram;
  }
};

struct GroupDecl {
  enum class Form { Cyclic, Aff1ModP, Product, Table };
  std::string name;
  Form form = Form::Cyclic;
  int param = 0;
  std::string left, right;  // product operands
  Group group;
  friend bool operator==(const GroupDecl& a, const GroupDecl& b) {
    if (a.name != b.name || a.form != b.form) return false;
    switch (a.form) {
      case Form::Cyclic:
      case Form::Aff1ModP: return a.param == b.param;
      case Form::Product: return a.left == b.left && a.right == b.right;
      case Form::Table: return a.group == b.group;
    }
    return false;
  }
};

struct ModuleDecl {
  std::string name, group;
  GModule module;
  friend bool operator==(const ModuleDecl& a, const ModuleDecl& b) {
    return a.name == b.name && a.group == b.group && a.module.moduli() == b.module.moduli() &&
           a.module.action() == b.module.action();
  }
};

struct Cocycle2Decl {
  std::string name, group, module;
  Cochain2 values;
  friend bool operator==(const Cocycle2Decl&, const Cocycle2Decl&) = default;
};

struct Cocycle1Decl {
  std::string name, group, module;
  Cochain1 values;
  friend bool operator==(const Cocycle1Decl&, const Cocycle1Decl&) = default;
};

struct GDiagramDecl {
  std::string name, module;
  GDiagram diagram;
  friend bool operator==(const GDiagramDecl&, const GDiagramDecl&) = default;
};

using Decl = std::variant<ObjectDecl, DiagramDecl, GroupDecl, ModuleDecl, Cocycle2Decl, Cocycle1Decl, GDiagramDecl>;

inline const std::string& decl_name(const Decl& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

struct SourceFile {
  std::vector<Decl> decls;

  template <class T>
  const T* find(const std::string& name) const {
    for (const auto& d : decls)
      if (auto* p = std::get_if<T>(&d); p && p->name == name) return p;
    return nullptr;
  }
  template <class T>
  const T& get(const std::string& name, const char* what) const {
    if (auto* p = find<T>(name)) return *p;
    throw std::invalid_argument(std::string("no ") + what + " named '" + name + "'");
  }
  template <class T>
  std::vector<const T*> all() const {
    std::vector<const T*> out;
    for (const auto& d : decls)
      if (auto* p = std::get_if<T>(&d)) out.push_back(p);
    return out;
  }
  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

namespace detail {

enum class Tok { Ident, Number, Punct, Arrow, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') adv();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) { adv(); continue; }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.kind = Tok::Number;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Tok::Arrow;
      t.text = "->";
      adv(2);
    } else if (std::string("(){}[],;:@=+-/").find(ch) != std::string::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, ch);
      adv();
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  SourceFile run() {
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t, "expected a declaration keyword");
      if (t.text == "mode") parse_mode();
      else if (t.text == "object") add(parse_object());
      else if (t.text == "diagram") add(parse_diagram());
      else if (t.text == "group") add(parse_group());
      else if (t.text == "module") add(parse_module());
      else if (t.text == "cocycle2") add(parse_cocycle2());
      else if (t.text == "cocycle1") add(parse_cocycle1());
      else if (t.text == "gdiagram") add(parse_gdiagram());
      else fail(t, "unknown declaration '" + t.text + "'");
    }
    return file_;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourceFile file_;
  Mode mode_ = Mode::J;
  std::set<std::string> names_;

  [[noreturn]] static void fail(const Token& t, const std::string& m) { throw ParseError(t.line, t.col, m); }
  [[noreturn]] static void sem(const Token& t, const std::string& m) { throw SemanticError(t.line, t.col, m); }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const std::string& p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_ident(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept(const std::string& p) {
    if (is_punct(p)) { next(); return true; }
    return false;
  }
  const Token& expect(const std::string& p) {
    if (!is_punct(p)) fail(peek(), "expected '" + p + "'" + found());
    return next();
  }
  void expect_arrow() {
    if (peek().kind != Tok::Arrow) fail(peek(), "expected '->'" + found());
    next();
  }
  std::string found() const {
    if (peek().kind == Tok::End) return ", found end of input";
    return ", found '" + peek().text + "'";
  }
  const Token& ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(peek(), std::string("expected ") + what + found());
    return next();
  }
  const Token& keyword(const std::string& kw) {
    if (!is_ident(kw)) fail(peek(), "expected '" + kw + "'" + found());
    return next();
  }

  template <class T>
  void add(T decl) { file_.decls.push_back(std::move(decl)); }

  std::string new_name() {
    const Token& t = ident("a name");
    if (t.text == "unit") fail(t, "'unit' is reserved");
    if (names_.count(t.text)) fail(t, "duplicate name '" + t.text + "'");
    names_.insert(t.text);
    return t.text;
  }

  template <class T>
  const T& ref(const char* what) {
    const Token& t = ident(what);
    if (auto* p = file_.find<T>(t.text)) return *p;
    if (names_.count(t.text)) fail(t, "'" + t.text + "' is not a " + what);
    fail(t, std::string("unknown ") + what + " '" + t.text + "' (declarations must precede use)");
  }

  long long integer(const char* what) {
    bool neg = accept("-");
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
      fail(t, std::string("expected ") + what + found());
    next();
    if (t.text.size() > 17) fail(t, "integer too large");
    long long v = std::stoll(t.text);
    return neg ? -v : v;
  }

  Rational rational() {
    bool neg = accept("-");
    const Token& n = peek();
    if (n.kind != Tok::Number || n.text.find_first_not_of("0123456789") != std::string::npos)
      fail(n, "expected a rational" + found());
    next();
    BigInt num(n.text), den = 1;
    if (accept("/")) {
      const Token& d = peek();
      if (d.kind != Tok::Number || d.text.find_first_not_of("0123456789") != std::string::npos)
        fail(d, "expected a denominator" + found());
      next();
      den = BigInt(d.text);
      if (den == 0) fail(d, "zero denominator");
    }
    return Rational(neg ? BigInt(-num) : num, den);
  }

  double decimal() {
    bool neg = accept("-");
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "expected a number" + found());
    next();
    double v = std::strtod(t.text.c_str(), nullptr);
    return neg ? -v : v;
  }

  void parse_mode() {
    next();
    const Token& t = ident("a mode");
    if (t.text == "J") mode_ = Mode::J;
    else if (t.text == "H") mode_ = Mode::HExact;
    else if (t.text == "Hfloat") mode_ = Mode::HFloat;
    else fail(t, "unknown mode '" + t.text + "' (expected J, H or Hfloat)");
  }

  BoundaryPoint point() {
    const Token& t = ident("a boundary point");
    if (t.text != "X" && t.text != "Y") fail(t, "expected X or Y" + std::string(", found '") + t.text + "'");
    bool plus;
    if (accept("+")) plus = true;
    else if (accept("-")) plus = false;
    else fail(peek(), "expected '+' or '-' after " + t.text + found());
    expect("(");
    const Token& wt = peek();
    Rational w = rational();
    expect(")");
    if (t.text == "Y" && w == 0) sem(wt, "multiplicative weight must be nonzero");
    PointKind k = t.text == "X" ? (plus ? PointKind::Xplus : PointKind::Xminus) : (plus ? PointKind::Yplus : PointKind::Yminus);
    return {k, w};
  }

  ObjectDecl parse_object() {
    next();
    ObjectDecl d;
    d.name = new_name();
    expect("=");
    if (is_ident("unit")) {
      next();
      return d;
    }
    do d.object.points.push_back(point());
    while (peek().kind == Tok::Ident && (peek().text == "X" || peek().text == "Y") && is_punct_pm(1));
    return d;
  }

  bool is_punct_pm(std::size_t k) const { return is_punct("+", k) || is_punct("-", k); }

  DiagObject object_ref(std::string& name) {
    const Token& t = ident("an object");
    name = t.text;
    if (t.text == "unit") return {};
    if (auto* p = file_.find<ObjectDecl>(t.text)) return p->object;
    if (names_.count(t.text)) fail(t, "'" + t.text + "' is not an object");
    fail(t, "unknown object '" + t.text + "' (declarations must precede use)");
  }

  std::vector<Rational> weight_list(std::size_t n, const Token& at, const std::string& gen, bool optional) {
    std::vector<Rational> v;
    if (!is_punct("(")) {
      if (optional) return v;
      fail(peek(), gen + " expects " + std::to_string(n) + " weight(s)" + found());
    }
    next();
    if (!is_punct(")")) {
      v.push_back(rational());
      while (accept(",")) v.push_back(rational());
    }
    expect(")");
    if (v.size() != n) fail(at, gen + " expects " + std::to_string(n) + " weight(s), got " + std::to_string(v.size()));
    return v;
  }

  PrimeVector prime_map() {
    expect("{");
    PrimeVector v;
    std::set<BigInt> seen;
    while (!is_punct("}")) {
      const Token& kt = peek();
      long long k = integer("a prime");
      if (k < 2 || !is_prime(BigInt(k))) fail(kt, "key " + std::to_string(k) + " is not a prime");
      if (seen.count(k)) fail(kt, "duplicate key " + std::to_string(k));
      seen.insert(k);
      expect(":");
      v.add_term(k, rational());
      if (!accept(",")) break;
    }
    expect("}");
    return v;
  }

  JValue payload() {
    switch (mode_) {
      case Mode::J: return prime_map();
      case Mode::HExact: {
        EntropyScalar e;
        if (is_punct("{")) {
          e.logpart = prime_map();
          return e;
        }
        e.constant = rational();
        if (accept("+")) e.logpart = prime_map();
        return e;
      }
      case Mode::HFloat: return decimal();
    }
    return PrimeVector{};
  }

  Handed handed() {
    const Token& t = ident("pm or mp");
    if (t.text == "pm") return Handed::PM;
    if (t.text == "mp") return Handed::MP;
    fail(t, "expected pm or mp, found '" + t.text + "'");
  }

  std::size_t position() {
    expect("@");
    long long p = integer("a position");
    if (p < 0) fail(peek(), "position must be nonnegative");
    return static_cast<std::size_t>(p);
  }

  Layer layer() {
    const Token& t = ident("a generator");
    auto kind = gen_from_name(t.text);
    if (!kind) fail(t, "unknown generator '" + t.text + "'");
    Layer L;
    L.kind = *kind;
    L.pos = position();
    const std::string& g = t.text;
    switch (L.kind) {
      case GenKind::AddMerge:
      case GenKind::AddMergeDual:
      case GenKind::MultMerge:
      case GenKind::MultMergeDual: L.args = weight_list(2, t, g, true); break;
      case GenKind::AddSplit:
      case GenKind::AddSplitDual:
      case GenKind::MultSplit:
      case GenKind::MultSplitDual: L.args = weight_list(2, t, g, false); break;
      case GenKind::CupX:
      case GenKind::CupY:
        L.args = weight_list(1, t, g, false);
        L.hand = handed();
        break;
      case GenKind::CapX:
      case GenKind::CapY: L.args = weight_list(1, t, g, true); break;
      case GenKind::Dot: L.payload = payload(); break;
      default:
        if (is_punct("(")) fail(peek(), g + " takes no weights");
        break;
    }
    return L;
  }

  DiagramDecl parse_diagram() {
    next();
    DiagramDecl d;
    d.name = new_name();
    expect(":");
    d.diagram.source = object_ref(d.source);
    expect_arrow();
    d.declared_target = object_ref(d.target);
    d.diagram.mode = mode_;
    expect("{");
    while (!is_punct("}")) {
      if (accept(";")) continue;
      if (peek().kind == Tok::End) fail(peek(), "unterminated diagram body");
      d.diagram.layers.push_back(layer());
      if (!is_punct("}")) expect(";");
    }
    expect("}");
    return d;
  }

  std::vector<std::vector<long long>> int_matrix() {
    std::vector<std::vector<long long>> m;
    expect("[");
    while (!is_punct("]")) {
      std::vector<long long> row;
      expect("[");
      while (!is_punct("]")) {
        row.push_back(integer("an integer"));
        if (!accept(",")) break;
      }
      expect("]");
      m.push_back(row);
      if (!accept(",")) break;
    }
    expect("]");
    return m;
  }

  GroupDecl parse_group() {
    next();
    GroupDecl d;
    d.name = new_name();
    expect("=");
    const Token& f = ident("a group form");
    try {
      if (f.text == "cyclic" || f.text == "aff1modp") {
        expect("(");
        const Token& at = peek();
        d.param = static_cast<int>(integer("an integer"));
        expect(")");
        if (f.text == "cyclic") {
          if (d.param < 1 || d.param > 4096) sem(at, "cyclic order must be in 1..4096");
          d.form = GroupDecl::Form::Cyclic;
          d.group = Group::cyclic(d.param);
        } else {
          if (d.param < 2 || d.param > 64) sem(at, "aff1modp needs a prime up to 64");
          d.form = GroupDecl::Form::Aff1ModP;
          d.group = Group::aff1modp(d.param);
        }
      } else if (f.text == "product") {
        expect("(");
        const auto& A = ref<GroupDecl>("group");
        expect(",");
        const auto& B = ref<GroupDecl>("group");
        expect(")");
        d.form = GroupDecl::Form::Product;
        d.left = A.name;
        d.right = B.name;
        if (A.group.order() * B.group.order() > 4096) sem(f, "product group too large");
        d.group = Group::product(A.group, B.group);
      } else if (f.text == "table") {
        auto m = int_matrix();
        std::vector<std::vector<int>> t;
        for (const auto& row : m) {
          t.emplace_back();
          for (long long x : row) t.back().push_back(static_cast<int>(x));
        }
        d.form = GroupDecl::Form::Table;
        d.group = Group(t);
      } else {
        fail(f, "unknown group form '" + f.text + "'");
      }
    } catch (const GroupError& e) {
      sem(f, e.what());
    }
    d.group.set_label(d.name);
    return d;
  }

  int element(const Group& G) {
    const Token& t = peek();
    long long g = integer("a group element");
    if (g < 0 || g >= G.order()) sem(t, "group element " + std::to_string(g) + " out of range");
    return static_cast<int>(g);
  }

  Elem module_elem(const GModule& U) {
    Elem u;
    const Token& t = peek();
    if (accept("(")) {
      u.push_back(integer("an integer"));
      while (accept(",")) u.push_back(integer("an integer"));
      expect(")");
    } else {
      u.push_back(integer("an integer"));
    }
    if (u.size() != U.rank())
      fail(t, "module element needs " + std::to_string(U.rank()) + " coordinate(s), got " + std::to_string(u.size()));
    return U.reduce(u);
  }

  ModuleDecl parse_module() {
    next();
    ModuleDecl d;
    d.name = new_name();
    keyword("over");
    const auto& G = ref<GroupDecl>("group");
    d.group = G.name;
    expect("=");
    const Token& z = keyword("z");
    expect("(");
    std::vector<long long> moduli;
    do {
      const Token& mt = peek();
      long long m = integer("a modulus");
      if (m < 1 || m > (1LL << 31)) sem(mt, "modulus out of range");
      moduli.push_back(m);
    } while (accept(","));
    expect(")");
    std::map<int, Matrix> listed;
    const Token& at = peek();
    if (is_ident("action")) {
      next();
      expect("{");
      while (!is_punct("}")) {
        const Token& gt = peek();
        int g = element(G.group);
        expect(":");
        auto m = int_matrix();
        if (m.size() != moduli.size()) fail(gt, "action matrix must be " + std::to_string(moduli.size()) + " square");
        for (const auto& row : m)
          if (row.size() != moduli.size()) fail(gt, "action matrix must be square");
        if (listed.count(g)) fail(gt, "duplicate action entry");
        listed[g] = m;
        if (!accept(",")) continue;
      }
      expect("}");
    }
    try {
      d.module = GModule(G.group, moduli, close_action(G.group, moduli, listed, at));
    } catch (const GroupError& e) {
      sem(z, e.what());
    }
    return d;
  }

  // Extends the listed matrices multiplicatively to the whole group.
  static std::vector<Matrix> close_action(const Group& G, const std::vector<long long>& mod, std::map<int, Matrix> known,
                                          const Token& at) {
    std::size_t k = mod.size();
    Matrix id(k, std::vector<long long>(k, 0));
    for (std::size_t i = 0; i < k; ++i) id[i][i] = 1;
    if (known.empty()) return std::vector<Matrix>(G.order(), id);
    known[0] = id;
    auto mul = [&](const Matrix& A, const Matrix& B) {
      Matrix C(k, std::vector<long long>(k, 0));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          __int128 s = 0;
          for (std::size_t l = 0; l < k; ++l) s += static_cast<__int128>(A[i][l]) * B[l][j];
          C[i][j] = mod_norm(static_cast<long long>(s % mod[i]), mod[i]);
        }
      return C;
    };
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<std::pair<int, Matrix>> add;
      for (const auto& [g, A] : known)
        for (const auto& [h, B] : known) {
          int gh = G.mul(g, h);
          if (!known.count(gh)) add.push_back({gh, mul(A, B)});
        }
      for (auto& [g, M] : add)
        if (!known.count(g)) { known[g] = M; grew = true; }
    }
    if (static_cast<int>(known.size()) != G.order())
      throw SemanticError(at.line, at.col, "listed action matrices do not generate an action of the whole group");
    std::vector<Matrix> out;
    for (auto& [g, M] : known) out.push_back(M);
    return out;
  }

  std::pair<const GroupDecl*, const ModuleDecl*> cocycle_header(std::string& gname, std::string& mname) {
    expect(":");
    const auto& G = ref<GroupDecl>("group");
    expect_arrow();
    const Token& mt = peek();
    const auto& U = ref<ModuleDecl>("module");
    if (U.group != G.name) sem(mt, "module " + U.name + " is not over group " + G.name);
    gname = G.name;
    mname = U.name;
    expect("=");
    return {&G, &U};
  }

  Cocycle2Decl parse_cocycle2() {
    next();
    Cocycle2Decl d;
    d.name = new_name();
    auto [G, U] = cocycle_header(d.group, d.module);
    d.values = zero_cochain2(U->module);
    std::set<std::pair<int, int>> seen;
    expect("{");
    while (!is_punct("}")) {
      const Token& kt = expect("(");
      int g = element(G->group);
      expect(",");
      int h = element(G->group);
      expect(")");
      expect(":");
      if (seen.count({g, h})) fail(kt, "duplicate entry");
      seen.insert({g, h});
      d.values.at(g, h) = module_elem(U->module);
      accept(",");
    }
    expect("}");
    return d;
  }

  Cocycle1Decl parse_cocycle1() {
    next();
    Cocycle1Decl d;
    d.name = new_name();
    auto [G, U] = cocycle_header(d.group, d.module);
    d.values = zero_cochain1(U->module);
    std::set<int> seen;
    expect("{");
    while (!is_punct("}")) {
      const Token& kt = peek();
      int g = element(G->group);
      expect(":");
      if (seen.count(g)) fail(kt, "duplicate entry");
      seen.insert(g);
      d.values.values[g] = module_elem(U->module);
      accept(",");
    }
    expect("}");
    return d;
  }

  int coorientation() {
    if (accept("+")) return 1;
    if (accept("-")) return -1;
    fail(peek(), "expected '+' or '-'" + found());
  }

  GLayer glayer(const GModule& U) {
    const Token& t = ident("a network generator");
    GLayer L;
    static const std::map<std::string, GKind> kinds{{"merge", GKind::Merge}, {"split", GKind::Split},
                                                    {"merge2", GKind::Merge2}, {"split2", GKind::Split2},
                                                    {"flip", GKind::Flip}, {"cup", GKind::Cup},
                                                    {"cap", GKind::Cap}, {"dot", GKind::Dot}};
    auto it = kinds.find(t.text);
    if (it == kinds.end()) fail(t, "unknown network generator '" + t.text + "'");
    L.kind = it->second;
    L.pos = position();
    const Group& G = U.group();
    switch (L.kind) {
      case GKind::Split:
      case GKind::Split2:
        expect("(");
        L.s = element(G);
        expect(",");
        L.t = element(G);
        expect(")");
        if (L.kind == GKind::Split2) {
          L.e1 = coorientation();
          L.e2 = coorientation();
        }
        break;
      case GKind::Merge2: L.e1 = coorientation(); break;
      case GKind::Cup:
        expect("(");
        L.s = element(G);
        expect(")");
        L.hand = handed();
        break;
      case GKind::Dot: L.dot = module_elem(U); break;
      default: break;
    }
    return L;
  }

  GDiagramDecl parse_gdiagram() {
    next();
    GDiagramDecl d;
    d.name = new_name();
    keyword("over");
    const auto& U = ref<ModuleDecl>("module");
    d.module = U.name;
    expect(":");
    if (is_ident("unit")) {
      next();
    } else {
      while (is_punct("(")) {
        next();
        int g = element(U.module.group());
        expect(",");
        int e = coorientation();
        expect(")");
        d.diagram.source.push_back({g, e});
      }
    }
    expect("{");
    while (!is_punct("}")) {
      if (accept(";")) continue;
      if (peek().kind == Tok::End) fail(peek(), "unterminated network body");
      d.diagram.layers.push_back(glayer(U.module));
      if (!is_punct("}")) expect(";");
    }
    expect("}");
    return d;
  }
};

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string payload_text(const JValue& v) {
  if (auto* p = std::get_if<PrimeVector>(&v)) return p->str();
  if (auto* e = std::get_if<EntropyScalar>(&v)) return e->str();
  return format_double(std::get<double>(v));
}

inline std::string weights_text(const std::vector<Rational>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + to_string(w[i]);
  return s + ")";
}

inline std::string object_text(const DiagObject& z) {
  if (z.points.empty()) return "unit";
  std::string s;
  for (const auto& p : z.points) {
    if (!s.empty()) s += " ";
    s += std::string(is_x(p.kind) ? "X" : "Y") + (kind_sign(p.kind) > 0 ? "+" : "-") + "(" + to_string(p.weight) + ")";
  }
  return s;
}

inline std::string matrix_text(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += (i ? ", [" : "[");
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + std::to_string(m[i][j]);
    s += "]";
  }
  return s + "]";
}

inline std::string elem_text(const Elem& u) {
  if (u.size() == 1) return std::to_string(u[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? ", " : "") + std::to_string(u[i]);
  return s + ")";
}

inline bool elem_zero(const Elem& u) {
  for (long long x : u)
    if (x) return false;
  return true;
}

}  // namespace detail

inline SourceFile parse(const std::string& text) { return detail::Parser(text).run(); }

inline std::string layer_text(const Layer& L) {
  std::string s = gen_name(L.kind) + " @" + std::to_string(L.pos);
  if (!L.args.empty()) s += " " + detail::weights_text(L.args);
  if (L.kind == GenKind::CupX || L.kind == GenKind::CupY) s += L.hand == Handed::PM ? " pm" : " mp";
  if (L.kind == GenKind::Dot) s += " " + detail::payload_text(L.payload);
  return s;
}

inline std::string glayer_text(const GLayer& L) {
  std::string s = gkind_name(L.kind) + " @" + std::to_string(L.pos);
  auto pm = [](int e) { return e > 0 ? std::string("+") : std::string("-"); };
  switch (L.kind) {
    case GKind::Split: s += " (" + std::to_string(L.s) + ", " + std::to_string(L.t) + ")"; break;
    case GKind::Split2:
      s += " (" + std::to_string(L.s) + ", " + std::to_string(L.t) + ") " + pm(L.e1) + " " + pm(L.e2);
      break;
    case GKind::Merge2: s += " " + pm(L.e1); break;
    case GKind::Cup: s += " (" + std::to_string(L.s) + ")" + (L.hand == Handed::PM ? " pm" : " mp"); break;
    case GKind::Dot: s += " " + detail::elem_text(L.dot); break;
    default: break;
  }
  return s;
}

inline std::string print(const SourceFile& f) {
  std::ostringstream out;
  Mode mode = Mode::J;
  for (const auto& decl : f.decls) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ObjectDecl>) {
            out << "object " << d.name << " = " << detail::object_text(d.object) << "\n";
          } else if constexpr (std::is_same_v<T, DiagramDecl>) {
            if (d.diagram.mode != mode) {
              mode = d.diagram.mode;
              out << "mode " << mode_str(mode) << "\n";
            }
            out << "diagram " << d.name << " : " << d.source << " -> " << d.target << " {";
            if (d.diagram.layers.empty()) out << "}\n";
            else {
              out << "\n";
              for (std::size_t k = 0; k < d.diagram.layers.size(); ++k)
                out << "  " << layer_text(d.diagram.layers[k]) << (k + 1 < d.diagram.layers.size() ? ";" : "") << "\n";
              out << "}\n";
            }
          } else if constexpr (std::is_same_v<T, GroupDecl>) {
            out << "group " << d.name << " = ";
            switch (d.form) {
              case GroupDecl::Form::Cyclic: out << "cyclic(" << d.param << ")"; break;
              case GroupDecl::Form::Aff1ModP: out << "aff1modp(" << d.param << ")"; break;
              case GroupDecl::Form::Product: out << "product(" << d.left << ", " << d.right << ")"; break;
              case GroupDecl::Form::Table: {
                Matrix m;
                for (const auto& row : d.group.table()) m.emplace_back(row.begin(), row.end());
                out << "table " << detail::matrix_text(m);
                break;
              }
            }
            out << "\n";
          } else if constexpr (std::is_same_v<T, ModuleDecl>) {
            out << "module " << d.name << " over " << d.group << " = z(";
            const auto& mod = d.module.moduli();
            for (std::size_t i = 0; i < mod.size(); ++i) out << (i ? ", " : "") << mod[i];
            out << ")";
            if (!d.module.trivial_action()) {
              out << " action {";
              bool first = true;
              for (int g = 1; g < d.module.group().order(); ++g) {
                out << (first ? " " : ", ") << g << ": " << detail::matrix_text(d.module.action()[g]);
                first = false;
              }
              out << " }";
            }
            out << "\n";
          } else if constexpr (std::is_same_v<T, Cocycle2Decl>) {
            out << "cocycle2 " << d.name << " : " << d.group << " -> " << d.module << " = {";
            bool first = true;
            for (int g = 0; g < d.values.n; ++g)
              for (int h = 0; h < d.values.n; ++h)
                if (!detail::elem_zero(d.values(g, h))) {
                  out << (first ? " " : ", ") << "(" << g << ", " << h << "): " << detail::elem_text(d.values(g, h));
                  first = false;
                }
            out << (first ? "}" : " }") << "\n";
          } else if constexpr (std::is_same_v<T, Cocycle1Decl>) {
            out << "cocycle1 " << d.name << " : " << d.group << " -> " << d.module << " = {";
            bool first = true;
            for (std::size_t g = 0; g < d.values.values.size(); ++g)
              if (!detail::elem_zero(d.values.values[g])) {
                out << (first ? " " : ", ") << g << ": " << detail::elem_text(d.values.values[g]);
                first = false;
              }
            out << (first ? "}" : " }") << "\n";
          } else if constexpr (std::is_same_v<T, GDiagramDecl>) {
            out << "gdiagram " << d.name << " over " << d.module << " : ";
            if (d.diagram.source.empty()) out << "unit";
            for (std::size_t i = 0; i < d.diagram.source.size(); ++i)
              out << (i ? " " : "") << "(" << d.diagram.source[i].g << ", " << (d.diagram.source[i].coor > 0 ? "+" : "-")
                  << ")";
            out << " {";
            if (d.diagram.layers.empty()) out << "}\n";
            else {
              out << "\n";
              for (std::size_t k = 0; k < d.diagram.layers.size(); ++k)
                out << "  " << glayer_text(d.diagram.layers[k]) << (k + 1 < d.diagram.layers.size() ? ";" : "") << "\n";
              out << "}\n";
            }
          }
        },
        decl);
  }
  return out.str();
}

// Validates a diagram declaration, including its declared target.
inline DiagObject validate_decl(const DiagramDecl& d) {
  DiagObject t = validate(d.diagram);
  if (t != d.declared_target)
    throw ValidationError(ValidationError::Code::BoundaryMismatch, ValidationError::npos,
                          "diagram " + d.name + " ends at " + t.str() + " but declares target " + d.target + " = " +
                              d.declared_target.str());
  return t;
}

}  // namespace entronet
