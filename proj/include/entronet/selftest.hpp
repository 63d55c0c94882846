#pragma once

#include "entronet/catalog.hpp"
#include "entronet/dsl.hpp"
#include "entronet/random.hpp"
#include "entronet/render.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace entronet {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0;
  double limit = 0;
  std::string detail;
};

struct SelftestOptions {
  std::uint64_t seed = seed_from_env();
  std::string fixture_dir;  // *.net files; empty skips the fixture part of criterion 14
  std::string golden_dir;   // *.svg goldens named after fixture and diagram
  std::set<int> only;       // empty runs all
};

// The worked five-strand diagram X+(a1+a2) Y+(c1 c2) X+(a3/c2+a4) with splits, crossings and a merge.
inline Diagram worked_example(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                              const Rational& c1, const Rational& c2) {
  Diagram d;
  d.source = DiagObject{{Xp(a1 + a2), Yp(c1 * c2), Xp(a3 / c2 + a4)}};
  d.layers = {make_layer(GenKind::AddSplit, 0, {a1, a2}), make_layer(GenKind::AddSplit, 3, {a3 / c2, a4}),
              make_layer(GenKind::MultSplit, 2, {c1, c2}),  make_layer(GenKind::YXCross, 1),
              make_layer(GenKind::XYCross, 3),              make_layer(GenKind::AddMerge, 2)};
  return d;
}

inline PrimeVector worked_example_expected(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                                           const Rational& c1, const Rational& c2) {
  return -1 * symbol(a1, a2) + symbol(a2, c1 * a3) - symbol(c1 * a3, c1 * c2 * a4);
}

// Tag balance and attribute quoting, enough for the emitter's flat output.
inline bool svg_well_formed(const std::string& s, std::size_t* elements = nullptr) {
  std::vector<std::string> stack;
  std::size_t count = 0, i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    std::size_t j = s.find('>', i);
    if (j == std::string::npos) return false;
    std::string tag = s.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    std::string name = tag.substr(0, tag.find_first_of(" /"));
    static const std::set<std::string> allowed{"svg", "path", "line", "text", "circle"};
    if (!allowed.count(name)) return false;
    ++count;
    if (tag.back() != '/') stack.push_back(name);
  }
  if (elements) *elements = count;
  return stack.empty();
}

namespace detail {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

inline Rational bounded_rational(Rng& r, long long bound) {
  return Rational(r.uniform(-bound, bound), r.uniform(1, bound));
}

inline Outcome c1_binary_entropy(Rng&) {
  Outcome o;
  EntropyScalar h = shannon_entropy({Rational(1, 2), Rational(1, 2)});
  PrimeVector want;
  want.add_term(2, 1);
  if (h.constant != 0 || !(h.logpart == want)) o.fail("logpart " + h.str());
  double f = render_float(h);
  if (std::fabs(f - 0.6931471805599453) > 1e-12) o.fail("float " + format_double(f));
  o.detail = o.ok ? "H(1/2,1/2) = " + h.log_str() + " = " + format_double(f) : o.detail;
  return o;
}

inline Outcome c2_symbol_relations(Rng& r) {
  Outcome o;
  for (int t = 0; t < 1000 && o.ok; ++t) {
    Rational a = bounded_rational(r, 10000), b = bounded_rational(r, 10000), c = bounded_rational(r, 10000);
    if (!(symbol(a, b) == symbol(b, a))) o.fail("symmetry at " + to_string(a) + ", " + to_string(b));
    if (!(symbol(a, b) + symbol(a + b, c) == symbol(b, c) + symbol(a, b + c)))
      o.fail("cocycle at " + to_string(a) + ", " + to_string(b) + ", " + to_string(c));
    if (c != 0 && !(scale(NonzeroRational(c), symbol(a, b)) == symbol(c * a, c * b)))
      o.fail("scaling at " + to_string(a) + ", " + to_string(b) + ", " + to_string(c));
  }
  if (o.ok) o.detail = "1000 triples: symmetry, 2-cocycle, scaling";
  return o;
}

inline Outcome c3_entropy_four_term(Rng& r) {
  Outcome o;
  double worst = 0;
  auto H = [](const Rational& p) { return binary_entropy(p); };
  auto Hf = [](double p) { return bracket_H_float(p, 1 - p); };
  int done = 0;
  while (done < 1000 && o.ok) {
    Rational p = bounded_rational(r, 60), q = bounded_rational(r, 60);
    if (p == 0 || p == 1 || q == 1) continue;
    ++done;
    EntropyScalar four = H(p) - H(q) + p * H(q / p) + (1 - p) * H((1 - q) / (1 - p));
    if (!four.is_zero()) o.fail("four-term at p=" + to_string(p) + ", q=" + to_string(q));
    EntropyScalar symm = H(p) + (1 - p) * H(q / (1 - p)) - H(q) - (1 - q) * H(p / (1 - q));
    if (!symm.is_zero()) o.fail("symmetric form at p=" + to_string(p) + ", q=" + to_string(q));
    double pf = to_double(p), qf = to_double(q);
    double res = Hf(pf) - Hf(qf) + pf * Hf(qf / pf) + (1 - pf) * Hf((1 - qf) / (1 - pf));
    worst = std::max(worst, std::fabs(res));
  }
  if (worst >= 1e-10) o.fail("float residual " + format_double(worst));
  if (o.ok) o.detail = "1000 pairs exact; max float residual " + format_double(worst);
  return o;
}

inline Outcome c4_beta_four_term(Rng& r) {
  Outcome o;
  int done = 0;
  while (done < 1000 && o.ok) {
    Rational a = bounded_rational(r, 100), b = bounded_rational(r, 100);
    if (a == 0 || a == 1 || b == 0 || b == 1) continue;
    ++done;
    BetaSymbol s{{{1, a}, {-1, b}, {a, b / a}, {1 - a, (1 - b) / (1 - a)}}};
    if (!beta_to_j(s).is_zero()) o.fail("a=" + to_string(a) + ", b=" + to_string(b));
  }
  if (o.ok) o.detail = "1000 pairs";
  return o;
}

inline Outcome c5_boundary_theorem(Rng& r) {
  Outcome o;
  std::size_t dots = 0, layers = 0;
  for (int t = 0; t < 10000 && o.ok; ++t) {
    DiagramShape s;
    s.mode = static_cast<Mode>(t % 3);
    Diagram d = random_diagram(r, s);
    layers += d.layers.size();
    for (const auto& L : d.layers) dots += L.kind == GenKind::Dot;
    DiagObject tgt = validate(d);
    JValue lhs = difference(j_invariant(d), dot_total(d));
    JValue rhs = difference(jstar(d.source, d.mode), jstar(tgt, d.mode));
    if (!values_equal(lhs, rhs)) o.fail("diagram " + std::to_string(t) + " in mode " + mode_str(d.mode));
  }
  if (o.ok) o.detail = "10000 diagrams, " + std::to_string(layers) + " layers, " + std::to_string(dots) + " dots";
  return o;
}

inline Outcome c6_rewrites(Rng& r) {
  Outcome o;
  for (const auto& rule : rule_catalog()) {
    for (int t = 0; t < 1000 && o.ok; ++t) {
      RuleSite site = sample_site(r, rule.name, static_cast<Mode>(t % 3));
      const Diagram& d = site.diagram;
      if (!rule.matcher(d, site.at)) {
        o.fail(rule.name + ": sampled site does not match");
        break;
      }
      Diagram e = rule.transform(d, site.at);
      if (e.source != d.source || validate(e) != validate(d)) o.fail(rule.name + ": boundary changed");
      else if (!values_equal(j_invariant(e), j_invariant(d))) o.fail(rule.name + ": invariant changed");
    }
  }
  for (int t = 0; t < 1000 && o.ok; ++t) {
    DiagramShape s;
    s.mode = static_cast<Mode>(t % 3);
    Diagram d = random_diagram(r, s);
    Diagram n = normalize(d);
    if (!(normalize(n) == n)) o.fail("normalize not idempotent");
    if (validate(n) != validate(d) || !values_equal(j_invariant(n), j_invariant(d))) o.fail("normalize changed j");
  }
  if (o.ok) o.detail = std::to_string(rule_catalog().size()) + " rules x 1000 sites; normalize on 1000 diagrams";
  return o;
}

inline Outcome c7_chain_rule(Rng& r) {
  Outcome o;
  for (int t = 0; t < 200 && o.ok; ++t) {
    std::size_t n = 1 + r.index(5);
    auto z = r.distribution(n);
    std::vector<std::vector<Rational>> ys;
    for (std::size_t i = 0; i < n; ++i) ys.push_back(r.distribution(1 + r.index(4)));
    if (!chain_rule_check(z, ys)) o.fail("sample " + std::to_string(t));
  }
  if (o.ok) o.detail = "200 samples, scalar and diagram forms";
  return o;
}

inline Outcome c8_closed_vanishing(Rng& r) {
  Outcome o;
  std::vector<GModule> mods;
  for (int n = 2; n <= 8; ++n) mods.push_back(GModule(Group::cyclic(n), {n}));
  mods.push_back(affine_module(Group::aff1modp(3), 3));
  long long vertices = 0;
  for (const auto& U : mods) {
    HSolver S(U, 2);
    for (int t = 0; t < 1000 && o.ok; ++t) {
      Cochain2 c = random_cocycle2(r, U, S);
      GDiagram d = random_closed_gdiagram(r, U);
      vertices += static_cast<long long>(d.layers.size());
      if (!is_normalized(U, c) || !verify_cocycle2(U, c)) o.fail("generated cochain is not a normalized cocycle");
      else if (!is_closed(U, d)) o.fail("generated network is not closed");
      else if (!U.is_zero(eval_alpha_c(U, d, c)))
        o.fail("nonzero evaluation over group of order " + std::to_string(U.group().order()));
    }
  }
  if (o.ok) o.detail = "8 groups x 1000 closed networks, " + std::to_string(vertices) + " layers";
  return o;
}

inline Outcome c9_carry(Rng&) {
  Outcome o;
  for (int N = 2; N <= 12 && o.ok; ++N) {
    auto [U, c] = carry(N);
    if (!verify_cocycle2(U, c)) o.fail("carry(" + std::to_string(N) + ") is not a cocycle");
    auto prof = order_profile(central_extension(U, c));
    if (!prof.count(N * N)) o.fail("extension for N=" + std::to_string(N) + " is not cyclic");
  }
  if (o.ok) o.detail = "N = 2..12, extensions cyclic of order N^2";
  return o;
}

inline Outcome c10_solver(Rng&) {
  Outcome o;
  std::vector<GModule> cases{GModule(Group::cyclic(2), {2}), GModule(Group::cyclic(2), {3}),
                             GModule(Group::cyclic(3), {3}),
                             GModule(Group::product(Group::cyclic(2), Group::cyclic(2)), {2})};
  for (const auto& U : cases) {
    CrossCheck x = cross_check(U, 2);
    if (!x.ok()) o.fail("enumeration disagrees for |G|=" + std::to_string(U.group().order()) + ", |U|=" + std::to_string(U.size()));
  }
  for (int n = 1; n <= 6 && o.ok; ++n)
    for (int m = 1; m <= 6; ++m) {
      HSolver S(GModule(Group::cyclic(n), {m}), 2);
      if (S.order() != std::gcd(n, m)) o.fail("H2(Z/" + std::to_string(n) + ", Z/" + std::to_string(m) + ")");
    }
  if (o.ok) o.detail = "4 enumeration cross-checks; gcd law for n,m <= 6";
  return o;
}

inline Outcome c11_witt(Rng&) {
  Outcome o;
  for (int p : {2, 3, 5, 7}) {
    auto [U, c] = witt(p);
    if (!verify_cocycle2(U, c)) o.fail("witt(" + std::to_string(p) + ") is not a cocycle");
    if (p <= 3 && HSolver(U, 2).is_coboundary(c)) o.fail("witt(" + std::to_string(p) + ") is a coboundary");
  }
  if (o.ok) o.detail = "cocycle for p = 2,3,5,7; nontrivial class for p = 2,3";
  return o;
}

inline Outcome c12_tsallis(Rng& r) {
  Outcome o;
  for (int alpha : {2, 3, 4})
    for (int t = 0; t < 200 && o.ok; ++t) {
      Rational p = r.unit_interval_open(1000);
      if (bracket_tsallis(p, 1 - p, alpha) != -(alpha - 1) * tsallis_entropy({p, 1 - p}, alpha))
        o.fail("alpha=" + std::to_string(alpha) + ", p=" + to_string(p));
    }
  if (o.ok) o.detail = "alpha = 2,3,4 x 200 samples";
  return o;
}

inline Outcome c13_worked_example(Rng& r) {
  Outcome o;
  for (int t = 0; t < 50 && o.ok; ++t) {
    Rational a1 = r.rational(), a2 = r.rational(), a3 = r.rational(), a4 = r.rational();
    Rational c1 = r.nonzero(), c2 = r.nonzero();
    Diagram d = worked_example(a1, a2, a3, a4, c1, c2);
    DiagObject tgt = validate(d);
    PrimeVector j = std::get<PrimeVector>(j_invariant(d));
    if (!(j == worked_example_expected(a1, a2, a3, a4, c1, c2))) o.fail("instantiation " + std::to_string(t));
    if (!(j == jstar_vector(d.source) - jstar_vector(tgt))) o.fail("boundary form, instantiation " + std::to_string(t));
  }
  if (o.ok) o.detail = "50 instantiations";
  return o;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::filesystem::path> fixtures(const std::string& dir) {
  std::vector<std::filesystem::path> out;
  if (dir.empty() || !std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".net") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline Outcome c14_dsl_svg(Rng& r, const SelftestOptions& opt) {
  Outcome o;
  std::size_t files = 0, goldens = 0, renders = 0;
  for (const auto& path : fixtures(opt.fixture_dir)) {
    std::string text = read_file(path);
    SourceFile f;
    try {
      f = parse(text);
    } catch (const std::exception&) {
      continue;  // deliberately malformed fixtures
    }
    ++files;
    std::string p = print(f);
    if (!(parse(p) == f) || print(parse(p)) != p) o.fail("round trip of " + path.filename().string());
    for (const auto* d : f.all<DiagramDecl>()) {
      try {
        validate_decl(*d);
      } catch (const ValidationError&) {
        continue;
      }
      std::string s1 = to_svg(d->diagram), s2 = to_svg(d->diagram);
      ++renders;
      std::size_t count = 0;
      if (s1 != s2) o.fail("nondeterministic render of " + d->name);
      if (!svg_well_formed(s1, &count) || count != svg_element_count(d->diagram.layers.size()))
        o.fail("malformed render of " + d->name);
      if (!opt.golden_dir.empty()) {
        auto g = std::filesystem::path(opt.golden_dir) / (path.stem().string() + "." + d->name + ".svg");
        if (std::filesystem::exists(g)) {
          ++goldens;
          if (read_file(g) != s1) o.fail("golden mismatch for " + g.filename().string());
        }
      }
    }
  }
  for (int t = 0; t < 1000 && o.ok; ++t) {
    SourceFile f = random_source(r);
    std::string p = print(f);
    SourceFile g = parse(p);
    if (!(g == f) || print(g) != p) o.fail("round trip of generated source " + std::to_string(t));
  }
  if (o.ok)
    o.detail = std::to_string(files) + " fixtures, 1000 generated sources, " + std::to_string(renders) + " renders, " +
               std::to_string(goldens) + " goldens";
  return o;
}

}  // namespace detail

inline std::vector<CriterionResult> run_selftest(const SelftestOptions& opt, std::ostream* progress = nullptr) {
  struct Entry {
    int id;
    const char* title;
    double limit;
    std::function<detail::Outcome(Rng&)> run;
  };
  std::vector<Entry> entries{
      {1, "binary entropy normalization", 1, detail::c1_binary_entropy},
      {2, "symbol relations", 10, detail::c2_symbol_relations},
      {3, "entropy four-term and symmetric form", 10, detail::c3_entropy_four_term},
      {4, "beta four-term relation", 10, detail::c4_beta_four_term},
      {5, "boundary theorem", 60, detail::c5_boundary_theorem},
      {6, "rewrite invariance and normalize", 60, detail::c6_rewrites},
      {7, "entropy chain rule", 10, detail::c7_chain_rule},
      {8, "closed networks evaluate to zero", 60, detail::c8_closed_vanishing},
      {9, "carry cocycle", 5, detail::c9_carry},
      {10, "H2 solver against enumeration", 120, detail::c10_solver},
      {11, "Witt cocycle", 10, detail::c11_witt},
      {12, "Tsallis bracket", 5, detail::c12_tsallis},
      {13, "worked diagram", 5, detail::c13_worked_example},
      {14, "text format round trip and SVG", 10, [&opt](Rng& r) { return detail::c14_dsl_svg(r, opt); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& e : entries) {
    if (!opt.only.empty() && !opt.only.count(e.id)) continue;
    Rng rng(opt.seed + static_cast<std::uint64_t>(e.id));
    CriterionResult res{e.id, e.title, false, 0, e.limit, ""};
    auto t0 = std::chrono::steady_clock::now();
    try {
      detail::Outcome o = e.run(rng);
      res.passed = o.ok;
      res.detail = o.detail;
    } catch (const std::exception& ex) {
      res.detail = std::string("exception: ") + ex.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.passed && res.seconds >= res.limit) {
      res.passed = false;
      res.detail += "; over time limit";
    }
    if (progress) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%6.2fs / %gs", res.seconds, res.limit);
      *progress << (res.passed ? "PASS" : "FAIL") << " " << res.id << " " << res.title << " (" << buf << ") "
                << res.detail << std::endl;
    }
    out.push_back(res);
  }
  return out;
}

}  // namespace entronet
