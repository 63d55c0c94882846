#include "entronet/catalog.hpp"
#include "entronet/dsl.hpp"
#include "entronet/random.hpp"
#include "entronet/render.hpp"
#include "entronet/selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef ENTRONET_DEFAULT_FIXTURES
#define ENTRONET_DEFAULT_FIXTURES ""
#endif
#ifndef ENTRONET_DEFAULT_GOLDENS
#define ENTRONET_DEFAULT_GOLDENS ""
#endif

using namespace entronet;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kInvalid = 3, kUsage = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  bool as_json = false;
  json doc = json::object();
  std::vector<std::string> lines;

  void line(const std::string& s) { lines.push_back(s); }
  int emit(int code) const {
    if (as_json) std::cout << doc.dump(2) << "\n";
    else
      for (const auto& l : lines) std::cout << l << "\n";
    return code;
  }
};

std::string read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

template <class T>
const T& lookup(const SourceFile& f, const std::string& name, const char* what) {
  if (auto* p = f.find<T>(name)) return *p;
  throw UsageError(std::string("no ") + what + " named '" + name + "'");
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16g", x);
  return buf;
}

std::vector<Rational> parse_dist(const std::string& s) {
  try {
    return parse_rational_list(s);
  } catch (const std::exception& e) {
    throw UsageError("bad distribution '" + s + "': " + e.what());
  }
}

void require_distribution(const std::vector<Rational>& p, const std::string& what) {
  Rational sum = 0;
  for (const auto& x : p) {
    if (x < 0 || x > 1) throw ValidationError(ValidationError::Code::WeightMismatch, ValidationError::npos,
                                              what + " has an entry outside [0, 1]");
    sum += x;
  }
  if (p.empty() || sum != 1)
    throw ValidationError(ValidationError::Code::WeightMismatch, ValidationError::npos, what + " does not sum to 1");
}

json profile_json(const std::map<int, int>& prof) {
  json j = json::object();
  for (const auto& [k, n] : prof) j[std::to_string(k)] = n;
  return j;
}

// --- subcommands ---------------------------------------------------------

int cmd_validate(Report& R, const std::string& file) {
  SourceFile f = parse(read_source(file));
  R.doc["file"] = file;
  R.doc["diagrams"] = json::array();
  R.doc["gdiagrams"] = json::array();
  R.doc["cocycles"] = json::array();
  for (const auto* d : f.all<DiagramDecl>()) {
    try {
      DiagObject t = validate_decl(*d);
      R.line("diagram " + d->name + " : " + d->diagram.source.str() + " -> " + t.str() + " ok");
      R.doc["diagrams"].push_back({{"name", d->name}, {"source", d->diagram.source.str()}, {"target", t.str()},
                                   {"layers", d->diagram.layers.size()}, {"mode", mode_str(d->diagram.mode)}});
    } catch (const ValidationError& e) {
      throw ValidationError(e.code, ValidationError::npos, "diagram " + d->name + ": " + e.what());
    }
  }
  for (const auto* g : f.all<GDiagramDecl>()) {
    const GModule& U = f.get<ModuleDecl>(g->module, "module").module;
    try {
      auto t = g_validate(U, g->diagram);
      R.line("gdiagram " + g->name + " : " + std::to_string(g->diagram.source.size()) + " -> " + std::to_string(t.size()) +
             " strands ok" + (is_closed(U, g->diagram) ? " closed" : ""));
      R.doc["gdiagrams"].push_back({{"name", g->name}, {"closed", is_closed(U, g->diagram)}, {"layers", g->diagram.layers.size()}});
    } catch (const GValidationError& e) {
      throw ValidationError(ValidationError::Code::KindMismatch, e.layer, "gdiagram " + g->name + ": " + e.what());
    }
  }
  for (const auto* c : f.all<Cocycle2Decl>()) {
    const GModule& U = f.get<ModuleDecl>(c->module, "module").module;
    bool ok = verify_cocycle2(U, c->values), norm = is_normalized(U, c->values);
    R.line("cocycle2 " + c->name + " cocycle " + (ok ? "yes" : "no") + " normalized " + (norm ? "yes" : "no"));
    R.doc["cocycles"].push_back({{"name", c->name}, {"degree", 2}, {"cocycle", ok}, {"normalized", norm}});
  }
  for (const auto* c : f.all<Cocycle1Decl>()) {
    const GModule& U = f.get<ModuleDecl>(c->module, "module").module;
    bool ok = verify_cocycle1(U, c->values);
    R.line("cocycle1 " + c->name + " cocycle " + (ok ? "yes" : "no"));
    R.doc["cocycles"].push_back({{"name", c->name}, {"degree", 1}, {"cocycle", ok}});
  }
  R.line("ok");
  R.doc["ok"] = true;
  return kOk;
}

int cmd_weight(Report& R, const std::string& file, const std::string& name) {
  SourceFile f = parse(read_source(file));
  const auto& o = lookup<ObjectDecl>(f, name, "object");
  check_object(o.object);
  AffWeight w = object_weight(o.object);
  R.line(w.str());
  R.doc = {{"object", name}, {"a", to_string(w.a)}, {"c", to_string(w.c)}};
  return kOk;
}

int cmd_jinv(Report& R, const std::string& file, const std::string& name, std::string format) {
  SourceFile f = parse(read_source(file));
  const auto& d = lookup<DiagramDecl>(f, name, "diagram");
  validate_decl(d);
  JValue j = j_invariant(d.diagram);
  if (format.empty())
    format = d.diagram.mode == Mode::J ? "prime-vector" : (d.diagram.mode == Mode::HExact ? "entropy" : "float");
  std::string out;
  if (auto* v = std::get_if<PrimeVector>(&j)) {
    if (format == "prime-vector") out = v->str();
    else if (format == "entropy") out = entropy_render(*v).log_str();
    else out = fmt_double(render_float(entropy_render(*v)));
  } else if (auto* e = std::get_if<EntropyScalar>(&j)) {
    if (format == "prime-vector") out = e->str();
    else if (format == "entropy") out = e->log_str();
    else out = fmt_double(render_float(*e));
  } else {
    if (format != "float") throw UsageError("diagram " + name + " is in Hfloat mode; only --format float applies");
    out = fmt_double(std::get<double>(j));
  }
  R.line(out);
  R.doc = {{"diagram", name}, {"mode", mode_str(d.diagram.mode)}, {"format", format}, {"value", out}};
  return kOk;
}

int cmd_entropy(Report& R, const std::string& dist) {
  auto p = parse_dist(dist);
  require_distribution(p, "distribution");
  EntropyScalar h = shannon_entropy(p);
  double fl = render_float(h);
  bool agree = h == shannon_direct(p);
  R.line("exact: " + h.log_str());
  R.line("logpart: " + h.logpart.str());
  R.line("float: " + fmt_double(fl));
  R.doc = {{"exact", h.log_str()}, {"logpart", h.logpart.str()}, {"constant", to_string(h.constant)},
           {"float", fl}, {"direct_agrees", agree}};
  return agree ? kOk : kFailed;
}

int cmd_chain(Report& R, const std::string& zs, const std::vector<std::string>& ys_text) {
  auto z = parse_dist(zs);
  require_distribution(z, "Z");
  std::vector<std::vector<Rational>> ys;
  for (std::size_t i = 0; i < ys_text.size(); ++i) {
    ys.push_back(parse_dist(ys_text[i]));
    require_distribution(ys.back(), "Y" + std::to_string(i + 1));
  }
  if (ys.size() != z.size()) throw UsageError("need one --y per entry of --z");
  EntropyScalar lhs = shannon_direct(chain_composite(z, ys));
  EntropyScalar rhs = shannon_direct(z);
  for (std::size_t i = 0; i < z.size(); ++i) rhs += z[i] * shannon_direct(ys[i]);
  bool ok = chain_rule_check(z, ys);
  R.line("composite: " + lhs.log_str());
  R.line("chain: " + rhs.log_str());
  R.line("float: " + fmt_double(render_float(lhs)));
  R.line(std::string("verified: ") + (ok ? "yes" : "no"));
  R.doc = {{"composite", lhs.log_str()}, {"chain", rhs.log_str()}, {"float", render_float(lhs)}, {"verified", ok}};
  return ok ? kOk : kFailed;
}

int cmd_normalize(Report& R, const std::string& file, const std::string& name, const std::string& out) {
  SourceFile f = parse(read_source(file));
  const auto& d = lookup<DiagramDecl>(f, name, "diagram");
  validate_decl(d);
  Diagram n = normalize(d.diagram);
  SourceFile g;
  for (const auto& obj : {d.source, d.target})
    if (obj != "unit" && !g.find<ObjectDecl>(obj)) g.decls.push_back(*f.find<ObjectDecl>(obj));
  DiagramDecl nd = d;
  nd.diagram = n;
  g.decls.push_back(nd);
  std::string text = print(g);
  bool same = values_equal(j_invariant(n), j_invariant(d.diagram));
  if (R.as_json) {
    R.doc = {{"diagram", name}, {"layers_before", d.diagram.layers.size()}, {"layers_after", n.layers.size()},
             {"invariant_preserved", same}, {"source", text}};
    if (!out.empty()) write_output(out, text);
  } else if (!out.empty()) {
    write_output(out, text);
    R.line("wrote " + out);
  } else {
    std::istringstream s(text);
    for (std::string l; std::getline(s, l);) R.line(l);
  }
  return same ? kOk : kFailed;
}

int cmd_check_rewrites(Report& R, const std::string& file, const std::string& name, int trials) {
  if (trials < 0) throw UsageError("--trials must be nonnegative");
  SourceFile f = parse(read_source(file));
  const auto& decl = lookup<DiagramDecl>(f, name, "diagram");
  DiagObject target = validate_decl(decl);
  Diagram cur = decl.diagram;
  const JValue j0 = j_invariant(cur);
  Rng rng;
  std::map<std::string, int> applied;
  int total = 0, stuck = 0;
  bool ok = true;
  std::string failure;
  for (int t = 0; t < trials && ok; ++t) {
    std::vector<std::pair<const RewriteRule*, std::size_t>> sites;
    for (const auto& rule : rule_catalog())
      for (std::size_t k : matching_sites(cur, rule)) sites.push_back({&rule, k});
    if (sites.empty()) {
      ++stuck;
      break;
    }
    auto [rule, at] = sites[rng.index(sites.size())];
    Diagram next = rule->transform(cur, at);
    DiagObject t2;
    try {
      t2 = validate(next);
    } catch (const ValidationError& e) {
      ok = false;
      failure = rule->name + " produced an invalid diagram: " + e.what();
      break;
    }
    if (next.source != decl.diagram.source || t2 != target) {
      ok = false;
      failure = rule->name + " changed the boundary";
    } else if (!values_equal(j_invariant(next), j0)) {
      ok = false;
      failure = rule->name + " changed the invariant";
    }
    ++applied[rule->name];
    ++total;
    cur = std::move(next);
  }
  R.doc = {{"diagram", name}, {"trials", trials}, {"applied", total}, {"preserved", ok}, {"by_rule", applied}};
  for (const auto& [k, n] : applied) R.line(k + " " + std::to_string(n));
  R.line("applied " + std::to_string(total) + " of " + std::to_string(trials));
  if (stuck) R.line("no applicable site remained");
  R.line(std::string("preserved: ") + (ok ? "yes" : "no"));
  if (!ok) {
    R.doc["failure"] = failure;
    std::cerr << "check-rewrites: " << failure << "\n";
  }
  return ok ? kOk : kFailed;
}

int cmd_eval(Report& R, const std::string& file, const std::string& name, const std::string& with,
             const std::vector<std::string>& cocycles) {
  SourceFile f = parse(read_source(file));
  const auto& g = lookup<GDiagramDecl>(f, name, "gdiagram");
  const GModule& U = f.get<ModuleDecl>(g.module, "module").module;
  g_validate(U, g.diagram);
  const Cocycle2Decl* c2 = nullptr;
  const Cocycle1Decl* c1 = nullptr;
  for (const auto& cn : cocycles) {
    if (auto* p = f.find<Cocycle2Decl>(cn)) {
      if (c2) throw UsageError("more than one two-cocycle given");
      c2 = p;
    } else if (auto* q = f.find<Cocycle1Decl>(cn)) {
      if (c1) throw UsageError("more than one one-cocycle given");
      c1 = q;
    } else {
      throw UsageError("no cocycle named '" + cn + "'");
    }
  }
  auto same_module = [&](const std::string& m, const std::string& cn) {
    if (m != g.module)
      throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos,
                            "cocycle " + cn + " takes values in " + m + " but " + name + " is over " + g.module);
  };
  if (c2) {
    same_module(c2->module, c2->name);
    if (!verify_cocycle2(U, c2->values))
      throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos, c2->name + " is not a two-cocycle");
  }
  if (c1) {
    same_module(c1->module, c1->name);
    if (!verify_cocycle1(U, c1->values))
      throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos, c1->name + " is not a one-cocycle");
  }
  Elem v;
  if (with == "alphaU") {
    if (c1 || c2) throw UsageError("alphaU takes no cocycle");
    v = eval_alpha_U(U, g.diagram);
  } else if (with == "alphaF") {
    if (!c1 || c2) throw UsageError("alphaF needs exactly one one-cocycle");
    v = eval_alpha_f(U, g.diagram, c1->values);
  } else if (with == "alphaC") {
    if (!c2 || c1) throw UsageError("alphaC needs exactly one two-cocycle");
    v = eval_alpha_c(U, g.diagram, c2->values);
  } else {
    if (!c1 || !c2) throw UsageError("alphaCF needs a two-cocycle and a one-cocycle");
    v = eval_alpha_cf(U, g.diagram, c2->values, c1->values);
  }
  bool closed = is_closed(U, g.diagram);
  R.line(U.str(v));
  R.doc = {{"gdiagram", name}, {"with", with}, {"value", v}, {"text", U.str(v)}, {"closed", closed}};
  return kOk;
}

int cmd_extension(Report& R, const std::string& file, const std::string& name) {
  SourceFile f = parse(read_source(file));
  const auto& c = lookup<Cocycle2Decl>(f, name, "two-cocycle");
  const GModule& U = f.get<ModuleDecl>(c.module, "module").module;
  if (!verify_cocycle2(U, c.values))
    throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos, name + " is not a two-cocycle");
  if (!is_normalized(U, c.values))
    throw ValidationError(ValidationError::Code::KindMismatch, ValidationError::npos, name + " is not normalized");
  Group E = central_extension(U, c.values);
  auto prof = order_profile(E);
  R.line("order " + std::to_string(E.order()));
  R.line(std::string("abelian ") + (E.is_abelian() ? "yes" : "no"));
  for (const auto& [k, n] : prof) R.line("elements of order " + std::to_string(k) + ": " + std::to_string(n));
  R.doc = {{"cocycle", name}, {"order", E.order()}, {"abelian", E.is_abelian()}, {"order_profile", profile_json(prof)}};
  return kOk;
}

Group group_from_arg(const std::string& arg) {
  if (auto x = arg.find('x'); x != std::string::npos)
    return Group::product(group_from_arg(arg.substr(0, x)), group_from_arg(arg.substr(x + 1)));
  auto colon = arg.find(':');
  if (colon == std::string::npos) throw UsageError("group must look like cyclic:N, aff1modp:P or AxB");
  std::string kind = arg.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(arg.substr(colon + 1));
  } catch (...) {
    throw UsageError("bad group parameter in '" + arg + "'");
  }
  if (kind == "cyclic") {
    if (n < 1 || n > kMaxSolverGroupOrder) throw UsageError("cyclic order must be in 1.." + std::to_string(kMaxSolverGroupOrder));
    return Group::cyclic(n);
  }
  if (kind == "aff1modp") {
    if (n < 2 || n > 7 || !is_prime(BigInt(n))) throw UsageError("aff1modp needs a prime p <= 7");
    return Group::aff1modp(n);
  }
  throw UsageError("unknown group kind '" + kind + "'");
}

int cmd_h2(Report& R, const std::string& garg, const std::string& marg, const std::string& action, int degree,
           bool enumerate) {
  Group G = group_from_arg(garg);
  if (marg.rfind("z:", 0) != 0) throw UsageError("module must look like z:M or z:M,N");
  std::vector<long long> moduli;
  try {
    for (const auto& r : parse_rational_list(marg.substr(2))) {
      if (denom(r) != 1 || r < 1) throw UsageError("moduli must be positive integers");
      moduli.push_back(numer(r).convert_to<long long>());
    }
  } catch (const RationalSyntaxError&) {
    throw UsageError("bad module '" + marg + "'");
  }
  GModule U;
  if (action == "trivial") U = GModule(G, moduli);
  else if (action == "affine") {
    if (G.label().rfind("aff1modp(", 0) != 0 || moduli.size() != 1)
      throw UsageError("affine action needs --group aff1modp:P and --module z:P");
    int p = std::stoi(garg.substr(garg.find(':') + 1));
    if (moduli[0] != p) throw UsageError("affine action needs --module z:P");
    U = affine_module(G, p);
  } else {
    if (G.order() % 2 || G.label().rfind("cyclic(", 0) != 0) throw UsageError("sign action needs a cyclic group of even order");
    U = sign_module(G, moduli);
  }
  HSolver S(U, degree);
  std::string inv;
  for (long long d : S.invariants()) inv += (inv.empty() ? "" : " ") + std::to_string(d);
  R.line("order " + std::to_string(S.order()));
  R.line("invariants " + (inv.empty() ? std::string("trivial") : inv));
  R.doc = {{"group", G.label()}, {"group_order", G.order()}, {"degree", degree}, {"order", S.order()},
           {"invariants", S.invariants()}};
  int code = kOk;
  if (enumerate) {
    try {
      CrossCheck x = cross_check(U, degree);
      R.line(std::string("enumeration ") + (x.ok() ? "agrees" : "disagrees"));
      R.doc["enumeration"] = x.ok() ? "agrees" : "disagrees";
      if (!x.ok()) code = kFailed;
    } catch (const SolverError& e) {
      R.line("enumeration skipped");
      R.doc["enumeration"] = "skipped";
      std::cerr << "h2: " << e.what() << "\n";
    }
  }
  return code;
}

std::string emit_source(const GModule& U, const Cochain2& c) {
  SourceFile f;
  const std::string group = "G";
  GroupDecl g;
  g.name = group;
  g.form = GroupDecl::Form::Cyclic;
  g.param = U.group().order();
  g.group = U.group();
  f.decls.push_back(g);
  f.decls.push_back(ModuleDecl{"U", group, U});
  f.decls.push_back(Cocycle2Decl{"c", group, "U", c});
  return print(f);
}

int cmd_catalog(Report& R, const std::string& which, int n, const std::string& sequence, const std::string& masses,
                bool emit) {
  if (which == "carry" || which == "witt") {
    CatalogCocycle cc = which == "carry" ? carry(n) : witt(n);
    bool ok = verify_cocycle2(cc.module, cc.cocycle);
    auto prof = order_profile(central_extension(cc.module, cc.cocycle));
    int N = cc.module.group().order();
    bool cyclic_ext = prof.count(N * N) > 0;
    bool cob = HSolver(cc.module, 2).is_coboundary(cc.cocycle);
    if (emit) {
      std::istringstream s(emit_source(cc.module, cc.cocycle));
      for (std::string l; std::getline(s, l);) R.line(l);
    } else {
      for (int i = 0; i < N; ++i) {
        std::string row;
        for (int j = 0; j < N; ++j) row += (j ? " " : "") + std::to_string(cc.cocycle(i, j)[0]);
        R.line(row);
      }
      R.line(std::string("cocycle ") + (ok ? "yes" : "no"));
      R.line(std::string("coboundary ") + (cob ? "yes" : "no"));
      R.line(std::string("extension cyclic ") + (cyclic_ext ? "yes" : "no"));
    }
    json table = json::array();
    for (int i = 0; i < N; ++i) {
      json row = json::array();
      for (int j = 0; j < N; ++j) row.push_back(cc.cocycle(i, j)[0]);
      table.push_back(row);
    }
    R.doc = {{"catalog", which}, {"n", N}, {"table", table}, {"cocycle", ok}, {"coboundary", cob},
             {"extension_cyclic", cyclic_ext}, {"order_profile", profile_json(prof)}};
    return ok ? kOk : kFailed;
  }
  if (which == "binomial") {
    MonoidCocycle c = binomial(n, sequence);
    bool ok = verify_monoid_cocycle(c);
    json table = json::array();
    for (int a = 0; a <= c.K; ++a) {
      std::string row;
      json jr = json::array();
      for (int b = 0; a + b <= c.K; ++b) {
        row += (b ? " " : "") + to_string(c(a, b));
        jr.push_back(to_string(c(a, b)));
      }
      if (!emit) R.line(row);
      table.push_back(jr);
    }
    R.line(std::string("cocycle ") + (ok ? "yes" : "no"));
    R.doc = {{"catalog", which}, {"k", c.K}, {"sequence", sequence}, {"table", table}, {"cocycle", ok}};
    return ok ? kOk : kFailed;
  }
  if (which == "pmi") {
    ProbSpace s{parse_dist(masses)};
    PmiReport r = verify_pmi(s);
    bool ok = r.exact_ok && r.max_residual < 1e-10;
    R.line("triples " + std::to_string(r.triples));
    R.line(std::string("exact ") + (r.exact_ok ? "yes" : "no"));
    R.line("max residual " + fmt_double(r.max_residual));
    R.line(std::string("cocycle ") + (ok ? "yes" : "no"));
    R.doc = {{"catalog", which}, {"triples", r.triples}, {"exact", r.exact_ok}, {"max_residual", r.max_residual}, {"cocycle", ok}};
    return ok ? kOk : kFailed;
  }
  throw UsageError("unknown catalog entry '" + which + "'");
}

int cmd_render(Report& R, const std::string& file, const std::string& diagram, const std::string& gdiagram,
               const std::string& out, const RenderOptions& opts) {
  SourceFile f = parse(read_source(file));
  std::string svg;
  if (!diagram.empty() == !gdiagram.empty()) throw UsageError("give exactly one of --diagram and --gdiagram");
  if (!diagram.empty()) {
    const auto& d = lookup<DiagramDecl>(f, diagram, "diagram");
    validate_decl(d);
    svg = to_svg(d.diagram, opts);
  } else {
    const auto& g = lookup<GDiagramDecl>(f, gdiagram, "gdiagram");
    svg = to_svg(f.get<ModuleDecl>(g.module, "module").module, g.diagram, opts);
  }
  if (out.empty() || out == "-") {
    std::cout << svg;
    return kOk;
  }
  write_output(out, svg);
  R.line("wrote " + out);
  R.doc = {{"output", out}, {"bytes", svg.size()}};
  return kOk;
}

int cmd_selftest(Report& R, const std::string& fixtures, const std::string& goldens, const std::vector<int>& only) {
  SelftestOptions opt;
  opt.fixture_dir = fixtures;
  opt.golden_dir = goldens;
  opt.only.insert(only.begin(), only.end());
  auto results = run_selftest(opt, R.as_json ? nullptr : &std::cout);
  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"seconds", r.seconds}, {"limit", r.limit},
                   {"detail", r.detail}});
  }
  R.doc = {{"seed", opt.seed}, {"criteria", arr}, {"passed", all}};
  R.line(all ? "all criteria passed" : "some criteria failed");
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entronet: string diagrams, entropy symbols and group cocycles"};
  app.require_subcommand(1);
  app.fallthrough();
  Report R;
  app.add_flag("--json", R.as_json, "structured output");
  std::function<int()> action;

  std::string file, name, format, out, dist, zs, with, gname, marg, action_kind = "trivial", seq = "natural", masses;
  std::string gdiagram, fixtures = ENTRONET_DEFAULT_FIXTURES, goldens = ENTRONET_DEFAULT_GOLDENS;
  std::vector<std::string> ys, cocycles;
  std::vector<int> only;
  int trials = 100, degree = 2, param = 0;
  bool enumerate = false, emit = false;
  RenderOptions ropts;

  auto* v = app.add_subcommand("validate", "parse a file and validate every diagram");
  v->add_option("FILE", file)->required();
  v->callback([&] { action = [&] { return cmd_validate(R, file); }; });

  auto* w = app.add_subcommand("weight", "affine weight (a, c) of an object");
  w->add_option("FILE", file)->required();
  w->add_option("--object", name)->required();
  w->callback([&] { action = [&] { return cmd_weight(R, file, name); }; });

  auto* j = app.add_subcommand("jinv", "invariant of a diagram");
  j->add_option("FILE", file)->required();
  j->add_option("--diagram", name)->required();
  j->add_option("--format", format)->check(CLI::IsMember({"prime-vector", "entropy", "float"}));
  j->callback([&] { action = [&] { return cmd_jinv(R, file, name, format); }; });

  auto* e = app.add_subcommand("entropy", "Shannon entropy of a rational distribution, exact and float");
  e->add_option("--dist", dist)->required();
  e->callback([&] { action = [&] { return cmd_entropy(R, dist); }; });

  auto* c = app.add_subcommand("chain", "check the chain rule for Z and conditionals Y_i");
  c->add_option("--z", zs)->required();
  c->add_option("--y", ys, "one distribution per entry of Z")->required();
  c->callback([&] { action = [&] { return cmd_chain(R, zs, ys); }; });

  auto* n = app.add_subcommand("normalize", "rewrite a diagram into canonical form");
  n->add_option("FILE", file)->required();
  n->add_option("--diagram", name)->required();
  n->add_option("-o,--output", out);
  n->callback([&] { action = [&] { return cmd_normalize(R, file, name, out); }; });

  auto* cr = app.add_subcommand("check-rewrites", "random rewrite walk checking boundary and invariant");
  cr->add_option("FILE", file)->required();
  cr->add_option("--diagram", name)->required();
  cr->add_option("--trials", trials)->required();
  cr->callback([&] { action = [&] { return cmd_check_rewrites(R, file, name, trials); }; });

  auto* ev = app.add_subcommand("eval", "evaluate a network");
  ev->add_option("FILE", file)->required();
  ev->add_option("--gdiagram", name)->required();
  ev->add_option("--with", with)->required()->check(CLI::IsMember({"alphaU", "alphaF", "alphaC", "alphaCF"}));
  ev->add_option("--cocycle", cocycles, "repeat for alphaCF");
  ev->callback([&] { action = [&] { return cmd_eval(R, file, name, with, cocycles); }; });

  auto* x = app.add_subcommand("extension", "central extension of a two-cocycle");
  x->add_option("FILE", file)->required();
  x->add_option("--cocycle", name)->required();
  x->callback([&] { action = [&] { return cmd_extension(R, file, name); }; });

  auto* h = app.add_subcommand("h2", "cohomology of a finite group with coefficients in a finite module");
  h->add_option("--group", gname, "cyclic:N, aff1modp:P or AxB")->required();
  h->add_option("--module", marg, "z:M or z:M,N,...")->required();
  h->add_option("--action", action_kind)->check(CLI::IsMember({"trivial", "affine", "sign"}));
  h->add_option("--degree", degree)->check(CLI::IsMember({1, 2}));
  h->add_flag("--enumerate", enumerate, "cross-check against exhaustive enumeration");
  h->callback([&] { action = [&] { return cmd_h2(R, gname, marg, action_kind, degree, enumerate); }; });

  auto* cat = app.add_subcommand("catalog", "named cocycles: carry, witt, binomial, pmi");
  std::string which;
  cat->add_option("NAME", which)->required()->check(CLI::IsMember({"carry", "witt", "binomial", "pmi"}));
  cat->add_option("--n,--p,--k", param, "N for carry, p for witt, K for binomial");
  cat->add_option("--sequence", seq, "natural, fibonacci or a rational q");
  cat->add_option("--masses", masses, "outcome masses for pmi");
  cat->add_flag("--emit", emit, "print carry or witt as declarations");
  cat->callback([&] {
    action = [&] {
      if (which != "pmi" && param == 0) throw UsageError(which + " needs a parameter (--n, --p or --k)");
      if (which == "pmi" && masses.empty()) throw UsageError("pmi needs --masses");
      return cmd_catalog(R, which, param, seq, masses, emit);
    };
  });

  auto* rd = app.add_subcommand("render", "SVG picture of a diagram or network");
  rd->add_option("FILE", file)->required();
  rd->add_option("--diagram", name);
  rd->add_option("--gdiagram", gdiagram);
  rd->add_option("-o,--output", out);
  rd->add_option("--layer-height", ropts.layer_height)->check(CLI::PositiveNumber);
  rd->add_option("--strand-gap", ropts.strand_gap)->check(CLI::PositiveNumber);
  rd->add_option("--font-size", ropts.font_size)->check(CLI::PositiveNumber);
  rd->callback([&] { action = [&] { return cmd_render(R, file, name, gdiagram, out, ropts); }; });

  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_option("--fixtures", fixtures, "directory of .net fixtures");
  st->add_option("--goldens", goldens, "directory of SVG goldens");
  st->add_option("--only", only, "criterion numbers")->delimiter(',');
  st->callback([&] { action = [&] { return cmd_selftest(R, fixtures, goldens, only); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  auto diag = [&](const std::string& kind, const std::string& msg) {
    if (R.as_json) std::cout << json{{"error", kind}, {"message", msg}}.dump(2) << "\n";
    std::cerr << "error: " << msg << "\n";
  };
  try {
    return R.emit(action());
  } catch (const ParseError& err) {
    diag("parse", file + ":" + err.what());
    return kParse;
  } catch (const SemanticError& err) {
    diag("validation", file + ":" + err.what());
    return kInvalid;
  } catch (const ValidationError& err) {
    diag("validation", err.what());
    return kInvalid;
  } catch (const GValidationError& err) {
    diag("validation", err.what());
    return kInvalid;
  } catch (const GroupError& err) {
    diag("validation", err.what());
    return kInvalid;
  } catch (const CocycleError& err) {
    diag("validation", err.what());
    return kInvalid;
  } catch (const UsageError& err) {
    diag("usage", err.what());
    return kUsage;
  } catch (const RationalSyntaxError& err) {
    diag("usage", err.what());
    return kUsage;
  } catch (const std::exception& err) {
    diag("usage", err.what());
    return kUsage;
  }
}
