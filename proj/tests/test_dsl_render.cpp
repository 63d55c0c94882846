#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entronet/dsl.hpp"
#include "entronet/render.hpp"
#include "entronet/selftest.hpp"

using namespace entronet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class E>
std::pair<int, int> error_at(const std::string& src) {
  try {
    parse(src);
  } catch (const E& e) {
    return {e.line, e.col};
  }
  FAIL("no error for: " << src);
  return {0, 0};
}

std::vector<fs::path> nets() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(ENTRONET_FIXTURES))
    if (e.path().extension() == ".net") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("fixtures round trip through the printer", "[dsl]") {
  int parsed = 0;
  for (const auto& p : nets()) {
    SourceFile f;
    try {
      f = parse(slurp(p));
    } catch (const ParseError&) {
      continue;
    }
    ++parsed;
    INFO(p.filename().string());
    std::string text = print(f);
    SourceFile g = parse(text);
    CHECK(g == f);
    CHECK(print(g) == text);
  }
  CHECK(parsed >= 6);
}

TEST_CASE("printing normalizes layout", "[dsl]") {
  SourceFile f = parse("object   A = X+( 1/2 )  X+(2/4)   # trailing\n\n object B=X+(1)\n"
                       "diagram D : A -> B { add_merge @0 ( 1/2 , 1/2 ) }\n");
  CHECK(print(f) ==
        "object A = X+(1/2) X+(1/2)\n"
        "object B = X+(1)\n"
        "diagram D : A -> B {\n"
        "  add_merge @0 (1/2, 1/2)\n"
        "}\n");
}

TEST_CASE("payload and cocycle keys are printed in order", "[dsl]") {
  SourceFile f = parse("object A = X+(1)\ndiagram D : A -> A { dot @0 {5: 1, 2: 3} }\n"
                       "group G = cyclic(3)\nmodule U over G = z(3)\n"
                       "cocycle2 c : G -> U = { (2, 1): 1, (1, 2): 1, (2, 2): 0 }\n");
  std::string text = print(f);
  CHECK(text.find("dot @0 {2: 3, 5: 1}") != std::string::npos);
  CHECK(text.find("{ (1, 2): 1, (2, 1): 1 }") != std::string::npos);
}

TEST_CASE("mode switches are kept", "[dsl]") {
  SourceFile f = parse(slurp(fs::path(ENTRONET_FIXTURES) / "entropy.net"));
  CHECK(f.get<DiagramDecl>("Fold", "diagram").diagram.mode == Mode::HExact);
  CHECK(f.get<DiagramDecl>("FoldFloat", "diagram").diagram.mode == Mode::HFloat);
  CHECK(f.get<DiagramDecl>("Coin", "diagram").diagram.mode == Mode::J);
  std::string text = print(f);
  CHECK(text.find("mode H\n") != std::string::npos);
  CHECK(text.find("mode Hfloat\n") != std::string::npos);
  const auto& shifted = f.get<DiagramDecl>("Shifted", "diagram").diagram;
  CHECK(std::get<EntropyScalar>(j_invariant(shifted)).log_str() == "3/2*log(2) + log(3) + 1/2");
}

TEST_CASE("syntax errors carry positions", "[dsl]") {
  CHECK(error_at<ParseError>("object A = X+(1/0)\n") == std::pair{1, 17});
  CHECK(error_at<ParseError>("object A = X+(1)\nobject B = Z+(1)\n") == std::pair{2, 12});
  CHECK(error_at<ParseError>("object A = X+(1)\ndiagram D : A -> A {\n  add_merge @0\n  add_merge @0\n}\n").first == 4);
  CHECK(error_at<ParseError>("frobnicate\n") == std::pair{1, 1});
  CHECK_THROWS_AS(parse("object A = X+(1"), ParseError);
}

TEST_CASE("name and arity errors", "[dsl]") {
  CHECK(error_at<ParseError>("object A = X+(1)\ndiagram D : A -> B { }\nobject B = X+(1)\n") == std::pair{2, 18});
  CHECK(error_at<ParseError>("object A = X+(1)\nobject A = X+(2)\n") == std::pair{2, 8});
  CHECK(error_at<ParseError>("object A = X+(1)\ndiagram D : A -> A { frob @0 }\n") == std::pair{2, 22});
  CHECK(error_at<ParseError>("object A = X+(1) X+(1)\ndiagram D : A -> A { add_split @0 (1) }\n") == std::pair{2, 22});
  try {
    parse("object A = X+(1)\ndiagram D : A -> B { }\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "2:18: unknown object 'B' (declarations must precede use)");
  }
}

TEST_CASE("semantic errors", "[dsl]") {
  CHECK_THROWS_AS(parse("group G = aff1modp(4)\n"), SemanticError);
  CHECK_THROWS_AS(parse("group G = cyclic(3)\nmodule U over G = z(3) action { 1: [[2]] }\n"), SemanticError);
  CHECK_THROWS_AS(parse("group G = cyclic(2)\nmodule U over G = z(2)\ncocycle2 c : G -> U = { (1, 5): 1 }\n"),
                  SemanticError);
}

TEST_CASE("declared targets are checked on validation", "[dsl]") {
  SourceFile f = parse(slurp(fs::path(ENTRONET_FIXTURES) / "mismatch.net"));
  bool threw = false;
  for (const auto* d : f.all<DiagramDecl>()) {
    try {
      validate_decl(*d);
    } catch (const ValidationError& e) {
      threw = true;
      CHECK(e.code == ValidationError::Code::WeightMismatch);
      CHECK(e.layer == 2);
    }
  }
  CHECK(threw);

  SourceFile g = parse("object A = X+(1) X+(2)\nobject B = X+(4)\ndiagram D : A -> B { add_merge @0 }\n");
  try {
    validate_decl(*g.all<DiagramDecl>().front());
    FAIL("no throw");
  } catch (const ValidationError& e) {
    CHECK(e.code == ValidationError::Code::BoundaryMismatch);
  }
}

TEST_CASE("networks parse", "[dsl]") {
  SourceFile f = parse(slurp(fs::path(ENTRONET_FIXTURES) / "networks.net"));
  const auto& U = f.get<ModuleDecl>("F3", "module").module;
  CHECK(U.group().order() == 6);
  CHECK(U.act(4, {1}) == Elem{2});
  const auto& nested = f.get<GDiagramDecl>("Nested", "gdiagram").diagram;
  CHECK(eval_alpha_U(U, nested) == Elem{2});
  const auto& Z = f.get<ModuleDecl>("U", "module").module;
  const auto& carry = f.get<Cocycle2Decl>("carry", "cocycle2").values;
  const auto& id = f.get<Cocycle1Decl>("id", "cocycle1").values;
  CHECK(verify_cocycle2(Z, carry));
  CHECK(eval_alpha_f(Z, f.get<GDiagramDecl>("Circle", "gdiagram").diagram, id) == Elem{1});
  CHECK(eval_alpha_c(Z, f.get<GDiagramDecl>("Fork", "gdiagram").diagram, carry) == Elem{1});
  CHECK_THROWS_AS(f.get<GDiagramDecl>("Missing", "gdiagram"), std::invalid_argument);
}

TEST_CASE("generated sources round trip", "[dsl][property]") {
  Rng r(67);
  for (int t = 0; t < 200; ++t) {
    SourceFile f = random_source(r);
    std::string text = print(f);
    SourceFile g = parse(text);
    CHECK(g == f);
    CHECK(print(g) == text);
  }
}

TEST_CASE("bands place strands", "[render]") {
  RenderOptions o;
  detail::Canvas cv(o, 3, 1);
  std::vector<std::pair<int, int>> three{{0, 1}, {0, 1}, {1, 1}};
  detail::Band pass = detail::layout_band(cv, 0, 0, 0, 0, three, three, false, false, false, true);
  REQUIRE(pass.segments.size() == 3);
  for (const auto& s : pass.segments) CHECK(s.x1 == s.x2);
  CHECK(pass.segments[2].style == 1);

  std::vector<std::pair<int, int>> two{{0, 1}, {1, 1}};
  detail::Band merge = detail::layout_band(cv, 0, 0, 2, 1, three, two, false, false, false, false);
  REQUIRE(merge.segments.size() == 4);
  CHECK(merge.marker);
  int into = 0;
  for (const auto& s : merge.segments)
    if (s.x2 == merge.mx && s.y2 == merge.my) ++into;
  CHECK(into == 2);
}

TEST_CASE("svg output", "[render]") {
  SourceFile f = parse(slurp(fs::path(ENTRONET_FIXTURES) / "affine.net"));
  const Diagram& d = f.get<DiagramDecl>("Mult", "diagram").diagram;
  std::string a = to_svg(d), b = to_svg(d);
  CHECK(a == b);
  std::size_t n = 0;
  CHECK(svg_well_formed(a, &n));
  CHECK(n == svg_element_count(d.layers.size()));
  CHECK(a.find("#c0392b") != std::string::npos);
  CHECK(a.find("source: X+(1/2) Y+(3) X+(2/3) Y+(5)") != std::string::npos);

  Diagram id{d.source, {}, Mode::J};
  CHECK(svg_well_formed(to_svg(id), &n));
  CHECK(n == 3);

  RenderOptions o;
  o.layer_height = 0;
  CHECK_THROWS_AS(to_svg(d, o), std::invalid_argument);
  o.layer_height = 80;
  CHECK(to_svg(d, o) != a);

  CHECK_FALSE(svg_well_formed("<svg><path d=\"M 0 0\"></svg>"));
  CHECK_FALSE(svg_well_formed("<svg><rect/></svg>"));
  Diagram lbl{DiagObject{{Xp(1)}}, {make_dot(0, symbol(2, 3))}, Mode::J};
  CHECK(svg_well_formed(to_svg(lbl)));
}

TEST_CASE("network svg", "[render]") {
  SourceFile f = parse(slurp(fs::path(ENTRONET_FIXTURES) / "networks.net"));
  const auto& U = f.get<ModuleDecl>("U", "module").module;
  const auto& theta = f.get<GDiagramDecl>("Theta", "gdiagram").diagram;
  std::string s = to_svg(U, theta);
  std::size_t n = 0;
  CHECK(svg_well_formed(s, &n));
  CHECK(n == svg_element_count(theta.layers.size()));
  CHECK(s.find("#1f3a93") != std::string::npos);
}

TEST_CASE("svg goldens", "[render]") {
  int compared = 0;
  for (const auto& p : nets()) {
    SourceFile f;
    try {
      f = parse(slurp(p));
    } catch (const ParseError&) {
      continue;
    }
    for (const auto* d : f.all<DiagramDecl>()) {
      fs::path g = fs::path(ENTRONET_GOLDENS) / (p.stem().string() + "." + d->name + ".svg");
      if (!fs::exists(g)) continue;
      ++compared;
      INFO(g.filename().string());
      CHECK(to_svg(d->diagram) == slurp(g));
    }
  }
  CHECK(compared >= 3);
}
